#include "ifsc/table.hpp"

#include <cstdio>
#include <limits>

#include "json.hpp"

namespace ifsc {

void ResultTable::add_metadata(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

std::vector<Cell>& ResultTable::add_row() {
    rows.emplace_back();
    return rows.back();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& cell) {
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
    return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (const auto& [key, value] : table.metadata) {
        out += "# ";
        out += key;
        out += ": ";
        out += value;
        out += '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ResultTable& table) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json meta;
    for (const auto& [key, value] : table.metadata) {
        // the config echo is itself JSON; embed it structurally
        if (!value.empty() && (value.front() == '{' || value.front() == '[')) {
            nlohmann::ordered_json parsed =
                nlohmann::ordered_json::parse(value, nullptr, false);
            if (!parsed.is_discarded()) {
                meta[key] = std::move(parsed);
                continue;
            }
        }
        meta[key] = value;
    }
    doc["metadata"] = std::move(meta);
    doc["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell)) {
                const double v = std::get<double>(cell);
                // JSON has no NaN/inf literals; fall back to strings there
                if (v != v || v == std::numeric_limits<double>::infinity() ||
                    v == -std::numeric_limits<double>::infinity()) {
                    jrow.push_back(format_double(v));
                } else {
                    jrow.push_back(v);
                }
            } else if (std::holds_alternative<long long>(cell)) {
                jrow.push_back(std::get<long long>(cell));
            } else {
                jrow.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(jrow));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace ifsc

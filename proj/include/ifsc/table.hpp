#pragma once

#include <string>
#include <variant>
#include <vector>

namespace ifsc {

using Cell = std::variant<double, long long, std::string>;

/// Self-describing result table: ordered metadata (tool version and the
/// full run configuration) plus typed columns. Serialization is
/// deterministic so identical configurations reproduce identical bytes.
struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_metadata(std::string key, std::string value);
    std::vector<Cell>& add_row();
};

/// Deterministic %.12g formatting with '.' as the decimal separator.
std::string format_double(double v);

/// '#'-prefixed metadata lines, a header row, one line per data row,
/// newline-terminated.
std::string to_csv(const ResultTable& table);

std::string to_json(const ResultTable& table);

}  // namespace ifsc

#include "ifsc/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ifsc/scenarios.hpp"
#include "ifsc/version.hpp"

namespace ifsc {

namespace {

using njson = nlohmann::ordered_json;

std::vector<double> dr_grid_from(const RunConfig& c) {
    if (!(c.dr_step > 0.0)) throw ConfigError("--dr-step must be positive");
    if (c.dr_stop < c.dr_start) throw ConfigError("--dr-stop must be >= --dr-start");
    std::vector<double> grid;
    const long long n =
        static_cast<long long>(std::floor((c.dr_stop - c.dr_start) / c.dr_step + 1e-9));
    for (long long i = 0; i <= n; ++i) grid.push_back(c.dr_start + i * c.dr_step);
    return grid;
}

Scheme scheme_from(const std::string& s) {
    if (s == "if") return Scheme::If;
    if (s == "if-suc") return Scheme::IfSuc;
    throw ConfigError("--scheme must be 'if' or 'if-suc'");
}

AlphaMode alpha_mode_from(const std::string& s) {
    if (s == "paper") return AlphaMode::Published;
    if (s == "exact") return AlphaMode::Exact;
    throw ConfigError("--alpha-mode must be 'paper' or 'exact'");
}

bool halve_from(const std::string& s) {
    if (s == "on") return true;
    if (s == "off") return false;
    throw ConfigError("--halve must be 'on' or 'off'");
}

void require_seed(const RunConfig& c) {
    if (!c.seed_set)
        throw ConfigError("--seed is required for stochastic commands");
}

Matrix matrix_from_json_text(const std::string& text, const char* what) {
    njson doc = njson::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array() || doc.empty())
        throw ConfigError(std::string(what) + ": expected a JSON matrix (array of rows)");
    const std::size_t rows = doc.size();
    if (!doc[0].is_array() || doc[0].empty())
        throw ConfigError(std::string(what) + ": expected a JSON matrix (array of rows)");
    const std::size_t cols = doc[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!doc[i].is_array() || doc[i].size() != cols)
            throw ConfigError(std::string(what) + ": ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) {
            if (!doc[i][j].is_number())
                throw ConfigError(std::string(what) + ": matrix entries must be numbers");
            m(i, j) = doc[i][j].get<double>();
        }
    }
    return m;
}

std::string int_matrix_to_json(const IntMatrix& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += ',';
        out += '[';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += std::to_string(m(i, j));
        }
        out += ']';
    }
    out += ']';
    return out;
}

std::string vector_to_json(const Vector& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    out += ']';
    return out;
}

Matrix precoder_matrix_from(const RunConfig& c) {
    if (c.precoder == "identity") return Matrix::Identity(c.k, c.k);
    if (c.precoder == "cyclo") return cyclotomic_precoder(c.k).matrix;
    if (c.precoder == "cre") {
        require_seed(c);
        RngStream stream(c.seed, 0xC0DE5EEDULL);
        return sample_haar_orthogonal(c.k, stream);
    }
    if (c.precoder.rfind("file:", 0) == 0) {
        const std::string path = c.precoder.substr(5);
        std::ifstream in(path);
        if (!in) throw ConfigError("--precoder file not readable: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return matrix_from_json_text(ss.str(), "--precoder");
    }
    throw ConfigError("--precoder must be identity, cre, cyclo, or file:<path>");
}

ResultTable make_table(const RunConfig& c) {
    ResultTable t;
    t.add_metadata("ifsc", kVersion);
    t.add_metadata("config", config_to_json(c));
    return t;
}

ResultTable cmd_rates(const RunConfig& c) {
    CovarianceMatrix cov = [&]() {
        if (!c.cov.empty()) {
            return CovarianceMatrix(matrix_from_json_text(c.cov, "--cov"));
        } else if (!c.cov_file.empty()) {
            std::ifstream in(c.cov_file);
            if (!in) throw ConfigError("--cov-file not readable: " + c.cov_file);
            std::stringstream ss;
            ss << in.rdbuf();
            return CovarianceMatrix(matrix_from_json_text(ss.str(), "--cov-file"));
        } else if (!c.spectrum.empty()) {
            njson doc = njson::parse(c.spectrum, nullptr, false);
            if (doc.is_discarded() || !doc.is_array() || doc.empty())
                throw ConfigError("--spectrum: expected a JSON array of diagonal entries");
            Vector d(doc.size());
            for (std::size_t i = 0; i < doc.size(); ++i) d[i] = doc[i].get<double>();
            SourceSpectrum spec{std::move(d)};
            Matrix k_xx = (spec.d.array() - 1.0).matrix().asDiagonal();
            return CovarianceMatrix(std::move(k_xx));
        } else if (c.m > 0) {
            require_seed(c);
            RngStream stream(c.seed, 0);
            return cran_covariance(CranModel{c.k, c.m, c.snr}, stream);
        }
        throw ConfigError("rates: provide --cov, --cov-file, --spectrum, or --m");
    }();

    const double r_bt = berger_tung_rate(cov);
    IfOptimum opt = if_opt_rate(cov);
    SucOptimum suc = if_suc_opt_rate(cov);

    ResultTable t = make_table(c);
    t.columns = {"k", "r_bt", "r_if_opt", "r_if_suc", "a_if", "a_suc"};
    auto& row = t.add_row();
    row.emplace_back(static_cast<long long>(cov.source_count()));
    row.emplace_back(r_bt);
    row.emplace_back(opt.rate);
    row.emplace_back(suc.rate);
    row.emplace_back(int_matrix_to_json(opt.a));
    row.emplace_back(int_matrix_to_json(suc.a));
    return t;
}

ResultTable cmd_outage(const RunConfig& c) {
    require_seed(c);
    OutageCurve curve = worst_case_outage_curve(c.k, c.rbt, dr_grid_from(c), c.grid_step,
                                                c.trials, scheme_from(c.scheme), c.seed,
                                                c.workers);
    ResultTable t = make_table(c);
    t.columns = {"dr", "outage", "complement", "half_width", "trials", "argmax_split"};
    for (std::size_t j = 0; j < curve.dr.size(); ++j) {
        auto& row = t.add_row();
        row.emplace_back(curve.dr[j]);
        row.emplace_back(curve.outage[j]);
        row.emplace_back(1.0 - curve.outage[j]);
        row.emplace_back(curve.half_width[j]);
        row.emplace_back(static_cast<long long>(curve.trials_per_point));
        row.emplace_back(vector_to_json(curve.spectra_rates[curve.argmax_spectrum[j]]));
    }
    return t;
}

ResultTable cmd_bounds(const RunConfig& c) {
    require_seed(c);
    BoundComparison report =
        bound_vs_empirical_report(c.k, c.rbt, dr_grid_from(c), c.grid_step, c.trials, c.seed,
                                  halve_from(c.halve), alpha_mode_from(c.alpha_mode), c.workers);
    ResultTable t = make_table(c);
    t.columns = {"dr",
                 "if_outage", "if_complement", "if_half_width",
                 "suc_outage", "suc_complement", "suc_half_width",
                 "if_union_max", "if_closed", "suc_union_max", "suc_closed"};
    for (std::size_t j = 0; j < report.dr.size(); ++j) {
        auto& row = t.add_row();
        row.emplace_back(report.dr[j]);
        row.emplace_back(report.if_outage[j]);
        row.emplace_back(1.0 - report.if_outage[j]);
        row.emplace_back(report.if_half_width[j]);
        row.emplace_back(report.suc_outage[j]);
        row.emplace_back(1.0 - report.suc_outage[j]);
        row.emplace_back(report.suc_half_width[j]);
        row.emplace_back(report.if_union_max[j]);
        row.emplace_back(report.if_closed[j]);
        row.emplace_back(report.suc_union_max[j]);
        row.emplace_back(report.suc_closed[j]);
    }
    return t;
}

ResultTable cmd_worstcase_grid(const RunConfig& c) {
    if (!(c.rbt_step > 0.0)) throw ConfigError("--rbt-step must be positive");
    if (c.rbt_stop < c.rbt_start) throw ConfigError("--rbt-stop must be >= --rbt-start");
    Matrix p = precoder_matrix_from(c);

    ResultTable t = make_table(c);
    t.columns = {"rbt", "grid_max_rate", "grid_efficiency", "bound", "bound_efficiency",
                 "slack", "argmax_split"};
    const long long n =
        static_cast<long long>(std::floor((c.rbt_stop - c.rbt_start) / c.rbt_step + 1e-9));
    std::vector<GridGuarantee> results(n + 1);
    std::vector<double> rbts(n + 1);
    for (long long i = 0; i <= n; ++i) rbts[i] = c.rbt_start + i * c.rbt_step;
    parallel_for(static_cast<int>(n + 1), c.workers, [&](int i) {
        results[i] = grid_rate_guarantee(c.k, rbts[i], c.delta, p);
    });
    for (long long i = 0; i <= n; ++i) {
        auto& row = t.add_row();
        row.emplace_back(rbts[i]);
        row.emplace_back(results[i].grid_max);
        row.emplace_back(results[i].grid_max / rbts[i]);
        row.emplace_back(results[i].bound);
        row.emplace_back(results[i].bound / rbts[i]);
        row.emplace_back(results[i].slack);
        row.emplace_back(vector_to_json(results[i].argmax_rates));
    }
    return t;
}

ResultTable cmd_cran(const RunConfig& c) {
    require_seed(c);
    if (c.m < 1) throw ConfigError("cran: --m must be >= 1");
    CranCurve curve = cran_outage_curve(CranModel{c.k, c.m, c.snr}, dr_grid_from(c), c.trials,
                                        scheme_from(c.scheme), c.seed, c.workers);
    ResultTable t = make_table(c);
    t.columns = {"dr", "outage", "complement", "half_width", "trials"};
    for (std::size_t j = 0; j < curve.dr.size(); ++j) {
        auto& row = t.add_row();
        row.emplace_back(curve.dr[j]);
        row.emplace_back(curve.outage[j]);
        row.emplace_back(1.0 - curve.outage[j]);
        row.emplace_back(curve.half_width[j]);
        row.emplace_back(static_cast<long long>(curve.trials));
    }
    return t;
}

struct ConfigField {
    const char* key;
    std::function<void(RunConfig&, const njson&)> load;
    std::function<njson(const RunConfig&)> dump;
};

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = {
        {"command", [](RunConfig& c, const njson& v) { c.command = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.command); }},
        {"k", [](RunConfig& c, const njson& v) { c.k = v.get<int>(); },
         [](const RunConfig& c) { return njson(c.k); }},
        {"rbt", [](RunConfig& c, const njson& v) { c.rbt = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.rbt); }},
        {"dr_start", [](RunConfig& c, const njson& v) { c.dr_start = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.dr_start); }},
        {"dr_stop", [](RunConfig& c, const njson& v) { c.dr_stop = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.dr_stop); }},
        {"dr_step", [](RunConfig& c, const njson& v) { c.dr_step = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.dr_step); }},
        {"grid_step", [](RunConfig& c, const njson& v) { c.grid_step = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.grid_step); }},
        {"trials", [](RunConfig& c, const njson& v) { c.trials = v.get<std::uint64_t>(); },
         [](const RunConfig& c) { return njson(c.trials); }},
        {"seed",
         [](RunConfig& c, const njson& v) {
             c.seed = v.get<std::uint64_t>();
             c.seed_set = true;
         },
         [](const RunConfig& c) {
             return c.seed_set ? njson(c.seed) : njson();
         }},
        {"scheme", [](RunConfig& c, const njson& v) { c.scheme = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.scheme); }},
        {"precoder", [](RunConfig& c, const njson& v) { c.precoder = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.precoder); }},
        {"delta", [](RunConfig& c, const njson& v) { c.delta = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.delta); }},
        {"alpha_mode", [](RunConfig& c, const njson& v) { c.alpha_mode = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.alpha_mode); }},
        {"halve", [](RunConfig& c, const njson& v) { c.halve = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.halve); }},
        {"format", [](RunConfig& c, const njson& v) { c.format = v.get<std::string>(); },
         [](const RunConfig& c) { return njson(c.format); }},
        {"cov", [](RunConfig& c, const njson& v) { c.cov = v.get<std::string>(); },
         [](const RunConfig& c) { return c.cov.empty() ? njson() : njson(c.cov); }},
        {"cov_file", [](RunConfig& c, const njson& v) { c.cov_file = v.get<std::string>(); },
         [](const RunConfig& c) { return c.cov_file.empty() ? njson() : njson(c.cov_file); }},
        {"spectrum", [](RunConfig& c, const njson& v) { c.spectrum = v.get<std::string>(); },
         [](const RunConfig& c) { return c.spectrum.empty() ? njson() : njson(c.spectrum); }},
        {"m", [](RunConfig& c, const njson& v) { c.m = v.get<int>(); },
         [](const RunConfig& c) { return c.m > 0 ? njson(c.m) : njson(); }},
        {"snr", [](RunConfig& c, const njson& v) { c.snr = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.snr); }},
        {"rbt_start", [](RunConfig& c, const njson& v) { c.rbt_start = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.rbt_start); }},
        {"rbt_stop", [](RunConfig& c, const njson& v) { c.rbt_stop = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.rbt_stop); }},
        {"rbt_step", [](RunConfig& c, const njson& v) { c.rbt_step = v.get<double>(); },
         [](const RunConfig& c) { return njson(c.rbt_step); }},
    };
    return fields;
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
    njson doc = njson::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError("config: expected a JSON object");
    RunConfig c;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool known = false;
        for (const auto& field : config_fields()) {
            if (it.key() == field.key) {
                try {
                    field.load(c, it.value());
                } catch (const njson::exception&) {
                    throw ConfigError("config: bad value for key '" + it.key() + "'");
                }
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("config: unknown key '" + it.key() + "'");
    }
    return c;
}

std::string config_to_json(const RunConfig& config) {
    njson doc;
    for (const auto& field : config_fields()) {
        njson v = field.dump(config);
        if (!v.is_null()) doc[field.key] = std::move(v);
    }
    return doc.dump();
}

RunConfig config_from_artifact(const std::string& artifact_text) {
    // JSON artifact?
    njson doc = njson::parse(artifact_text, nullptr, false);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("metadata") &&
        doc["metadata"].contains("config")) {
        return config_from_json(doc["metadata"]["config"].dump());
    }
    // CSV artifact: look for the '# config: {...}' metadata line.
    std::istringstream lines(artifact_text);
    std::string line;
    const std::string prefix = "# config: ";
    while (std::getline(lines, line)) {
        if (line.rfind(prefix, 0) == 0) return config_from_json(line.substr(prefix.size()));
        if (!line.empty() && line[0] != '#') break;
    }
    throw ConfigError("replay: artifact does not embed a config");
}

ResultTable run_command(const RunConfig& config) {
    if (config.k < 1) throw ConfigError("--k must be >= 1");
    if (config.format != "csv" && config.format != "json")
        throw ConfigError("--format must be 'csv' or 'json'");
    if (config.workers < 1) throw ConfigError("--workers must be >= 1");
    if (config.command == "rates") return cmd_rates(config);
    if (config.command == "outage") return cmd_outage(config);
    if (config.command == "bounds") return cmd_bounds(config);
    if (config.command == "worstcase-grid") return cmd_worstcase_grid(config);
    if (config.command == "cran") return cmd_cran(config);
    throw ConfigError("unknown command '" + config.command + "'");
}

namespace {

void add_shared_options(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--k", c.k, "number of sources");
    cmd->add_option("--rbt", c.rbt, "benchmark sum rate in bits");
    cmd->add_option("--dr-start", c.dr_start, "first excess rate");
    cmd->add_option("--dr-stop", c.dr_stop, "last excess rate");
    cmd->add_option("--dr-step", c.dr_step, "excess-rate grid step");
    cmd->add_option("--grid-step", c.grid_step, "spectrum grid step in bits");
    cmd->add_option("--trials", c.trials, "Monte-Carlo trials per grid point");
    cmd->add_option("--seed", c.seed, "PRNG seed (required for stochastic commands)");
    cmd->add_option("--scheme", c.scheme, "if | if-suc");
    cmd->add_option("--precoder", c.precoder, "identity | cre | cyclo | file:<path>");
    cmd->add_option("--delta", c.delta, "rate-grid resolution as a fraction of rbt");
    cmd->add_option("--alpha-mode", c.alpha_mode, "paper | exact");
    cmd->add_option("--halve", c.halve, "on | off");
    cmd->add_option("--workers", c.workers, "worker threads (does not affect output bytes)");
    cmd->add_option("--out", c.out, "output path (default stdout)");
    cmd->add_option("--format", c.format, "csv | json");
    cmd->add_option("--cov", c.cov, "inline JSON covariance matrix");
    cmd->add_option("--cov-file", c.cov_file, "path to a JSON covariance matrix");
    cmd->add_option("--spectrum", c.spectrum, "inline JSON array of diagonal entries of I+K");
    cmd->add_option("--m", c.m, "relay-model transmitters");
    cmd->add_option("--snr", c.snr, "relay-model SNR (absorbed by default)");
    cmd->add_option("--rbt-start", c.rbt_start, "sweep start (worstcase-grid)");
    cmd->add_option("--rbt-stop", c.rbt_stop, "sweep stop (worstcase-grid)");
    cmd->add_option("--rbt-step", c.rbt_step, "sweep step (worstcase-grid)");
}

void write_output(const RunConfig& c, const ResultTable& table) {
    const std::string text = c.format == "json" ? to_json(table) : to_csv(table);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.out, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + c.out);
        out << text;
    }
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"integer-forcing source coding rates, outage sweeps, and bounds"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_path;
    std::string replay_path;

    const char* commands[] = {"rates", "outage", "bounds", "worstcase-grid", "cran"};
    for (const char* name : commands) {
        CLI::App* cmd = app.add_subcommand(name);
        cmd->add_option("--config", config_path, "JSON config file (flags override)");
        add_shared_options(cmd, config);
    }
    CLI::App* replay = app.add_subcommand("replay", "re-run a command from an artifact");
    replay->add_option("artifact", replay_path, "CSV or JSON artifact produced by ifsc")
        ->required();
    replay->add_option("--out", config.out, "output path (default stdout)");
    replay->add_option("--format", config.format, "csv | json");
    replay->add_option("--workers", config.workers, "worker threads");

    try {
        // A config file provides defaults; re-parse so explicit flags win.
        app.parse(argc, argv);
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config file: " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            RunConfig from_file = config_from_json(ss.str());
            from_file.command = active->get_name();
            config = from_file;
            app.clear();
            app.parse(argc, argv);
            active = app.get_subcommands().front();
        }
        if (active->get_name() == "replay") {
            std::ifstream in(replay_path);
            if (!in) throw ConfigError("replay: cannot read artifact: " + replay_path);
            std::stringstream ss;
            ss << in.rdbuf();
            RunConfig replayed = config_from_artifact(ss.str());
            replayed.out = config.out;
            if (replay->count("--format")) replayed.format = config.format;
            replayed.workers = config.workers;
            config = replayed;
        } else {
            config.command = active->get_name();
            if (active->count("--seed")) config.seed_set = true;
        }

        const auto start = std::chrono::steady_clock::now();
        ResultTable table = run_command(config);
        write_output(config, table);
        const auto stop = std::chrono::steady_clock::now();
        // Wall time goes to stderr only: artifacts stay byte-reproducible.
        std::cerr << "ifsc " << config.command << ": "
                  << std::chrono::duration<double>(stop - start).count() << " s\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return static_cast<int>(ErrorClass::Validation);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorClass::Numerical);
    }
}

}  // namespace ifsc

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "adacal/errors.hpp"
#include "adacal/harness.hpp"

namespace {

using namespace adacal;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kContractViolation = 2;

/// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    fn(out);
}

struct Cell {
    AlgorithmSpec algorithm;
    EnvSpec env;
    std::size_t horizon;
    std::uint64_t seed;
};

Cell first_cell(const ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                std::optional<std::size_t> horizon) {
    if (cfg.algorithms.empty()) throw ConfigError("config has no [algorithm] section");
    if (cfg.envs.empty()) throw ConfigError("config has no [env] section");
    if (!horizon && cfg.horizons.empty()) throw ConfigError("horizons: missing (or pass --horizon)");
    if (!seed && cfg.seeds.empty()) throw ConfigError("seeds: missing (or pass --seed)");
    return {cfg.algorithms.front(), cfg.envs.front(), horizon ? *horizon : cfg.horizons.front(),
            seed ? *seed : cfg.seeds.front()};
}

void dump(const std::string& path, const Transcript& transcript) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_transcript(out, transcript);
}

int fit_command(const std::string& csv, const std::string& column) {
    std::ifstream in(csv);
    if (!in) throw ConfigError("cannot open '" + csv + "'");
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
    }
    auto index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ConfigError("fit: column '" + name + "' not in " + csv);
    };
    const std::size_t ia = index_of("algorithm"), ie = index_of("env"), it = index_of("T"),
                      iv = index_of(column);
    std::map<std::pair<std::string, std::string>, std::map<double, std::vector<double>>> groups;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cells.size() != header.size()) throw ConfigError("fit: ragged row in " + csv);
        groups[{cells[ia], cells[ie]}][std::stod(cells[it])].push_back(std::stod(cells[iv]));
    }
    std::cout << "algorithm,env,metric,points,slope\n";
    for (const auto& [key, by_t] : groups) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [t, values] : by_t) pairs.emplace_back(t, median(values));
        std::cout << key.first << ',' << key.second << ',' << column << ',' << pairs.size() << ',';
        try {
            std::cout << fit_exponent(pairs) << '\n';
        } catch (const std::invalid_argument& ex) {
            std::cout << "nan\n";
            std::cerr << key.first << '/' << key.second << ": " << ex.what() << '\n';
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive online calibration laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_path, transcript_path, fit_column = "Cal1", input_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;

    auto* simulate = app.add_subcommand("simulate", "Run one (algorithm, env, T, seed) cell");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run the full algorithm x env x T x seed grid");
    auto* meta = app.add_subcommand("meta", "Run the restart framework on one cell");
    for (auto* sub : {simulate, sweep_cmd, meta}) {
        sub->add_option("--config", config_path, "Experiment config file")->required();
        sub->add_option("--out", out_path, "Output CSV (default: config out, else stdout)");
    }
    for (auto* sub : {simulate, meta}) {
        sub->add_option("--seed", seed, "Seed (default: first configured seed)");
        sub->add_option("--horizon", horizon, "Horizon (default: first configured horizon)");
        sub->add_option("--dump-transcript", transcript_path, "Write the round-by-round transcript");
    }
    auto* metrics_cmd = app.add_subcommand("metrics", "Compute metrics from a transcript file");
    metrics_cmd->add_option("transcript", input_path, "Transcript file")->required();
    metrics_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");
    auto* fit = app.add_subcommand("fit", "Fit log-log exponents of median metric vs T");
    fit->add_option("rows", input_path, "Rows CSV written by sweep")->required();
    fit->add_option("--column", fit_column, "Metric column (Cal1, Cal2, PCal2, PKL)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        if (*metrics_cmd) {
            std::ifstream in(input_path);
            if (!in) throw ConfigError("cannot open '" + input_path + "'");
            const Transcript t = read_transcript(in);
            const MetricReport m = compute_all(t.view());
            const auto means = t.means();
            emit(out_path, [&](std::ostream& os) {
                os.precision(17);
                os << "T,Cal1,Cal2,PCal2,PKL,C,K\n"
                   << t.horizon() << ',' << m.cal1 << ',' << m.cal2 << ',' << m.pcal2 << ',' << m.pkl;
                if (means.empty()) os << ",,\n";
                else os << ',' << nonstationarity_c(means).c << ',' << segment_count_k(means) << '\n';
            });
            return kOk;
        }
        if (*fit) return fit_command(input_path, fit_column);

        ExperimentConfig cfg = load_config(config_path);
        if (out_path.empty()) out_path = cfg.out;

        if (*simulate || *meta) {
            Cell cell = first_cell(cfg, seed, horizon);
            if (*meta) cell.algorithm.params["meta"] = "true";
            if (cell.horizon == 0 || (cell.horizon & (cell.horizon - 1)) != 0)
                throw ConfigError("--horizon: must be a power of two");
            const CellOutput out = run_cell(cfg, cell.algorithm, cell.env, cell.horizon, cell.seed);
            dump(transcript_path, out.transcript);
            if (*meta) emit(out_path, [&](std::ostream& os) { write_meta_log(os, *out.meta_log); });
            else emit(out_path, [&](std::ostream& os) { write_rows_csv(os, {out.row}); });
            return kOk;
        }

        const SweepResult result = sweep(cfg);
        emit(out_path, [&](std::ostream& os) { write_rows_csv(os, result.rows); });
        if (!out_path.empty()) {
            emit(out_path + ".summary.csv", [&](std::ostream& os) { write_summary_csv(os, result.summary); });
            emit(out_path + ".timing.csv", [&](std::ostream& os) { write_timing_csv(os, result.rows); });
        } else {
            write_summary_csv(std::cerr, result.summary);
        }
        for (const auto& f : result.failures) std::cerr << "failed cell " << f.cell << ": " << f.message << '\n';
        return result.failures.empty() ? kOk : kContractViolation;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kContractViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kContractViolation;
    }
}

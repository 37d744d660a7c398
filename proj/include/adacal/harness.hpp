#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adacal/environments.hpp"
#include "adacal/forecasters.hpp"
#include "adacal/meta.hpp"
#include "adacal/metrics.hpp"
#include "adacal/transcript.hpp"

namespace adacal {

/// An [algorithm] block. Recognised parameters:
///   c_guess      non-stationarity handed to the forecaster, or "truth"
///                for the environment's own C (default 0)
///   pieces       grid size override for the uniform forecasters
///   meta         "true" wraps the forecaster in the restart framework
///   certificate  cal1 | cal2 | pkl (meta only, default cal1)
///   multiplier   certificate scale (meta only, default 1)
struct AlgorithmSpec {
    std::string name;
    std::string label;  // report name; defaults to name, or meta_<name>
    std::map<std::string, std::string> params;

    std::string report_name() const;
    bool is_meta() const;
};

struct ExperimentConfig {
    std::vector<AlgorithmSpec> algorithms;
    std::vector<EnvSpec> envs;  // horizon is filled in per cell
    std::vector<std::size_t> horizons;
    std::vector<std::uint64_t> seeds;
    double delta = 0.05;
    double c_iota = kDefaultIotaScale;
    std::string out;
    std::size_t threads = 0;  // 0: hardware concurrency
};

/// Flat key = value lines, '#' comments, with repeatable [algorithm] and
/// [env] sections. Throws ConfigError with the line number.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
/// Powers-of-two horizons, distinct seeds, known algorithm names.
void validate(const ExperimentConfig& config);

std::vector<std::string> algorithm_names();

/// Throws ConfigError listing the valid names on an unknown algorithm.
std::unique_ptr<Forecaster> make_forecaster(const AlgorithmSpec& spec, std::size_t horizon,
                                            double c_guess, double iota, CounterRng rng);

struct ReportRow {
    std::string algorithm;
    std::string env;
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    MetricReport metrics;
    double c = 0.0;
    std::size_t k = 1;
    double wall_time = 0.0;  // seconds
};

struct CellOutput {
    ReportRow row;
    Transcript transcript;
    std::optional<MetaLog> meta_log;
};

/// Plays a forecaster against a fixed outcome stream. Every round is checked:
/// the law must be valid, carry the realized prediction, and live on the
/// grid declared just before the round; violations throw ContractViolation
/// naming `who` and the round.
Transcript run_forecaster(Forecaster& forecaster, std::span<const double> means,
                          std::span<const int> outcomes, const std::string& who);

/// One (algorithm, env, T, seed) run with the same per-round checks.
CellOutput run_cell(const ExperimentConfig& config, const AlgorithmSpec& algorithm,
                    const EnvSpec& env, std::size_t horizon, std::uint64_t seed);

/// Runs every cell sequentially; the first failure propagates.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

struct CellFailure {
    std::string cell;  // "algorithm/env/T/seed"
    std::string message;
};

struct SummaryRow {
    std::string algorithm;
    std::string env;
    std::size_t horizon = 0;
    std::size_t count = 0;
    MetricReport mean;
    MetricReport median;
    double c = 0.0;
};

struct SweepResult {
    std::vector<ReportRow> rows;  // sorted by (algorithm, env, T, seed)
    std::vector<SummaryRow> summary;
    std::vector<CellFailure> failures;
};

/// All cells in parallel; a failing cell is recorded and the rest finish.
SweepResult sweep(const ExperimentConfig& config);

void sort_rows(std::vector<ReportRow>& rows);
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

/// Rows without wall time, so the bytes depend only on the config.
void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows);
void write_timing_csv(std::ostream& os, const std::vector<ReportRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& summary);

/// Least-squares slope of log(value) on log(T). Needs >= 3 pairs with
/// positive T and value.
double fit_exponent(const std::vector<std::pair<double, double>>& pairs);

double median(std::vector<double> values);

}  // namespace adacal

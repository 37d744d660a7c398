#include "adacal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "adacal/errors.hpp"
#include "adacal/transform.hpp"

namespace adacal {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(field + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(field + ": not a number: '" + s + "'");
    return v;
}

std::uint64_t to_uint(const std::string& s, const std::string& field) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(field + ": not a nonnegative integer: '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ConfigError(field + ": out of range: '" + s + "'");
    }
}

bool to_bool(const std::string& s, const std::string& field) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(field + ": expected true or false, got '" + s + "'");
}

/// "a..b" expands to every integer in between; "2^k" is a power of two.
std::vector<std::uint64_t> parse_int_list(const std::string& s, const std::string& field) {
    std::vector<std::uint64_t> out;
    auto one = [&](const std::string& tok) -> std::uint64_t {
        if (tok.rfind("2^", 0) == 0) {
            const auto k = to_uint(tok.substr(2), field);
            if (k > 62) throw ConfigError(field + ": exponent too large");
            return std::uint64_t{1} << k;
        }
        return to_uint(tok, field);
    };
    for (const auto& tok : split(s, ',')) {
        const auto dots = tok.find("..");
        if (dots == std::string::npos) {
            out.push_back(one(tok));
            continue;
        }
        const std::string lo_tok = trim(tok.substr(0, dots));
        const std::string hi_tok = trim(tok.substr(dots + 2));
        if (lo_tok.rfind("2^", 0) == 0 && hi_tok.rfind("2^", 0) == 0) {
            for (auto k = to_uint(lo_tok.substr(2), field); k <= to_uint(hi_tok.substr(2), field); ++k)
                out.push_back(std::uint64_t{1} << k);
        } else {
            for (auto v = one(lo_tok); v <= one(hi_tok); ++v) out.push_back(v);
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& field) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(to_double(tok, field));
    return out;
}

using Section = std::map<std::string, std::string>;

std::string take(Section& sec, const std::string& key, const std::string& fallback = {}) {
    auto it = sec.find(key);
    if (it == sec.end()) return fallback;
    std::string v = it->second;
    sec.erase(it);
    return v;
}

EnvSpec env_from_section(Section sec) {
    EnvSpec spec;
    spec.label = take(sec, "label");
    const std::string kind = take(sec, "kind", "iid");
    if (kind == "iid") {
        spec.kind = IidEnv{to_double(take(sec, "q", "0.5"), "env.q")};
    } else if (kind == "piecewise") {
        PiecewiseEnv env;
        env.fractional = to_bool(take(sec, "fractional", "false"), "env.fractional");
        for (const auto& seg : split(take(sec, "segments"), ',')) {
            const auto colon = seg.find(':');
            if (colon == std::string::npos)
                throw ConfigError("env.segments: expected length:q, got '" + seg + "'");
            env.segments.push_back({to_double(trim(seg.substr(0, colon)), "env.segments"),
                                    to_double(trim(seg.substr(colon + 1)), "env.segments")});
        }
        if (env.segments.empty()) throw ConfigError("env.segments: missing");
        spec.kind = env;
    } else if (kind == "drift") {
        DriftEnv env;
        env.start = to_double(take(sec, "start", "0"), "env.start");
        env.end = to_double(take(sec, "end", "1"), "env.end");
        const std::string shape = take(sec, "shape", "linear");
        if (shape == "linear") env.shape = DriftShape::linear;
        else if (shape == "sinusoidal") env.shape = DriftShape::sinusoidal;
        else throw ConfigError("env.shape: expected linear or sinusoidal, got '" + shape + "'");
        spec.kind = env;
    } else if (kind == "scripted") {
        ScriptedEnv env;
        const std::string file = take(sec, "means_file");
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw ConfigError("env.means_file: cannot open '" + file + "'");
            std::string line;
            while (std::getline(in, line)) {
                line = trim(line);
                if (!line.empty() && line[0] != '#') env.means.push_back(to_double(line, "env.means_file"));
            }
        } else {
            env.means = parse_double_list(take(sec, "means"), "env.means");
        }
        spec.kind = env;
    } else {
        throw ConfigError("env.kind: unknown kind '" + kind + "' (iid, piecewise, drift, scripted)");
    }
    if (!sec.empty()) throw ConfigError("env." + sec.begin()->first + ": unknown key");
    return spec;
}

const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {
        "simple_epoch",  "simple_epoch_pkl", "hu_uniform",      "swap_l2_uniform",
        "swap_kl_uniform", "epoch_cal2",     "epoch_cal1",      "epoch_cal2_swap",
        "epoch_cal1_swap", "epoch_pkl"};
    return n;
}

const std::set<std::string> kAlgorithmKeys = {"c_guess", "pieces", "meta", "certificate",
                                              "multiplier"};

std::string param(const AlgorithmSpec& spec, const std::string& key, const std::string& fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

std::size_t pieces_or(const AlgorithmSpec& spec, std::size_t fallback) {
    const std::string p = param(spec, "pieces", "");
    if (p.empty()) return fallback;
    const auto n = to_uint(p, "algorithm.pieces");
    if (n == 0) throw ConfigError("algorithm.pieces: must be positive");
    return n;
}

std::string cell_id(const AlgorithmSpec& a, const EnvSpec& e, std::size_t T, std::uint64_t seed) {
    std::ostringstream os;
    os << a.report_name() << '/' << (e.label.empty() ? describe(e) : e.label) << '/' << T << '/'
       << seed;
    return os.str();
}

double c_guess_for(const AlgorithmSpec& spec, const GroundTruth& truth) {
    const std::string v = param(spec, "c_guess", "0");
    if (v == "truth") return truth.c;
    const double c = to_double(v, "algorithm.c_guess");
    if (!(c >= 0.0)) throw ConfigError("algorithm.c_guess: must be nonnegative");
    return c;
}

bool on_grid(const std::vector<double>& sorted_grid, double v) {
    auto it = std::lower_bound(sorted_grid.begin(), sorted_grid.end(), v - 1e-12);
    return it != sorted_grid.end() && std::abs(*it - v) <= 1e-12;
}

void check_round(const RoundPrediction& pred, const std::vector<double>& grid, std::size_t t,
                 const std::string& who) {
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << who << ": round " << t << ": " << what;
        throw ContractViolation(os.str());
    };
    if (pred.dist.size() == 0 || !pred.dist.is_valid()) fail("prediction law is not a distribution on [0, 1]");
    if (!pred.dist.contains(pred.p)) fail("realized prediction is not an atom of the law");
    for (const Atom& a : pred.dist.atoms())
        if (!on_grid(grid, a.value)) fail("atom off the declared grid");
}

CertificateFamily family_of(const std::string& s) {
    if (s == "cal1") return CertificateFamily::cal1;
    if (s == "cal2") return CertificateFamily::cal2;
    if (s == "pkl") return CertificateFamily::pkl;
    throw ConfigError("algorithm.certificate: expected cal1, cal2 or pkl, got '" + s + "'");
}

MetricKind err_kind_of(CertificateFamily f) {
    switch (f) {
        case CertificateFamily::cal1: return MetricKind::cal1;
        case CertificateFamily::cal2: return MetricKind::cal2;
        case CertificateFamily::pkl: return MetricKind::pkl;
    }
    return MetricKind::cal1;
}

}  // namespace

std::string AlgorithmSpec::report_name() const {
    if (!label.empty()) return label;
    return is_meta() ? "meta_" + name : name;
}

bool AlgorithmSpec::is_meta() const {
    return to_bool(param(*this, "meta", "false"), "algorithm.meta");
}

std::vector<std::string> algorithm_names() { return names(); }

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    Section global;
    std::vector<std::pair<std::string, Section>> sections;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name != "algorithm" && name != "env")
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + name + "]");
            sections.emplace_back(name, Section{});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        Section& target = sections.empty() ? global : sections.back().second;
        if (!target.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }

    if (auto h = take(global, "horizons"); !h.empty())
        for (auto v : parse_int_list(h, "horizons")) cfg.horizons.push_back(static_cast<std::size_t>(v));
    if (auto s = take(global, "seeds"); !s.empty()) cfg.seeds = parse_int_list(s, "seeds");
    cfg.delta = to_double(take(global, "delta", "0.05"), "delta");
    if (auto c = take(global, "c_iota"); !c.empty()) cfg.c_iota = to_double(c, "c_iota");
    cfg.out = take(global, "out");
    cfg.threads = static_cast<std::size_t>(to_uint(take(global, "threads", "0"), "threads"));
    if (!global.empty()) throw ConfigError(global.begin()->first + ": unknown key");

    for (auto& [name, sec] : sections) {
        if (name == "env") {
            cfg.envs.push_back(env_from_section(std::move(sec)));
            continue;
        }
        AlgorithmSpec a;
        a.name = take(sec, "name");
        if (a.name.empty()) throw ConfigError("algorithm.name: missing");
        a.label = take(sec, "label");
        for (auto& [k, v] : sec) {
            if (!kAlgorithmKeys.contains(k)) throw ConfigError("algorithm." + k + ": unknown key");
            a.params.emplace(k, v);
        }
        cfg.algorithms.push_back(std::move(a));
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in);
}

void validate(const ExperimentConfig& config) {
    for (std::size_t T : config.horizons)
        if (T == 0 || (T & (T - 1)) != 0)
            throw ConfigError("horizons: " + std::to_string(T) + " is not a power of two");
    std::set<std::uint64_t> seen;
    for (auto s : config.seeds)
        if (!seen.insert(s).second) throw ConfigError("seeds: duplicate seed " + std::to_string(s));
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw ConfigError("delta: must lie in (0, 1)");
    if (!(config.c_iota > 0.0)) throw ConfigError("c_iota: must be positive");
    for (const auto& a : config.algorithms) {
        if (std::find(names().begin(), names().end(), a.name) == names().end()) {
            std::string msg = "algorithm.name: unknown algorithm '" + a.name + "'; valid names:";
            for (const auto& n : names()) msg += " " + n;
            throw ConfigError(msg);
        }
        if (a.is_meta()) {
            family_of(param(a, "certificate", "cal1"));
            if (!(to_double(param(a, "multiplier", "1"), "algorithm.multiplier") > 0.0))
                throw ConfigError("algorithm.multiplier: must be positive");
        }
        pieces_or(a, 1);
        if (param(a, "c_guess", "0") != "truth") c_guess_for(a, {});
    }
    for (const auto& e : config.envs)
        for (std::size_t T : config.horizons) {
            EnvSpec sized = e;
            sized.horizon = T;
            validate(sized);
        }
}

std::unique_ptr<Forecaster> make_forecaster(const AlgorithmSpec& spec, std::size_t horizon,
                                            double c_guess, double iota, CounterRng rng) {
    const std::string& n = spec.name;
    const double T = static_cast<double>(horizon);
    if (n == "simple_epoch") return std::make_unique<SimpleEpoch>();
    if (n == "simple_epoch_pkl") return std::make_unique<SimpleEpochPkl>(iota);
    if (n == "hu_uniform") {
        const std::size_t pieces = pieces_or(spec, hu_uniform_size(horizon, iota, c_guess));
        return std::make_unique<HuCalibrator>(unif_part(Interval{0.0, 1.0, true}, pieces), horizon, rng);
    }
    if (n == "swap_l2_uniform") {
        const auto fallback = static_cast<std::size_t>(std::ceil(std::cbrt(T)));
        return std::make_unique<SwapL2Base>(unif_part(Interval{0.0, 1.0, true}, pieces_or(spec, fallback)),
                                            rng);
    }
    if (n == "swap_kl_uniform") {
        const double eta = 1.0 / (T + 1.0);
        const auto fallback = static_cast<std::size_t>(std::ceil(std::cbrt(T)));
        return std::make_unique<SwapKlBase>(
            unif_part(Interval{theta(eta), theta(1.0 - eta), true}, pieces_or(spec, fallback)), eta, rng);
    }
    if (n == "epoch_cal2")
        return std::make_unique<EpochFramework>(EpochBase::hu, EpochVariant::cal2, c_guess, horizon, iota, rng);
    if (n == "epoch_cal1")
        return std::make_unique<EpochFramework>(EpochBase::hu, EpochVariant::cal1, c_guess, horizon, iota, rng);
    if (n == "epoch_cal2_swap")
        return std::make_unique<EpochFramework>(EpochBase::swap_l2, EpochVariant::cal2, c_guess, horizon,
                                                iota, rng);
    if (n == "epoch_cal1_swap")
        return std::make_unique<EpochFramework>(EpochBase::swap_l2, EpochVariant::cal1, c_guess, horizon,
                                                iota, rng);
    if (n == "epoch_pkl") return std::make_unique<EpochFrameworkPkl>(horizon, c_guess, iota, rng);
    std::string msg = "unknown algorithm '" + n + "'; valid names:";
    for (const auto& v : names()) msg += " " + v;
    throw ConfigError(msg);
}

Transcript run_forecaster(Forecaster& forecaster, std::span<const double> means,
                          std::span<const int> outcomes, const std::string& who) {
    if (!means.empty() && means.size() != outcomes.size())
        throw std::invalid_argument("run_forecaster: means and outcomes misaligned");
    Transcript transcript;
    transcript.rounds.reserve(outcomes.size());
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        std::vector<double> grid = forecaster.grid();
        std::sort(grid.begin(), grid.end());
        RoundPrediction pred = forecaster.predict();
        check_round(pred, grid, t + 1, who);
        RoundRecord rec;
        if (!means.empty()) rec.q = means[t];
        rec.y = outcomes[t];
        rec.dist = std::move(pred.dist);
        rec.p = pred.p;
        rec.raw = std::move(pred.raw);
        forecaster.observe(rec.y);
        transcript.rounds.push_back(std::move(rec));
    }
    return transcript;
}

CellOutput run_cell(const ExperimentConfig& config, const AlgorithmSpec& algorithm,
                    const EnvSpec& env, std::size_t horizon, std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    EnvSpec sized = env;
    sized.horizon = horizon;
    validate(sized);
    const EnvTrace trace = generate(sized, seed);
    const GroundTruth truth = ground_truth(sized);
    const double c_guess = c_guess_for(algorithm, truth);
    const std::string who = cell_id(algorithm, sized, horizon, seed);

    CellOutput out;
    if (algorithm.is_meta()) {
        const CertificateFamily family = family_of(param(algorithm, "certificate", "cal1"));
        const double multiplier = to_double(param(algorithm, "multiplier", "1"), "algorithm.multiplier");
        const double confidence = meta_confidence(config.delta, horizon);
        const Certificate cert = Certificate::defaults(
            family, horizon, iota_for(horizon, confidence, config.c_iota), multiplier);
        const double c_iota = config.c_iota;
        BaseFactory factory = [&algorithm, horizon, c_iota](double conf, double guess, CounterRng rng) {
            return make_forecaster(algorithm, horizon, guess, iota_for(horizon, conf, c_iota), rng);
        };
        MetaResult res = run_meta(factory, err_kind_of(family), cert, config.delta, trace.means,
                                  trace.outcomes, make_rng(seed, Stream::forecaster, 0));
        for (std::size_t t = 0; t < res.transcript.rounds.size(); ++t) {
            const RoundRecord& r = res.transcript.rounds[t];
            std::vector<double> grid;
            for (const Atom& a : r.dist.atoms()) grid.push_back(a.value);
            check_round(RoundPrediction{r.dist, r.p, std::nullopt}, grid, t + 1, who);
        }
        out.transcript = std::move(res.transcript);
        out.meta_log = std::move(res.log);
    } else {
        auto forecaster = make_forecaster(algorithm, horizon, c_guess,
                                          iota_for(horizon, config.delta, config.c_iota),
                                          make_rng(seed, Stream::forecaster, 0));
        out.transcript = run_forecaster(*forecaster, trace.means, trace.outcomes, who);
    }
    if (out.transcript.horizon() != horizon)
        throw ContractViolation(who + ": transcript has " + std::to_string(out.transcript.horizon()) +
                                " rounds");

    ReportRow& row = out.row;
    row.algorithm = algorithm.report_name();
    row.env = sized.label.empty() ? describe(sized) : sized.label;
    row.horizon = horizon;
    row.seed = seed;
    row.metrics = compute_all(out.transcript.view());
    row.c = truth.c;
    row.k = truth.k;
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
    std::vector<ReportRow> rows;
    for (const auto& a : config.algorithms)
        for (const auto& e : config.envs)
            for (std::size_t T : config.horizons)
                for (auto seed : config.seeds) rows.push_back(run_cell(config, a, e, T, seed).row);
    sort_rows(rows);
    return rows;
}

void sort_rows(std::vector<ReportRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.algorithm, a.env, a.horizon, a.seed) <
               std::tie(b.algorithm, b.env, b.horizon, b.seed);
    });
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: no values");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<const ReportRow*>> cells;
    for (const auto& r : rows) cells[{r.algorithm, r.env, r.horizon}].push_back(&r);
    std::vector<SummaryRow> out;
    for (const auto& [key, members] : cells) {
        SummaryRow s;
        std::tie(s.algorithm, s.env, s.horizon) = key;
        s.count = members.size();
        auto reduce = [&](double MetricReport::*field, double& mean_out, double& median_out) {
            std::vector<double> v;
            for (const auto* r : members) v.push_back(r->metrics.*field);
            mean_out = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            median_out = median(std::move(v));
        };
        reduce(&MetricReport::cal1, s.mean.cal1, s.median.cal1);
        reduce(&MetricReport::cal2, s.mean.cal2, s.median.cal2);
        reduce(&MetricReport::pcal2, s.mean.pcal2, s.median.pcal2);
        reduce(&MetricReport::pkl, s.mean.pkl, s.median.pkl);
        s.c = members.front()->c;
        out.push_back(std::move(s));
    }
    return out;
}

SweepResult sweep(const ExperimentConfig& config) {
    struct Task {
        const AlgorithmSpec* algorithm;
        const EnvSpec* env;
        std::size_t horizon;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& a : config.algorithms)
        for (const auto& e : config.envs)
            for (std::size_t T : config.horizons)
                for (auto seed : config.seeds) tasks.push_back({&a, &e, T, seed});

    SweepResult result;
    std::mutex lock;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& task = tasks[i];
            try {
                ReportRow row = run_cell(config, *task.algorithm, *task.env, task.horizon, task.seed).row;
                std::lock_guard guard(lock);
                result.rows.push_back(std::move(row));
            } catch (const std::exception& ex) {
                EnvSpec sized = *task.env;
                sized.horizon = task.horizon;
                std::lock_guard guard(lock);
                result.failures.push_back(
                    {cell_id(*task.algorithm, sized, task.horizon, task.seed), ex.what()});
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    pool.clear();

    sort_rows(result.rows);
    std::sort(result.failures.begin(), result.failures.end(),
              [](const CellFailure& a, const CellFailure& b) { return a.cell < b.cell; });
    result.summary = summarize(result.rows);
    return result;
}

void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    const auto old = os.precision(17);
    os << "algorithm,env,T,seed,Cal1,Cal2,PCal2,PKL,C,K\n";
    for (const auto& r : rows)
        os << r.algorithm << ',' << r.env << ',' << r.horizon << ',' << r.seed << ',' << r.metrics.cal1
           << ',' << r.metrics.cal2 << ',' << r.metrics.pcal2 << ',' << r.metrics.pkl << ',' << r.c
           << ',' << r.k << '\n';
    os.precision(old);
}

void write_timing_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    const auto old = os.precision(6);
    os << "algorithm,env,T,seed,wall_time\n";
    for (const auto& r : rows)
        os << r.algorithm << ',' << r.env << ',' << r.horizon << ',' << r.seed << ',' << r.wall_time << '\n';
    os.precision(old);
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& summary) {
    const auto old = os.precision(17);
    os << "algorithm,env,T,count,C,mean_Cal1,median_Cal1,mean_Cal2,median_Cal2,"
          "mean_PCal2,median_PCal2,mean_PKL,median_PKL\n";
    for (const auto& s : summary)
        os << s.algorithm << ',' << s.env << ',' << s.horizon << ',' << s.count << ',' << s.c << ','
           << s.mean.cal1 << ',' << s.median.cal1 << ',' << s.mean.cal2 << ',' << s.median.cal2 << ','
           << s.mean.pcal2 << ',' << s.median.pcal2 << ',' << s.mean.pkl << ',' << s.median.pkl << '\n';
    os.precision(old);
}

double fit_exponent(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 pairs");
    double sx = 0.0, sy = 0.0;
    for (const auto& [t, v] : pairs) {
        if (!(t > 0.0) || !(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("fit_exponent: T and value must be positive and finite");
        sx += std::log(t);
        sy += std::log(v);
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [t, v] : pairs) {
        const double dx = std::log(t) - mx;
        sxy += dx * (std::log(v) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_exponent: all T equal");
    return sxy / sxx;
}

}  // namespace adacal

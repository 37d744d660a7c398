#include "adacal/environments.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "adacal/errors.hpp"
#include "adacal/metrics.hpp"
#include "adacal/rng.hpp"

namespace adacal {

namespace {

void check_mean(double q, const std::string& field) {
    if (!(q >= 0.0 && q <= 1.0)) {
        std::ostringstream os;
        os << field << ": mean " << q << " outside [0, 1]";
        throw ConfigError(os.str());
    }
}

std::vector<std::size_t> segment_lengths(const PiecewiseEnv& env, std::size_t horizon) {
    std::vector<std::size_t> lengths;
    if (!env.fractional) {
        for (const auto& s : env.segments) lengths.push_back(static_cast<std::size_t>(s.length));
        return lengths;
    }
    std::size_t used = 0;
    for (std::size_t i = 0; i < env.segments.size(); ++i) {
        std::size_t len = 0;
        if (i + 1 == env.segments.size()) {
            len = horizon - used;
        } else {
            len = static_cast<std::size_t>(std::llround(env.segments[i].length * static_cast<double>(horizon)));
            len = std::min(len, horizon - used);
        }
        lengths.push_back(len);
        used += len;
    }
    return lengths;
}

}  // namespace

void validate(const EnvSpec& spec) {
    if (spec.horizon == 0) throw ConfigError("horizon: must be positive");
    std::visit(
        [&](const auto& env) {
            using T = std::decay_t<decltype(env)>;
            if constexpr (std::is_same_v<T, IidEnv>) {
                check_mean(env.q, "env.q");
            } else if constexpr (std::is_same_v<T, PiecewiseEnv>) {
                if (env.segments.empty()) throw ConfigError("env.segments: no segments");
                double total = 0.0;
                for (const auto& s : env.segments) {
                    check_mean(s.q, "env.segments");
                    if (!(s.length > 0.0)) throw ConfigError("env.segments: nonpositive length");
                    if (!env.fractional && s.length != std::floor(s.length))
                        throw ConfigError("env.segments: lengths must be whole rounds");
                    total += s.length;
                }
                if (env.fractional) {
                    if (std::abs(total - 1.0) > 1e-9)
                        throw ConfigError("env.fractions: fractions must sum to 1");
                } else if (total != static_cast<double>(spec.horizon)) {
                    throw ConfigError("env.lengths: lengths must sum to the horizon");
                }
            } else if constexpr (std::is_same_v<T, DriftEnv>) {
                check_mean(env.start, "env.start");
                check_mean(env.end, "env.end");
            } else {
                if (env.means.size() != spec.horizon)
                    throw ConfigError("env.means: scripted length must equal the horizon");
                for (double q : env.means) check_mean(q, "env.means");
            }
        },
        spec.kind);
}

std::string describe(const EnvSpec& spec) {
    if (!spec.label.empty()) return spec.label;
    std::ostringstream os;
    os << std::setprecision(6);
    std::visit(
        [&](const auto& env) {
            using T = std::decay_t<decltype(env)>;
            if constexpr (std::is_same_v<T, IidEnv>) {
                os << "iid(" << env.q << ")";
            } else if constexpr (std::is_same_v<T, PiecewiseEnv>) {
                os << "piecewise(";
                for (std::size_t i = 0; i < env.segments.size(); ++i)
                    os << (i ? ";" : "") << env.segments[i].length << ":" << env.segments[i].q;
                os << ")";
            } else if constexpr (std::is_same_v<T, DriftEnv>) {
                os << "drift(" << env.start << "," << env.end << ","
                   << (env.shape == DriftShape::linear ? "linear" : "sinusoidal") << ")";
            } else {
                os << "scripted(" << env.means.size() << ")";
            }
        },
        spec.kind);
    return os.str();
}

std::vector<double> env_means(const EnvSpec& spec) {
    validate(spec);
    const std::size_t T = spec.horizon;
    std::vector<double> q;
    q.reserve(T);
    std::visit(
        [&](const auto& env) {
            using K = std::decay_t<decltype(env)>;
            if constexpr (std::is_same_v<K, IidEnv>) {
                q.assign(T, env.q);
            } else if constexpr (std::is_same_v<K, PiecewiseEnv>) {
                const auto lengths = segment_lengths(env, T);
                for (std::size_t i = 0; i < lengths.size(); ++i)
                    q.insert(q.end(), lengths[i], env.segments[i].q);
            } else if constexpr (std::is_same_v<K, DriftEnv>) {
                for (std::size_t t = 0; t < T; ++t) {
                    const double frac =
                        T == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(T - 1);
                    const double w = env.shape == DriftShape::linear
                                         ? frac
                                         : 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * frac));
                    q.push_back(env.start + (env.end - env.start) * w);
                }
            } else {
                q = env.means;
            }
        },
        spec.kind);
    return q;
}

EnvTrace generate(const EnvSpec& spec, std::uint64_t seed, std::uint64_t trial) {
    EnvTrace trace;
    trace.means = env_means(spec);
    const CounterRng rng = make_rng(seed, Stream::outcomes, trial);
    trace.outcomes.resize(trace.means.size());
    for (std::size_t t = 0; t < trace.means.size(); ++t)
        trace.outcomes[t] = rng.uniform_at(t) < trace.means[t] ? 1 : 0;
    return trace;
}

GroundTruth ground_truth(const EnvSpec& spec) {
    const auto q = env_means(spec);
    const Nonstationarity ns = nonstationarity_c(q);
    return {ns.c, segment_count_k(q), ns.p_star};
}

std::string export_means(const std::vector<double>& means) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (double q : means) os << q << '\n';
    return os.str();
}

}  // namespace adacal

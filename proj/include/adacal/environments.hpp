#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace adacal {

struct IidEnv {
    double q = 0.5;
};

/// Constant-mean segments. A segment length is either absolute rounds or,
/// when `fractional` is set, a fraction of the horizon (the last segment
/// absorbs rounding).
struct PiecewiseEnv {
    struct Segment {
        double length = 0.0;
        double q = 0.5;
    };
    std::vector<Segment> segments;
    bool fractional = false;
};

enum class DriftShape { linear, sinusoidal };

/// linear: q_t = start + (end - start) t / (T - 1).
/// sinusoidal: one full cosine cycle start -> end -> start over the horizon.
struct DriftEnv {
    double start = 0.0;
    double end = 1.0;
    DriftShape shape = DriftShape::linear;
};

struct ScriptedEnv {
    std::vector<double> means;
};

using EnvKind = std::variant<IidEnv, PiecewiseEnv, DriftEnv, ScriptedEnv>;

struct EnvSpec {
    EnvKind kind = IidEnv{};
    std::size_t horizon = 0;
    /// Label used in reports; derived from the kind when empty.
    std::string label;
};

/// Throws ConfigError naming the offending field.
void validate(const EnvSpec& spec);

std::string describe(const EnvSpec& spec);

/// Deterministic mean sequence of the spec.
std::vector<double> env_means(const EnvSpec& spec);

struct EnvTrace {
    std::vector<double> means;
    std::vector<int> outcomes;
};

/// Means are fixed first; y_t ~ Ber(q_t) then uses draw t of the seed's
/// outcome stream, so the stream never depends on the forecaster.
EnvTrace generate(const EnvSpec& spec, std::uint64_t seed, std::uint64_t trial = 0);

struct GroundTruth {
    double c = 0.0;
    std::size_t k = 1;
    double p_star = 0.0;
};

GroundTruth ground_truth(const EnvSpec& spec);

/// EnvTrace export: one q per line.
std::string export_means(const std::vector<double>& means);

}  // namespace adacal

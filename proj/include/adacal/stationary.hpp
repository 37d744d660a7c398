#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adacal {

/// Row of a row-stochastic matrix with at most two nonzeros.
struct TwoPointRow {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double w_lo = 1.0;
    double w_hi = 0.0;
};

struct StationaryOptions {
    double tolerance = 1e-10;      // target for ||pi Q - pi||_1
    std::size_t dense_limit = 512;  // largest chain handed to the dense fallback
};

struct StationaryResult {
    std::vector<double> pi;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool used_dense = false;
};

/// ||pi Q - pi||_1.
double stationary_residual(std::span<const TwoPointRow> rows, std::span<const double> pi);

/// Stationary law of the chain. Power iteration runs on the lazy chain
/// (I + Q) / 2, which has the same fixed points as Q but no periodicity,
/// for at most 200 * ceil(log2 n) steps from `initial` (uniform when empty).
/// Chains that stall fall back to a dense solve when n <= dense_limit.
/// Throws ConvergenceError when the residual target is still missed.
StationaryResult stationary_distribution(std::span<const TwoPointRow> rows,
                                         std::span<const double> initial = {},
                                         const StationaryOptions& options = {});

}  // namespace adacal

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adacal {

struct Atom {
    double value;
    double prob;
};

/// Sparse probability distribution over finitely many points of [0, 1].
/// Atoms are kept sorted by value with no duplicates.
class PredictionDistribution {
public:
    PredictionDistribution() = default;

    /// Builds from arbitrary atoms: merges equal values, drops zero mass,
    /// sorts ascending.
    explicit PredictionDistribution(std::vector<Atom> atoms);

    static PredictionDistribution point(double value);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    /// Probability placed on exactly this value (bit equality).
    double mass_at(double value) const noexcept;
    double total_mass() const noexcept;
    double mean() const noexcept;
    bool contains(double value) const noexcept { return mass_at(value) > 0.0; }

    /// Inverse-CDF draw over the sorted atoms from a single uniform in [0, 1).
    double sample(double uniform) const;

    /// Validates atoms in [lo, hi], nonnegative, summing to one within tol.
    bool is_valid(double tol = 1e-12, double lo = 0.0, double hi = 1.0) const noexcept;

    friend bool operator==(const PredictionDistribution& a,
                           const PredictionDistribution& b) noexcept;

private:
    std::vector<Atom> atoms_;
};

}  // namespace adacal

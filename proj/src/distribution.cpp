#include "adacal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adacal {

PredictionDistribution::PredictionDistribution(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    for (const Atom& a : atoms) {
        if (!(a.prob > 0.0)) continue;
        if (!atoms_.empty() && atoms_.back().value == a.value) {
            atoms_.back().prob += a.prob;
        } else {
            atoms_.push_back(a);
        }
    }
}

PredictionDistribution PredictionDistribution::point(double value) {
    PredictionDistribution d;
    d.atoms_.push_back({value, 1.0});
    return d;
}

double PredictionDistribution::mass_at(double value) const noexcept {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value,
                               [](const Atom& a, double v) { return a.value < v; });
    return (it != atoms_.end() && it->value == value) ? it->prob : 0.0;
}

double PredictionDistribution::total_mass() const noexcept {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.prob;
    return s;
}

double PredictionDistribution::mean() const noexcept {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.prob * a.value;
    return s;
}

double PredictionDistribution::sample(double uniform) const {
    if (atoms_.empty()) throw std::logic_error("sample from empty distribution");
    const double target = uniform * total_mass();
    double cdf = 0.0;
    for (const Atom& a : atoms_) {
        cdf += a.prob;
        if (target < cdf) return a.value;
    }
    return atoms_.back().value;
}

bool PredictionDistribution::is_valid(double tol, double lo, double hi) const noexcept {
    if (atoms_.empty()) return false;
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.value >= lo && a.value <= hi) || !(a.prob >= 0.0)) return false;
        if (i > 0 && !(atoms_[i - 1].value < a.value)) return false;
        s += a.prob;
    }
    return std::abs(s - 1.0) <= tol;
}

bool operator==(const PredictionDistribution& a, const PredictionDistribution& b) noexcept {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
        if (a.atoms_[i].value != b.atoms_[i].value || a.atoms_[i].prob != b.atoms_[i].prob)
            return false;
    }
    return true;
}

}  // namespace adacal

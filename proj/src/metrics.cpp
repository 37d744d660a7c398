#include "adacal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "adacal/transform.hpp"

namespace adacal {

MetricKind parse_metric_kind(std::string_view name) {
    if (name == "cal1") return MetricKind::cal1;
    if (name == "cal2") return MetricKind::cal2;
    if (name == "pcal2") return MetricKind::pcal2;
    if (name == "pkl") return MetricKind::pkl;
    throw std::invalid_argument("unknown metric '" + std::string(name) +
                                "' (expected cal1, cal2, pcal2, pkl)");
}

std::string_view to_string(MetricKind kind) noexcept {
    switch (kind) {
        case MetricKind::cal1: return "cal1";
        case MetricKind::cal2: return "cal2";
        case MetricKind::pcal2: return "pcal2";
        case MetricKind::pkl: return "pkl";
    }
    return "?";
}

namespace {

struct Sums {
    double mass = 0.0;
    double hits = 0.0;
};

std::map<double, Sums> realized_groups(std::span<const RoundRecord> rounds) {
    std::map<double, Sums> g;
    for (const RoundRecord& r : rounds) {
        Sums& s = g[r.p];
        s.mass += 1.0;
        s.hits += r.y;
    }
    return g;
}

std::map<double, Sums> pseudo_groups(std::span<const RoundRecord> rounds) {
    std::map<double, Sums> g;
    for (const RoundRecord& r : rounds) {
        for (const Atom& a : r.dist.atoms()) {
            Sums& s = g[a.value];
            s.mass += a.prob;
            s.hits += a.prob * r.y;
        }
    }
    return g;
}

}  // namespace

double cal_l1(std::span<const RoundRecord> rounds) {
    double total = 0.0;
    for (const auto& [p, s] : realized_groups(rounds)) total += std::abs(s.hits - p * s.mass);
    return total;
}

double cal_l2(std::span<const RoundRecord> rounds) {
    double total = 0.0;
    for (const auto& [p, s] : realized_groups(rounds)) {
        const double dev = s.hits / s.mass - p;
        total += s.mass * dev * dev;
    }
    return total;
}

double pseudo_cal_l2(std::span<const RoundRecord> rounds) {
    double total = 0.0;
    for (const auto& [p, s] : pseudo_groups(rounds)) {
        if (!(s.mass > 0.0)) continue;
        const double dev = s.hits / s.mass - p;
        total += s.mass * dev * dev;
    }
    return total;
}

double pseudo_kl(std::span<const RoundRecord> rounds) {
    double total = 0.0;
    for (const auto& [p, s] : pseudo_groups(rounds)) {
        if (!(s.mass > 0.0)) continue;
        const double rho = std::clamp(s.hits / s.mass, 0.0, 1.0);
        if (rho == p) continue;
        total += s.mass * kl_bernoulli(rho, p);
    }
    return total;
}

double metric(std::span<const RoundRecord> rounds, MetricKind kind) {
    switch (kind) {
        case MetricKind::cal1: return cal_l1(rounds);
        case MetricKind::cal2: return cal_l2(rounds);
        case MetricKind::pcal2: return pseudo_cal_l2(rounds);
        case MetricKind::pkl: return pseudo_kl(rounds);
    }
    return 0.0;
}

double interval_metric(std::span<const RoundRecord> rounds, std::size_t begin, std::size_t end,
                       MetricKind kind) {
    if (begin > end || end > rounds.size())
        throw std::out_of_range("interval_metric: round range outside horizon");
    if (begin == end) return 0.0;
    return metric(rounds.subspan(begin, end - begin), kind);
}

MetricReport compute_all(std::span<const RoundRecord> rounds) {
    return {cal_l1(rounds), cal_l2(rounds), pseudo_cal_l2(rounds), pseudo_kl(rounds)};
}

Nonstationarity nonstationarity_c(std::span<const double> means) {
    if (means.empty()) throw std::invalid_argument("nonstationarity_c: empty trace");
    std::vector<double> sorted(means.begin(), means.end());
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid),
                     sorted.end());
    const double p_star = sorted[mid];
    double c = 0.0;
    for (double q : means) c += std::abs(q - p_star);
    return {c, p_star};
}

std::size_t segment_count_k(std::span<const double> means) {
    if (means.empty()) throw std::invalid_argument("segment_count_k: empty trace");
    std::size_t k = 1;
    for (std::size_t t = 1; t < means.size(); ++t)
        if (means[t] != means[t - 1]) ++k;
    return k;
}

double per_grid_corruption(std::span<const RoundRecord> rounds, std::span<const double> means,
                           double grid_point) {
    if (rounds.size() != means.size())
        throw std::invalid_argument("per_grid_corruption: transcript and trace misaligned");
    if (rounds.empty()) return 0.0;
    const double p_star = nonstationarity_c(means).p_star;
    double total = 0.0;
    for (std::size_t t = 0; t < rounds.size(); ++t)
        total += std::abs(means[t] - p_star) * rounds[t].dist.mass_at(grid_point);
    return total;
}

double RunningMetric::term_of(double value, const Group& g) const noexcept {
    if (!(g.mass > 0.0)) return 0.0;
    switch (kind_) {
        case MetricKind::cal1: return std::abs(g.hits - value * g.mass);
        case MetricKind::cal2:
        case MetricKind::pcal2: {
            const double dev = g.hits / g.mass - value;
            return g.mass * dev * dev;
        }
        case MetricKind::pkl: {
            const double rho = std::clamp(g.hits / g.mass, 0.0, 1.0);
            return rho == value ? 0.0 : g.mass * kl_bernoulli(rho, value);
        }
    }
    return 0.0;
}

void RunningMetric::bump(double value, double mass, double hits) {
    Group& g = groups_[value];
    const double before = g.term;
    g.mass += mass;
    g.hits += hits;
    g.term = term_of(value, g);
    if (std::isinf(before)) --infinite_terms_;
    if (std::isinf(g.term)) ++infinite_terms_;
    if (infinite_terms_ > 0) {
        total_ = std::numeric_limits<double>::infinity();
        return;
    }
    if (std::isinf(before) || std::isinf(total_)) {
        // Leaving the infinite state: rebuild from the finite terms.
        total_ = 0.0;
        for (const auto& [v, grp] : groups_) total_ += grp.term;
        return;
    }
    total_ += g.term - before;
    if (total_ < 0.0) total_ = 0.0;
}

void RunningMetric::add(const RoundRecord& round) {
    ++rounds_;
    if (kind_ == MetricKind::cal1 || kind_ == MetricKind::cal2) {
        bump(round.p, 1.0, static_cast<double>(round.y));
        return;
    }
    for (const Atom& a : round.dist.atoms()) bump(a.value, a.prob, a.prob * round.y);
}

void RunningMetric::reset() {
    groups_.clear();
    total_ = 0.0;
    infinite_terms_ = 0;
    rounds_ = 0;
}

}  // namespace adacal

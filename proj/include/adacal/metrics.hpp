#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>

#include "adacal/transcript.hpp"

namespace adacal {

enum class MetricKind { cal1, cal2, pcal2, pkl };

MetricKind parse_metric_kind(std::string_view name);
std::string_view to_string(MetricKind kind) noexcept;

/// l1 calibration error: sum over distinct predictions of |sum (y - p)|.
double cal_l1(std::span<const RoundRecord> rounds);
/// l2 calibration error: sum over distinct predictions of n(p) * (mean y - p)^2.
double cal_l2(std::span<const RoundRecord> rounds);
/// Pseudo l2 calibration: sum over atoms of mass(p) * (rho(p) - p)^2, with
/// mass and rho taken from the per-round prediction laws.
double pseudo_cal_l2(std::span<const RoundRecord> rounds);
/// Pseudo KL calibration: sum over atoms of mass(p) * KL(rho(p), p).
/// +inf when an atom at 0 or 1 has rho(p) != p.
double pseudo_kl(std::span<const RoundRecord> rounds);

double metric(std::span<const RoundRecord> rounds, MetricKind kind);

/// Metric restricted to rounds [begin, end); all groupings restart.
double interval_metric(std::span<const RoundRecord> rounds, std::size_t begin, std::size_t end,
                       MetricKind kind);

struct MetricReport {
    double cal1 = 0.0;
    double cal2 = 0.0;
    double pcal2 = 0.0;
    double pkl = 0.0;
};

MetricReport compute_all(std::span<const RoundRecord> rounds);

struct Nonstationarity {
    double c = 0.0;       // sum |q_t - p_star|
    double p_star = 0.0;  // lower median of the means
};

Nonstationarity nonstationarity_c(std::span<const double> means);

/// 1 + number of t with q_t != q_{t+1}.
std::size_t segment_count_k(std::span<const double> means);

/// sum_t |q_t - p_star| * P_t(grid_point).
double per_grid_corruption(std::span<const RoundRecord> rounds, std::span<const double> means,
                           double grid_point);

/// Incrementally maintained metric over a growing run of rounds.
class RunningMetric {
public:
    explicit RunningMetric(MetricKind kind) : kind_(kind) {}

    void add(const RoundRecord& round);
    double value() const noexcept { return total_; }
    std::size_t rounds() const noexcept { return rounds_; }
    MetricKind kind() const noexcept { return kind_; }
    void reset();

private:
    struct Group {
        double mass = 0.0;  // n(p) or sum of P_t(p)
        double hits = 0.0;  // sum of y, or of P_t(p) y_t
        double term = 0.0;  // current contribution to total_
    };

    double term_of(double value, const Group& g) const noexcept;
    void bump(double value, double mass, double hits);

    MetricKind kind_;
    std::map<double, Group> groups_;
    double total_ = 0.0;
    std::size_t infinite_terms_ = 0;
    std::size_t rounds_ = 0;
};

}  // namespace adacal

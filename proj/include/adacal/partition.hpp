#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adacal {

/// [lo, hi) or [lo, hi]. The left endpoint always belongs to the interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool right_closed = true;

    double width() const noexcept { return hi - lo; }
    bool empty() const noexcept { return lo > hi || (lo == hi && !right_closed); }
    bool contains(double x) const noexcept {
        return x >= lo && (x < hi || (right_closed && x == hi));
    }
    /// inf over u in the interval of |anchor - u|.
    double distance_to(double anchor) const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Ordered, disjoint cover of `domain`. The grid prediction of each
/// interval is its supremum.
class Partition {
public:
    Partition() = default;

    /// Validates the tiling; throws std::invalid_argument when the pieces are
    /// unsorted, overlapping, gapped, or do not reproduce `domain`.
    Partition(std::vector<Interval> intervals, Interval domain);

    std::span<const Interval> intervals() const noexcept { return intervals_; }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    std::size_t size() const noexcept { return intervals_.size(); }
    const Interval& domain() const noexcept { return domain_; }

    std::span<const double> grid() const noexcept { return grid_; }
    double grid_point(std::size_t i) const { return grid_[i]; }

    /// Per-interval widths.
    std::vector<double> widths() const;
    /// Per-interval distance to `anchor`.
    std::vector<double> distances(double anchor) const;

    /// Sorted distinct endpoints; endpoints()[i] = intervals[i].lo and the
    /// final entry is domain().hi.
    std::vector<double> endpoints() const;

    /// Index of the interval containing x; throws OutOfDomain otherwise.
    std::size_t locate(double x) const;

    /// One line per interval: "lo hi closed_flag grid_point".
    std::string serialize() const;
    static Partition parse(const std::string& text);

private:
    std::vector<Interval> intervals_;
    std::vector<double> grid_;
    Interval domain_;
};

/// Splits a closed interval into n equal pieces: [.,.) for all but the last,
/// which is closed. n = 1 returns the interval itself.
Partition unif_part(const Interval& interval, std::size_t n);

/// Pieces of a uniform split of [lo, hi) or [lo, hi], appended to `out`.
/// Internal endpoints are lo + k * (hi - lo) / n; the last is exactly hi.
void append_uniform_pieces(double lo, double hi, bool right_closed, std::size_t n,
                           std::vector<Interval>& out);

enum class Region { left, inner, right };

struct BandLabel {
    Region region = Region::inner;
    std::size_t level = 0;   // q for outer bands, 0 for the inner region
    bool stretched = false;  // outermost band widened to reach the domain edge
};

struct BandedPartition {
    Partition partition;
    std::vector<BandLabel> labels;  // one per interval
};

/// Epoch partition around `center`: a fine inner region
/// [center - 2r, center + 2r] cut into n_inner pieces, flanked on each side
/// by bands of doubling width r, 2r, 4r, ... (levels q = 0..q_max), each cut
/// into k_outer pieces. Everything is clipped to [domain_lo, domain_hi];
/// empty pieces are dropped and the outermost band on each side is stretched
/// to the domain edge if q_max levels do not reach it.
BandedPartition build_banded(double center, double r, std::size_t n_inner,
                             std::size_t k_outer, std::size_t q_max, double domain_lo,
                             double domain_hi);

/// Band partition of [0, 1] in prediction space.
Partition build_nonuniform_cal(double y_hat, double r, std::size_t n_inner,
                               std::size_t k_outer, std::size_t q_max);

/// Band partition of [theta(eta), theta(1 - eta)] in angle space.
Partition build_nonuniform_pkl(double theta_y_hat, double r, std::size_t n_inner,
                               std::size_t k_outer, std::size_t q_max, double eta);

/// Number of doubling levels for a horizon: ceil(log2 T), at least 1.
std::size_t band_levels(std::size_t horizon);

}  // namespace adacal

#include "adacal/partition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "adacal/errors.hpp"
#include "adacal/transform.hpp"

namespace adacal {

double Interval::distance_to(double anchor) const noexcept {
    if (anchor < lo) return lo - anchor;
    if (anchor > hi) return anchor - hi;
    return 0.0;
}

Partition::Partition(std::vector<Interval> intervals, Interval domain)
    : intervals_(std::move(intervals)), domain_(domain) {
    if (intervals_.empty()) throw std::invalid_argument("partition has no intervals");
    if (intervals_.front().lo != domain_.lo || intervals_.back().hi != domain_.hi ||
        intervals_.back().right_closed != domain_.right_closed)
        throw std::invalid_argument("partition does not reproduce its domain");
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const Interval& J = intervals_[i];
        if (J.empty() || !(J.lo <= J.hi))
            throw std::invalid_argument("partition holds an empty interval");
        if (i + 1 < intervals_.size()) {
            if (J.right_closed || J.hi != intervals_[i + 1].lo)
                throw std::invalid_argument("partition intervals are not contiguous");
        }
    }
    grid_.reserve(intervals_.size());
    for (const Interval& J : intervals_) grid_.push_back(J.hi);
}

std::vector<double> Partition::widths() const {
    std::vector<double> w;
    w.reserve(intervals_.size());
    for (const Interval& J : intervals_) w.push_back(J.width());
    return w;
}

std::vector<double> Partition::distances(double anchor) const {
    std::vector<double> d;
    d.reserve(intervals_.size());
    for (const Interval& J : intervals_) d.push_back(J.distance_to(anchor));
    return d;
}

std::vector<double> Partition::endpoints() const {
    std::vector<double> e;
    e.reserve(intervals_.size() + 1);
    for (const Interval& J : intervals_) e.push_back(J.lo);
    e.push_back(domain_.hi);
    return e;
}

std::size_t Partition::locate(double x) const {
    if (!domain_.contains(x)) {
        std::ostringstream os;
        os << std::setprecision(17) << "point " << x << " outside [" << domain_.lo << ", "
           << domain_.hi << (domain_.right_closed ? "]" : ")");
        throw OutOfDomain(os.str());
    }
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& J) { return v < J.lo; });
    return static_cast<std::size_t>(it - intervals_.begin()) - 1;
}

std::string Partition::serialize() const {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const Interval& J : intervals_)
        os << J.lo << ' ' << J.hi << ' ' << (J.right_closed ? 1 : 0) << ' ' << J.hi << '\n';
    return os.str();
}

Partition Partition::parse(const std::string& text) {
    std::istringstream is(text);
    std::vector<Interval> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        Interval J;
        int closed = 0;
        double grid = 0.0;
        if (!(ls >> J.lo >> J.hi >> closed >> grid))
            throw std::invalid_argument("malformed partition line: " + line);
        J.right_closed = closed != 0;
        if (grid != J.hi) throw std::invalid_argument("grid point must equal interval sup");
        out.push_back(J);
    }
    if (out.empty()) throw std::invalid_argument("empty partition text");
    Interval domain{out.front().lo, out.back().hi, out.back().right_closed};
    return Partition(std::move(out), domain);
}

void append_uniform_pieces(double lo, double hi, bool right_closed, std::size_t n,
                           std::vector<Interval>& out) {
    if (n == 0) throw std::invalid_argument("uniform split needs at least one piece");
    const std::size_t before = out.size();
    const double width = hi - lo;
    double left = lo;
    for (std::size_t k = 1; k <= n; ++k) {
        const double right =
            (k == n) ? hi : lo + static_cast<double>(k) * width / static_cast<double>(n);
        if (right > left) {
            out.push_back({left, right, false});
            left = right;
        }
    }
    if (out.size() == before) {
        if (right_closed && lo == hi) out.push_back({lo, hi, true});
        return;
    }
    out.back().right_closed = right_closed;
}

Partition unif_part(const Interval& interval, std::size_t n) {
    if (n == 0) throw std::invalid_argument("unif_part: n must be positive");
    if (interval.empty() || !interval.right_closed)
        throw std::invalid_argument("unif_part: interval must be non-empty and closed");
    if (n == 1) return Partition({interval}, interval);
    std::vector<Interval> pieces;
    pieces.reserve(n);
    append_uniform_pieces(interval.lo, interval.hi, true, n, pieces);
    return Partition(std::move(pieces), interval);
}

std::size_t band_levels(std::size_t horizon) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < horizon) ++q;
    return std::max<std::size_t>(q, 1);
}

BandedPartition build_banded(double center, double r, std::size_t n_inner,
                             std::size_t k_outer, std::size_t q_max, double domain_lo,
                             double domain_hi) {
    if (!(r > 0.0)) throw std::invalid_argument("band radius must be positive");
    if (n_inner == 0 || k_outer == 0) throw std::invalid_argument("piece counts must be positive");
    if (!(domain_lo < domain_hi)) throw std::invalid_argument("degenerate band domain");

    const double a = std::max(domain_lo, center - 2.0 * r);
    const double b = std::min(domain_hi, center + 2.0 * r);

    // left_edge[q] = a - (2^q - 1) r, right_edge[q] = b + (2^q - 1) r; level q
    // spans edge[q]..edge[q+1]. Shared boundaries are computed once.
    std::vector<double> left_edge(q_max + 2), right_edge(q_max + 2);
    for (std::size_t q = 0; q <= q_max + 1; ++q) {
        const double span = (std::ldexp(1.0, static_cast<int>(q)) - 1.0) * r;
        left_edge[q] = (q == 0) ? a : a - span;
        right_edge[q] = (q == 0) ? b : b + span;
    }
    const bool stretch_left = left_edge[q_max + 1] > domain_lo;
    const bool stretch_right = right_edge[q_max + 1] < domain_hi;
    if (stretch_left) left_edge[q_max + 1] = domain_lo;
    if (stretch_right) right_edge[q_max + 1] = domain_hi;

    BandedPartition out;
    std::vector<Interval> pieces;
    auto emit = [&](double lo, double hi, std::size_t n, BandLabel label) {
        lo = std::max(lo, domain_lo);
        hi = std::min(hi, domain_hi);
        if (!(hi > lo)) return;
        const std::size_t before = pieces.size();
        append_uniform_pieces(lo, hi, hi == domain_hi, n, pieces);
        out.labels.insert(out.labels.end(), pieces.size() - before, label);
    };

    for (std::size_t q = q_max + 1; q-- > 0;)
        emit(left_edge[q + 1], left_edge[q], k_outer,
             {Region::left, q, stretch_left && q == q_max});
    if (a <= b) emit(a, b, n_inner, {Region::inner, 0, false});
    for (std::size_t q = 0; q <= q_max; ++q)
        emit(right_edge[q], right_edge[q + 1], k_outer,
             {Region::right, q, stretch_right && q == q_max});

    out.partition = Partition(std::move(pieces), Interval{domain_lo, domain_hi, true});
    return out;
}

Partition build_nonuniform_cal(double y_hat, double r, std::size_t n_inner,
                               std::size_t k_outer, std::size_t q_max) {
    return build_banded(y_hat, r, n_inner, k_outer, q_max, 0.0, 1.0).partition;
}

Partition build_nonuniform_pkl(double theta_y_hat, double r, std::size_t n_inner,
                               std::size_t k_outer, std::size_t q_max, double eta) {
    if (!(eta > 0.0 && eta <= 0.5))
        throw std::invalid_argument("build_nonuniform_pkl: eta must lie in (0, 1/2]");
    const double lo = theta(eta);
    const double hi = theta(1.0 - eta);
    if (!(lo < hi))
        // eta = 1/2 collapses the angle domain to a point.
        return Partition({Interval{lo, lo, true}}, Interval{lo, lo, true});
    return build_banded(theta_y_hat, r, n_inner, k_outer, q_max, lo, hi).partition;
}

}  // namespace adacal

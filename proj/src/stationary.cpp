#include "adacal/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adacal/errors.hpp"

namespace adacal {

namespace {

void left_multiply(std::span<const TwoPointRow> rows, std::span<const double> x,
                   std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        out[rows[s].lo] += x[s] * rows[s].w_lo;
        if (rows[s].w_hi != 0.0) out[rows[s].hi] += x[s] * rows[s].w_hi;
    }
}

void normalize(std::vector<double>& x) {
    double total = 0.0;
    for (double& v : x) {
        if (v < 0.0) v = 0.0;
        total += v;
    }
    for (double& v : x) v /= total;
}

std::size_t iteration_budget(std::size_t n) {
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    return 200 * std::max<std::size_t>(log2n, 1);
}

// Solves pi (Q - I) = 0 with sum(pi) = 1; false when the system is singular
// (several closed classes).
bool dense_solve(std::span<const TwoPointRow> rows, std::vector<double>& pi) {
    const std::size_t n = rows.size();
    // A = (Q - I)^T with the last equation replaced by the normalization.
    std::vector<double> a(n * n, 0.0), b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        a[rows[s].lo * n + s] += rows[s].w_lo;
        a[rows[s].hi * n + s] += rows[s].w_hi;
        a[s * n + s] -= 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) a[(n - 1) * n + j] = 1.0;
    b[n - 1] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < 1e-13) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            std::swap(b[piv], b[col]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
            b[r] -= f * b[col];
        }
    }
    pi.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t j = r + 1; j < n; ++j) acc -= a[r * n + j] * pi[j];
        pi[r] = acc / a[r * n + r];
    }
    normalize(pi);
    return true;
}

// Repeated squaring of the lazy chain; handles reducible chains.
void dense_squaring(std::span<const TwoPointRow> rows, std::vector<double>& pi) {
    const std::size_t n = rows.size();
    std::vector<double> m(n * n, 0.0), tmp(n * n);
    for (std::size_t s = 0; s < n; ++s) {
        m[s * n + s] += 0.5;
        m[s * n + rows[s].lo] += 0.5 * rows[s].w_lo;
        m[s * n + rows[s].hi] += 0.5 * rows[s].w_hi;
    }
    for (int k = 0; k < 64; ++k) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const double v = m[i * n + l];
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) tmp[i * n + j] += v * m[l * n + j];
            }
        m.swap(tmp);
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * m[i * n + j];
        normalize(next);
        pi.swap(next);
        if (stationary_residual(rows, pi) <= 1e-13) return;
    }
}

}  // namespace

double stationary_residual(std::span<const TwoPointRow> rows, std::span<const double> pi) {
    std::vector<double> y(rows.size());
    left_multiply(rows, pi, y);
    double r = 0.0;
    for (std::size_t s = 0; s < rows.size(); ++s) r += std::abs(y[s] - pi[s]);
    return r;
}

StationaryResult stationary_distribution(std::span<const TwoPointRow> rows,
                                         std::span<const double> initial,
                                         const StationaryOptions& options) {
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("stationary_distribution: empty chain");
    for (const TwoPointRow& r : rows) {
        if (r.lo >= n || r.hi >= n || r.w_lo < 0.0 || r.w_hi < 0.0 ||
            std::abs(r.w_lo + r.w_hi - 1.0) > 1e-9)
            throw std::invalid_argument("stationary_distribution: row is not stochastic");
    }

    StationaryResult out;
    if (initial.size() == n) {
        out.pi.assign(initial.begin(), initial.end());
        normalize(out.pi);
    } else {
        out.pi.assign(n, 1.0 / static_cast<double>(n));
    }

    // Iterate toward a tighter target than requested so the reported
    // residual has headroom.
    const double target = options.tolerance * 1e-2;
    std::vector<double> y(n);
    const std::size_t budget = iteration_budget(n);
    for (;;) {
        left_multiply(rows, out.pi, y);
        double r = 0.0;
        for (std::size_t s = 0; s < n; ++s) r += std::abs(y[s] - out.pi[s]);
        out.residual = r;
        if (r <= target || out.iterations >= budget) break;
        for (std::size_t s = 0; s < n; ++s) out.pi[s] = 0.5 * (out.pi[s] + y[s]);
        normalize(out.pi);
        ++out.iterations;
    }

    if (out.residual > options.tolerance && n <= options.dense_limit) {
        out.used_dense = true;
        std::vector<double> pi;
        if (dense_solve(rows, pi) && stationary_residual(rows, pi) <= options.tolerance) {
            out.pi = std::move(pi);
        } else {
            dense_squaring(rows, out.pi);
        }
        out.residual = stationary_residual(rows, out.pi);
    }
    if (out.residual > options.tolerance) {
        std::ostringstream os;
        os << "stationary distribution did not converge: residual " << out.residual;
        throw ConvergenceError(os.str(), out.residual);
    }
    return out;
}

}  // namespace adacal

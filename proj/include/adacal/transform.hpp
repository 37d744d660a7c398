#pragma once

#include <cmath>
#include <numbers>

namespace adacal {

/// Angle map [0, 1] -> [0, pi]: theta(p) = 2 asin(sqrt(p)).
inline double theta(double p) noexcept {
    return 2.0 * std::asin(std::sqrt(std::fmin(std::fmax(p, 0.0), 1.0)));
}

/// Inverse of theta: psi(z) = sin^2(z / 2).
inline double psi(double z) noexcept {
    const double s = std::sin(0.5 * z);
    return s * s;
}

/// Bernoulli KL(p || q) with 0 log 0 = 0; +inf when q is 0 or 1 and p != q.
double kl_bernoulli(double p, double q) noexcept;

/// Squared Hellinger distance between Ber(p) and Ber(q).
double hellinger_sq(double p, double q) noexcept;

/// Log loss -y log p - (1 - y) log(1 - p).
double log_loss(double p, int y) noexcept;

}  // namespace adacal

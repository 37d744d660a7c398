#include "adacal/transform.hpp"

#include <limits>

namespace adacal {

namespace {

// x log(x / y) with the 0 log 0 = 0 convention.
double xlogxy(double x, double y) noexcept {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return std::numeric_limits<double>::infinity();
    return x * std::log(x / y);
}

}  // namespace

double kl_bernoulli(double p, double q) noexcept {
    return xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
}

double hellinger_sq(double p, double q) noexcept {
    const double a = std::sqrt(p) - std::sqrt(q);
    const double b = std::sqrt(1.0 - p) - std::sqrt(1.0 - q);
    return a * a + b * b;
}

double log_loss(double p, int y) noexcept {
    return y != 0 ? -std::log(p) : -std::log1p(-p);
}

}  // namespace adacal

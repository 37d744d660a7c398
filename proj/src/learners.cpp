#include "adacal/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adacal/partition.hpp"

namespace adacal {

Msmwc::Msmwc(std::size_t num_experts, std::size_t horizon) : num_experts_(num_experts) {
    if (num_experts == 0) throw std::invalid_argument("Msmwc: need at least one expert");
    const std::size_t scales = band_levels(std::max<std::size_t>(horizon, 2));
    rates_.reserve(scales);
    for (std::size_t k = 1; k <= scales; ++k)
        rates_.push_back(std::ldexp(1.0, -static_cast<int>(k + 1)));
    log_w_.resize(scales * num_experts_);
    for (std::size_t k = 0; k < scales; ++k) {
        const double prior = 2.0 * std::log(rates_[k]);
        std::fill_n(log_w_.begin() + static_cast<std::ptrdiff_t>(k * num_experts_),
                    num_experts_, prior);
    }
    weights_.resize(num_experts_);
    refresh_weights();
}

void Msmwc::refresh_weights() {
    const double top = *std::max_element(log_w_.begin(), log_w_.end());
    std::fill(weights_.begin(), weights_.end(), 0.0);
    for (std::size_t k = 0; k < rates_.size(); ++k) {
        const double* lw = log_w_.data() + k * num_experts_;
        for (std::size_t i = 0; i < num_experts_; ++i)
            weights_[i] += rates_[k] * std::exp(lw[i] - top);
    }
    double total = 0.0;
    for (double w : weights_) total += w;
    for (double& w : weights_) w /= total;
    // Keep log weights anchored so they never drift toward -inf.
    for (double& lw : log_w_) lw -= top;
}

void Msmwc::update(std::span<const double> losses) {
    if (losses.size() != num_experts_)
        throw std::invalid_argument("Msmwc::update: loss vector has wrong length");
    double mixed = 0.0;
    for (std::size_t i = 0; i < num_experts_; ++i) {
        if (!(losses[i] >= -1.0 && losses[i] <= 1.0))
            throw std::invalid_argument("Msmwc::update: loss outside [-1, 1]");
        mixed += weights_[i] * losses[i];
    }
    for (std::size_t k = 0; k < rates_.size(); ++k) {
        const double eta = rates_[k];
        double* lw = log_w_.data() + k * num_experts_;
        for (std::size_t i = 0; i < num_experts_; ++i) {
            const double x = eta * (losses[i] - mixed);
            lw[i] -= x + x * x;
        }
    }
    ++round_;
    refresh_weights();
}

void Ogd::step(double weight, int outcome) {
    if (!(weight >= 0.0)) throw std::invalid_argument("Ogd::step: weight must be nonnegative");
    cum_weight_ += weight;
    if (weight == 0.0) return;
    const double eta = fixed_step_ ? *fixed_step_ : 1.0 / (lambda_ + cum_weight_);
    const double grad = weight * 2.0 * (action_ - static_cast<double>(outcome));
    action_ = std::clamp(action_ - eta * grad, 0.0, 1.0);
}

}  // namespace adacal

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace adacal {

/// Multi-scale multiplicative weights over a fixed set of experts.
///
/// Every expert is replicated over learning rates eta_k = 2^-(k+1),
/// k = 1..ceil(log2 T), with prior mass proportional to eta_k^2. A copy is
/// updated with w <- w * exp(-eta x - eta^2 x^2), where x is the expert's loss
/// minus the learner's, and the played weight of an expert is the
/// eta-weighted sum of its copies. The played mixture makes the
/// eta-weighted instantaneous regret vanish, which keeps the potential
/// sum_k,i w_{k,i} from growing and bounds the regret against every expert
/// at every scale simultaneously.
class Msmwc {
public:
    Msmwc(std::size_t num_experts, std::size_t horizon);

    std::size_t num_experts() const noexcept { return num_experts_; }
    std::span<const double> learning_rates() const noexcept { return rates_; }
    std::size_t round() const noexcept { return round_; }

    /// Current played weights, a point of the simplex.
    std::span<const double> weights() const noexcept { return weights_; }

    /// Losses must lie in [-1, 1]; throws std::invalid_argument otherwise.
    void update(std::span<const double> losses);

private:
    void refresh_weights();

    std::size_t num_experts_;
    std::vector<double> rates_;
    std::vector<double> log_w_;  // [scale * num_experts + expert]
    std::vector<double> weights_;
    std::size_t round_ = 0;
};

/// Projected online gradient descent on [0, 1] for weighted squared loss.
class Ogd {
public:
    /// Step 1 / (lambda + cumulative weight), starting from `initial`.
    explicit Ogd(double initial = 0.5, double lambda = 1.0) noexcept
        : action_(initial), lambda_(lambda) {}

    /// Fixed step size for every update.
    static Ogd with_constant_step(double step, double initial = 0.5) noexcept {
        Ogd o(initial);
        o.fixed_step_ = step;
        return o;
    }

    double action() const noexcept { return action_; }
    double cumulative_weight() const noexcept { return cum_weight_; }

    /// action <- clip(action - step * weight * 2 (action - outcome)).
    void step(double weight, int outcome);

private:
    double action_;
    double lambda_;
    double cum_weight_ = 0.0;
    std::optional<double> fixed_step_;
};

/// Exponentially weighted online optimization for weighted log loss on
/// [0, 1] under a uniform prior, via its closed form (hits + 1) / (mass + 2).
class Ewoo {
public:
    double action() const noexcept { return (hits_ + 1.0) / (mass_ + 2.0); }
    double mass() const noexcept { return mass_; }
    double hits() const noexcept { return hits_; }

    void update(double weight, int outcome) noexcept {
        mass_ += weight;
        if (outcome != 0) hits_ += weight;
    }

private:
    double mass_ = 0.0;
    double hits_ = 0.0;
};

}  // namespace adacal

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adacal/distribution.hpp"
#include "adacal/learners.hpp"
#include "adacal/partition.hpp"
#include "adacal/rng.hpp"
#include "adacal/stationary.hpp"

namespace adacal {

struct RoundPrediction {
    PredictionDistribution dist;  // law of the emitted prediction
    double p = 0.0;               // realized prediction, an atom of dist
    std::optional<PredictionDistribution> raw;  // pre-pushforward law, if any
};

/// Round protocol shared by every forecaster: predict() then observe(y),
/// strictly alternating. Breaking the order throws ContractViolation.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    RoundPrediction predict();
    void observe(int y);

    /// Grid the next emitted distribution is supported on.
    virtual std::vector<double> grid() const = 0;
    virtual std::string name() const = 0;

protected:
    virtual RoundPrediction do_predict() = 0;
    virtual void do_observe(int y) = 0;

private:
    bool awaiting_outcome_ = false;
};

/// Default scale of the confidence factor. With inner half-width 2 r_m =
/// 2 sqrt(iota / s) this is the smallest scale that still covers the
/// Hoeffding deviation sqrt(ln(2 / delta) / (2 s)) of an epoch mean.
inline constexpr double kDefaultIotaScale = 0.125;

/// Confidence factor c * ln(max(T, 2) / delta).
double iota_for(std::size_t horizon, double delta, double c_iota = kDefaultIotaScale);

// ---------------------------------------------------------------------------
// Simple epoch forecasters

/// Predicts the previous epoch's outcome mean for 2^m rounds in epoch m,
/// starting from 1/2.
class SimpleEpoch final : public Forecaster {
public:
    SimpleEpoch() = default;

    std::vector<double> grid() const override { return {current_}; }
    std::string name() const override { return "simple_epoch"; }
    std::size_t epoch() const noexcept { return epoch_; }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    std::size_t epoch_ = 1;
    std::size_t played_ = 0;
    double hits_ = 0.0;
    double current_ = 0.5;
};

/// d_m = min(pi / 4, 8 pi sqrt(iota / s_m)).
double pkl_clip_radius(std::size_t epoch_length, double iota);

/// Simple epoch forecaster for pseudo-KL: the previous mean is clipped in
/// angle space to [d_m, pi - d_m] before being predicted.
class SimpleEpochPkl final : public Forecaster {
public:
    explicit SimpleEpochPkl(double iota);

    std::vector<double> grid() const override { return {current_}; }
    std::string name() const override { return "simple_epoch_pkl"; }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    void start_epoch();

    double iota_;
    std::size_t epoch_ = 1;
    std::size_t played_ = 0;
    double hits_ = 0.0;
    double prev_mean_ = 0.5;
    double current_ = 0.5;
};

// ---------------------------------------------------------------------------
// Sign-change calibrator over a partition

enum class PhiCase { zero_atom, one_atom, bracket };

/// Two-point law built from the piecewise-constant sign function
/// phi (one value per partition interval), on the 1/resolution grid.
struct SignChangeLaw {
    PhiCase which = PhiCase::bracket;
    std::vector<Atom> atoms;  // at most two, ascending
    double expected_phi = 0.0;
};

/// Phi(0) > 0 puts all mass on 0; otherwise Phi(1) <= 0 puts all mass on 1;
/// otherwise the first grid point j / resolution with Phi > 0 and its left
/// neighbour share the mass in inverse proportion to |Phi|. Runs in
/// O(intervals) by jumping between interval boundaries.
SignChangeLaw sign_change_law(const Partition& partition, std::span<const double> phi,
                              std::size_t resolution);

/// Calibration via 2N experts (interval, sign) run through Msmwc. The
/// sampled point lands in some interval J and the prediction is sup J.
class HuCalibrator final : public Forecaster {
public:
    HuCalibrator(Partition partition, std::size_t horizon, CounterRng rng);

    std::vector<double> grid() const override;
    std::string name() const override { return "hu"; }

    const Partition& partition() const noexcept { return partition_; }
    const SignChangeLaw& last_law() const noexcept { return law_; }
    const Msmwc& experts() const noexcept { return experts_; }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    Partition partition_;
    std::size_t horizon_;
    Msmwc experts_;
    CounterRng rng_;
    SignChangeLaw law_;
    std::vector<double> phi_;
    std::vector<double> losses_;
};

/// N = ceil(min{ sqrt(T / (iota ln T)), (T^2 / (iota (1 + C) ln T))^{1/3} }).
std::size_t hu_uniform_size(std::size_t horizon, double iota, double c_guess);

std::unique_ptr<HuCalibrator> make_hu_uniform(std::size_t horizon, double c_guess, double iota,
                                              CounterRng rng);

// ---------------------------------------------------------------------------
// Swap-regret bases

/// Mean-preserving two-endpoint rounding of a onto [lo, hi].
TwoPointRow round_linear(double a, std::size_t lo_index, double lo, double hi);

/// Log-loss rounding of a onto outcome-space endpoints d < b: weights
/// proportional to (b - a) / (b (1 - b)) on d and (a - d) / (d (1 - d)) on b.
TwoPointRow round_log_loss(double a, std::size_t lo_index, double d, double b);

/// Squared-loss swap-regret base: one Ogd per partition endpoint, rows of
/// the chain given by rounding each instance's action, prediction law given
/// by the chain's stationary distribution.
class SwapL2Base final : public Forecaster {
public:
    SwapL2Base(Partition partition, CounterRng rng);

    std::vector<double> grid() const override { return states_; }
    std::string name() const override { return "swap_l2"; }

    std::span<const TwoPointRow> last_rows() const noexcept { return rows_; }
    std::span<const double> actions() const noexcept { return actions_; }
    std::span<const double> last_stationary() const noexcept { return pi_; }
    double last_residual() const noexcept { return residual_; }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    Partition partition_;
    std::vector<double> states_;
    std::vector<Ogd> learners_;
    CounterRng rng_;
    std::vector<TwoPointRow> rows_;
    std::vector<double> actions_;
    std::vector<double> pi_;
    double residual_ = 0.0;
};

/// Log-loss swap-regret base over an angle-space partition: one Ewoo per
/// endpoint psi(e), with the outer endpoints pinned to eta and 1 - eta.
class SwapKlBase final : public Forecaster {
public:
    SwapKlBase(Partition angle_partition, double eta, CounterRng rng);

    std::vector<double> grid() const override { return states_; }
    std::string name() const override { return "swap_kl"; }

    std::span<const TwoPointRow> last_rows() const noexcept { return rows_; }
    std::span<const double> actions() const noexcept { return actions_; }
    std::span<const double> last_stationary() const noexcept { return pi_; }
    double last_residual() const noexcept { return residual_; }
    double eta() const noexcept { return eta_; }
    /// Extremes of every action produced so far.
    double min_action() const noexcept { return min_action_; }
    double max_action() const noexcept { return max_action_; }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    Partition partition_;
    double eta_;
    std::vector<double> states_;
    std::vector<Ewoo> learners_;
    CounterRng rng_;
    std::vector<TwoPointRow> rows_;
    std::vector<double> actions_;
    std::vector<double> pi_;
    double residual_ = 0.0;
    double min_action_ = 1.0;
    double max_action_ = 0.0;
};

// ---------------------------------------------------------------------------
// Epoch frameworks

enum class EpochVariant { cal2, cal1 };
enum class EpochBase { hu, swap_l2 };

/// r_m = sqrt(iota / s_{m-1}) + C / s_{m-1}.
double epoch_radius(std::size_t prev_length, double iota, double c_guess);
/// N_m = ceil(s_m^{1/3} |I_m|^{2/3} iota^{-1/3}), at least 1.
std::size_t inner_pieces(std::size_t epoch_length, double inner_width, double iota);
/// K = ceil(((1 + C) / iota)^{1/3}) for cal2, ceil(((1 + C)^2 / (iota T))^{1/3}) for cal1.
std::size_t outer_pieces(EpochVariant variant, double c_guess, double iota, std::size_t horizon);

/// r_m = 2 pi sqrt((iota + C) / s_{m-1}).
double epoch_radius_pkl(std::size_t prev_length, double iota, double c_guess);
/// K = max{ ceil(((1 + C) / ln^2 T)^{1/3}), 2 }.
std::size_t outer_pieces_pkl(double c_guess, std::size_t horizon);
/// N_m = max{ ceil(s_m^{1/3} |I_m|^{2/3} iota^{-1/3}), ceil(2 |I_m| / pi) }.
std::size_t inner_pieces_pkl(std::size_t epoch_length, double inner_width, double iota);

/// Doubling epochs; epoch 1 predicts 1/2, epoch m >= 2 restarts a base
/// forecaster on a band partition centred at the previous epoch's mean.
class EpochFramework final : public Forecaster {
public:
    EpochFramework(EpochBase base, EpochVariant variant, double c_guess, std::size_t horizon,
                   double iota, CounterRng rng);

    std::vector<double> grid() const override;
    std::string name() const override;

    std::size_t epoch() const noexcept { return epoch_; }
    /// Partition of the running epoch; empty during epoch 1.
    const std::optional<Partition>& partition() const noexcept { return partition_; }
    const Forecaster* base() const noexcept { return base_.get(); }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    void start_epoch();

    EpochBase base_kind_;
    EpochVariant variant_;
    double c_guess_;
    std::size_t horizon_;
    double iota_;
    CounterRng rng_;
    std::size_t epoch_ = 1;
    std::size_t played_ = 0;
    double hits_ = 0.0;
    std::optional<Partition> partition_;
    std::unique_ptr<Forecaster> base_;
};

/// Epoch framework in angle space with the log-loss swap base and
/// eta = 1 / (T + 1).
class EpochFrameworkPkl final : public Forecaster {
public:
    EpochFrameworkPkl(std::size_t horizon, double c_guess, double iota, CounterRng rng);

    std::vector<double> grid() const override;
    std::string name() const override { return "epoch_pkl"; }

    std::size_t epoch() const noexcept { return epoch_; }
    double eta() const noexcept { return eta_; }
    const std::optional<Partition>& partition() const noexcept { return partition_; }
    const SwapKlBase* base() const noexcept { return base_.get(); }

protected:
    RoundPrediction do_predict() override;
    void do_observe(int y) override;

private:
    void start_epoch();

    std::size_t horizon_;
    double c_guess_;
    double iota_;
    double eta_;
    CounterRng rng_;
    std::size_t epoch_ = 1;
    std::size_t played_ = 0;
    double hits_ = 0.0;
    std::optional<Partition> partition_;
    std::unique_ptr<SwapKlBase> base_;
};

}  // namespace adacal

#include "adacal/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "adacal/errors.hpp"
#include "adacal/transform.hpp"

namespace adacal {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t epoch_length(std::size_t epoch) { return std::size_t{1} << epoch; }

double log_horizon(std::size_t horizon) {
    return std::log(static_cast<double>(std::max<std::size_t>(horizon, 2)));
}

std::size_t ceil_count(double x) {
    if (!(x >= 1.0)) return 1;
    return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

RoundPrediction Forecaster::predict() {
    if (awaiting_outcome_) throw ContractViolation(name() + ": predict called twice");
    awaiting_outcome_ = true;
    return do_predict();
}

void Forecaster::observe(int y) {
    if (!awaiting_outcome_) throw ContractViolation(name() + ": observe without predict");
    if (y != 0 && y != 1) throw std::invalid_argument("outcome must be 0 or 1");
    awaiting_outcome_ = false;
    do_observe(y);
}

double iota_for(std::size_t horizon, double delta, double c_iota) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    return c_iota * std::log(static_cast<double>(std::max<std::size_t>(horizon, 2)) / delta);
}

// ---------------------------------------------------------------------------

RoundPrediction SimpleEpoch::do_predict() {
    return {PredictionDistribution::point(current_), current_, std::nullopt};
}

void SimpleEpoch::do_observe(int y) {
    hits_ += y;
    if (++played_ == epoch_length(epoch_)) {
        current_ = hits_ / static_cast<double>(played_);
        ++epoch_;
        played_ = 0;
        hits_ = 0.0;
    }
}

double pkl_clip_radius(std::size_t epoch_length, double iota) {
    return std::min(kPi / 4.0, 8.0 * kPi * std::sqrt(iota / static_cast<double>(epoch_length)));
}

SimpleEpochPkl::SimpleEpochPkl(double iota) : iota_(iota) {
    if (!(iota > 0.0)) throw std::invalid_argument("SimpleEpochPkl: iota must be positive");
    start_epoch();
}

void SimpleEpochPkl::start_epoch() {
    const double d = pkl_clip_radius(epoch_length(epoch_), iota_);
    current_ = psi(std::clamp(theta(prev_mean_), d, kPi - d));
}

RoundPrediction SimpleEpochPkl::do_predict() {
    return {PredictionDistribution::point(current_), current_, std::nullopt};
}

void SimpleEpochPkl::do_observe(int y) {
    hits_ += y;
    if (++played_ == epoch_length(epoch_)) {
        prev_mean_ = hits_ / static_cast<double>(played_);
        ++epoch_;
        played_ = 0;
        hits_ = 0.0;
        start_epoch();
    }
}

// ---------------------------------------------------------------------------

SignChangeLaw sign_change_law(const Partition& partition, std::span<const double> phi,
                              std::size_t resolution) {
    if (phi.size() != partition.size())
        throw std::invalid_argument("sign_change_law: one phi value per interval");
    if (resolution == 0) throw std::invalid_argument("sign_change_law: zero resolution");

    SignChangeLaw law;
    if (phi.front() > 0.0) {
        law.which = PhiCase::zero_atom;
        law.atoms = {{0.0, 1.0}};
        law.expected_phi = phi.front();
        return law;
    }
    if (phi.back() <= 0.0) {
        law.which = PhiCase::one_atom;
        law.atoms = {{1.0, 1.0}};
        law.expected_phi = phi.back();
        return law;
    }

    const double res = static_cast<double>(resolution);
    auto point = [res](std::size_t j) { return static_cast<double>(j) / res; };
    std::size_t first = resolution;
    for (std::size_t k = 0; k < partition.size(); ++k) {
        if (!(phi[k] > 0.0)) continue;
        const Interval& J = partition[k];
        auto j = static_cast<std::size_t>(std::max(0.0, std::ceil(J.lo * res)));
        while (j > 0 && point(j - 1) >= J.lo) --j;
        while (j <= resolution && point(j) < J.lo) ++j;
        if (j <= resolution && J.contains(point(j))) {
            first = j;
            break;
        }
    }
    // Phi(0) <= 0, so the first positive grid point has a left neighbour.
    const double u = point(first - 1);
    const double v = point(first);
    const double phi_u = phi[partition.locate(u)];
    const double phi_v = phi[partition.locate(v)];
    const double denom = std::abs(phi_u) + std::abs(phi_v);
    const double p_u = std::abs(phi_v) / denom;
    const double p_v = std::abs(phi_u) / denom;
    law.which = PhiCase::bracket;
    law.atoms = {{u, p_u}, {v, p_v}};
    law.expected_phi = p_u * phi_u + p_v * phi_v;
    return law;
}

HuCalibrator::HuCalibrator(Partition partition, std::size_t horizon, CounterRng rng)
    : partition_(std::move(partition)),
      horizon_(std::max<std::size_t>(horizon, 1)),
      experts_(2 * partition_.size(), horizon_),
      rng_(rng),
      phi_(partition_.size()),
      losses_(2 * partition_.size()) {
    const Interval& d = partition_.domain();
    if (d.lo != 0.0 || d.hi != 1.0 || !d.right_closed)
        throw std::invalid_argument("HuCalibrator: partition must cover [0, 1]");
}

std::vector<double> HuCalibrator::grid() const {
    return {partition_.grid().begin(), partition_.grid().end()};
}

RoundPrediction HuCalibrator::do_predict() {
    const auto w = experts_.weights();
    for (std::size_t i = 0; i < phi_.size(); ++i) phi_[i] = w[2 * i] - w[2 * i + 1];
    law_ = sign_change_law(partition_, phi_, horizon_);

    std::vector<Atom> pushed;
    pushed.reserve(law_.atoms.size());
    for (const Atom& a : law_.atoms)
        pushed.push_back({partition_.grid_point(partition_.locate(a.value)), a.prob});

    RoundPrediction out;
    out.raw = PredictionDistribution(law_.atoms);
    out.dist = PredictionDistribution(std::move(pushed));
    const double u = out.raw->sample(rng_.uniform());
    out.p = partition_.grid_point(partition_.locate(u));
    return out;
}

void HuCalibrator::do_observe(int y) {
    std::fill(losses_.begin(), losses_.end(), 0.0);
    for (const Atom& a : law_.atoms) {
        const std::size_t i = partition_.locate(a.value);
        // The expert score sigma * P(u) (u - y) is a gain: calibration needs
        // it bounded above, so Msmwc minimizes its negation.
        const double l = a.prob * (a.value - static_cast<double>(y));
        losses_[2 * i] -= l;
        losses_[2 * i + 1] += l;
    }
    experts_.update(losses_);
}

std::size_t hu_uniform_size(std::size_t horizon, double iota, double c_guess) {
    const double t = static_cast<double>(std::max<std::size_t>(horizon, 1));
    const double lt = log_horizon(horizon);
    const double a = std::sqrt(t / (iota * lt));
    const double b = std::cbrt(t * t / (iota * (1.0 + c_guess) * lt));
    return ceil_count(std::min(a, b));
}

std::unique_ptr<HuCalibrator> make_hu_uniform(std::size_t horizon, double c_guess, double iota,
                                              CounterRng rng) {
    const std::size_t n = hu_uniform_size(horizon, iota, c_guess);
    return std::make_unique<HuCalibrator>(unif_part(Interval{0.0, 1.0, true}, n), horizon, rng);
}

// ---------------------------------------------------------------------------

TwoPointRow round_linear(double a, std::size_t lo_index, double lo, double hi) {
    TwoPointRow row{lo_index, lo_index + 1, 1.0, 0.0};
    if (!(hi > lo)) return row;
    a = std::clamp(a, lo, hi);
    row.w_lo = (hi - a) / (hi - lo);
    row.w_hi = (a - lo) / (hi - lo);
    return row;
}

TwoPointRow round_log_loss(double a, std::size_t lo_index, double d, double b) {
    TwoPointRow row{lo_index, lo_index + 1, 1.0, 0.0};
    if (!(b > d)) return row;
    a = std::clamp(a, d, b);
    const double to_d = (b - a) / (b * (1.0 - b));
    const double to_b = (a - d) / (d * (1.0 - d));
    const double total = to_d + to_b;
    if (!(total > 0.0)) return row;
    row.w_lo = to_d / total;
    row.w_hi = to_b / total;
    return row;
}

namespace {

PredictionDistribution law_over_states(std::span<const double> states,
                                       std::span<const double> pi) {
    std::vector<Atom> atoms;
    for (std::size_t s = 0; s < states.size(); ++s)
        if (pi[s] > 0.0) atoms.push_back({states[s], pi[s]});
    return PredictionDistribution(std::move(atoms));
}

}  // namespace

SwapL2Base::SwapL2Base(Partition partition, CounterRng rng)
    : partition_(std::move(partition)), states_(partition_.endpoints()), rng_(rng) {
    learners_.assign(states_.size(), Ogd(0.5));
    rows_.resize(states_.size());
    actions_.resize(states_.size());
}

RoundPrediction SwapL2Base::do_predict() {
    for (std::size_t s = 0; s < learners_.size(); ++s) {
        const double a = learners_[s].action();
        actions_[s] = a;
        const double x = std::clamp(a, partition_.domain().lo, partition_.domain().hi);
        const std::size_t k = partition_.locate(x);
        rows_[s] = round_linear(x, k, states_[k], states_[k + 1]);
    }
    StationaryResult st = stationary_distribution(rows_, pi_);
    pi_ = std::move(st.pi);
    residual_ = st.residual;

    RoundPrediction out;
    out.dist = law_over_states(states_, pi_);
    out.p = out.dist.sample(rng_.uniform());
    return out;
}

void SwapL2Base::do_observe(int y) {
    for (std::size_t s = 0; s < learners_.size(); ++s) learners_[s].step(pi_[s], y);
}

SwapKlBase::SwapKlBase(Partition angle_partition, double eta, CounterRng rng)
    : partition_(std::move(angle_partition)), eta_(eta), rng_(rng) {
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("SwapKlBase: eta in (0, 1/2]");
    const auto ends = partition_.endpoints();
    states_.reserve(ends.size());
    for (double e : ends) states_.push_back(psi(e));
    if (partition_.domain().lo == theta(eta)) states_.front() = eta;
    if (partition_.domain().hi == theta(1.0 - eta)) states_.back() = 1.0 - eta;
    learners_.resize(states_.size());
    rows_.resize(states_.size());
    actions_.resize(states_.size());
}

RoundPrediction SwapKlBase::do_predict() {
    const Interval& dom = partition_.domain();
    for (std::size_t s = 0; s < learners_.size(); ++s) {
        const double a = learners_[s].action();
        if (!(a >= eta_ * (1.0 - 1e-12) && a <= 1.0 - eta_ * (1.0 - 1e-12))) {
            std::ostringstream os;
            os.precision(17);
            os << "swap_kl: action " << a << " outside [eta, 1 - eta] with eta " << eta_;
            throw ContractViolation(os.str());
        }
        actions_[s] = a;
        min_action_ = std::min(min_action_, a);
        max_action_ = std::max(max_action_, a);
        const double z = std::clamp(theta(a), dom.lo, dom.hi);
        const std::size_t k = partition_.locate(z);
        rows_[s] = round_log_loss(a, k, states_[k], states_[k + 1]);
    }
    StationaryResult st = stationary_distribution(rows_, pi_);
    pi_ = std::move(st.pi);
    residual_ = st.residual;

    RoundPrediction out;
    out.dist = law_over_states(states_, pi_);
    out.p = out.dist.sample(rng_.uniform());
    return out;
}

void SwapKlBase::do_observe(int y) {
    for (std::size_t s = 0; s < learners_.size(); ++s) learners_[s].update(pi_[s], y);
}

// ---------------------------------------------------------------------------

double epoch_radius(std::size_t prev_length, double iota, double c_guess) {
    const double s = static_cast<double>(prev_length);
    return std::sqrt(iota / s) + c_guess / s;
}

std::size_t inner_pieces(std::size_t epoch_length, double inner_width, double iota) {
    return ceil_count(std::cbrt(static_cast<double>(epoch_length)) *
                      std::pow(inner_width, 2.0 / 3.0) / std::cbrt(iota));
}

std::size_t outer_pieces(EpochVariant variant, double c_guess, double iota, std::size_t horizon) {
    if (variant == EpochVariant::cal2) return ceil_count(std::cbrt((1.0 + c_guess) / iota));
    const double t = static_cast<double>(std::max<std::size_t>(horizon, 1));
    return ceil_count(std::cbrt((1.0 + c_guess) * (1.0 + c_guess) / (iota * t)));
}

double epoch_radius_pkl(std::size_t prev_length, double iota, double c_guess) {
    return 2.0 * kPi * std::sqrt((iota + c_guess) / static_cast<double>(prev_length));
}

std::size_t outer_pieces_pkl(double c_guess, std::size_t horizon) {
    const double lt = log_horizon(horizon);
    return std::max<std::size_t>(ceil_count(std::cbrt((1.0 + c_guess) / (lt * lt))), 2);
}

std::size_t inner_pieces_pkl(std::size_t epoch_length, double inner_width, double iota) {
    return std::max(inner_pieces(epoch_length, inner_width, iota),
                    ceil_count(2.0 * inner_width / kPi));
}

EpochFramework::EpochFramework(EpochBase base, EpochVariant variant, double c_guess,
                               std::size_t horizon, double iota, CounterRng rng)
    : base_kind_(base),
      variant_(variant),
      c_guess_(c_guess),
      horizon_(std::max<std::size_t>(horizon, 1)),
      iota_(iota),
      rng_(rng) {
    if (!(c_guess >= 0.0)) throw std::invalid_argument("EpochFramework: C guess must be >= 0");
    if (!(iota > 0.0)) throw std::invalid_argument("EpochFramework: iota must be positive");
}

std::string EpochFramework::name() const {
    std::string n = variant_ == EpochVariant::cal2 ? "epoch_cal2" : "epoch_cal1";
    if (base_kind_ == EpochBase::swap_l2) n += "_swap";
    return n;
}

std::vector<double> EpochFramework::grid() const {
    if (!base_) return {0.5};
    return base_->grid();
}

void EpochFramework::start_epoch() {
    const std::size_t prev = epoch_length(epoch_ - 1);
    const double y_hat = hits_ / static_cast<double>(prev);
    const double r = epoch_radius(prev, iota_, c_guess_);
    const double width = std::min(1.0, y_hat + 2.0 * r) - std::max(0.0, y_hat - 2.0 * r);
    const std::size_t len = epoch_length(epoch_);
    const std::size_t n = inner_pieces(len, width, iota_);
    const std::size_t k = outer_pieces(variant_, c_guess_, iota_, horizon_);
    partition_ = build_nonuniform_cal(y_hat, r, n, k, band_levels(horizon_));
    CounterRng base_rng(rng_.next(), epoch_);
    if (base_kind_ == EpochBase::hu)
        base_ = std::make_unique<HuCalibrator>(*partition_, len, base_rng);
    else
        base_ = std::make_unique<SwapL2Base>(*partition_, base_rng);
}

RoundPrediction EpochFramework::do_predict() {
    if (!base_) return {PredictionDistribution::point(0.5), 0.5, std::nullopt};
    return base_->predict();
}

void EpochFramework::do_observe(int y) {
    if (base_) base_->observe(y);
    hits_ += y;
    if (++played_ == epoch_length(epoch_)) {
        ++epoch_;
        start_epoch();
        played_ = 0;
        hits_ = 0.0;
    }
}

EpochFrameworkPkl::EpochFrameworkPkl(std::size_t horizon, double c_guess, double iota,
                                     CounterRng rng)
    : horizon_(std::max<std::size_t>(horizon, 1)),
      c_guess_(c_guess),
      iota_(iota),
      eta_(1.0 / (static_cast<double>(horizon_) + 1.0)),
      rng_(rng) {
    if (!(c_guess >= 0.0)) throw std::invalid_argument("EpochFrameworkPkl: C guess must be >= 0");
    if (!(iota > 0.0)) throw std::invalid_argument("EpochFrameworkPkl: iota must be positive");
}

std::vector<double> EpochFrameworkPkl::grid() const {
    if (!base_) return {0.5};
    return base_->grid();
}

void EpochFrameworkPkl::start_epoch() {
    const std::size_t prev = epoch_length(epoch_ - 1);
    const double y_hat = hits_ / static_cast<double>(prev);
    const double center = theta(y_hat);
    const double r = epoch_radius_pkl(prev, iota_, c_guess_);
    const double lo = theta(eta_);
    const double hi = theta(1.0 - eta_);
    const double width = std::max(0.0, std::min(hi, center + 2.0 * r) - std::max(lo, center - 2.0 * r));
    const std::size_t len = epoch_length(epoch_);
    const std::size_t n = inner_pieces_pkl(len, width, iota_);
    const std::size_t k = outer_pieces_pkl(c_guess_, horizon_);
    partition_ = build_nonuniform_pkl(center, r, n, k, band_levels(horizon_), eta_);
    base_ = std::make_unique<SwapKlBase>(*partition_, eta_, CounterRng(rng_.next(), epoch_));
}

RoundPrediction EpochFrameworkPkl::do_predict() {
    if (!base_) return {PredictionDistribution::point(0.5), 0.5, std::nullopt};
    return base_->predict();
}

void EpochFrameworkPkl::do_observe(int y) {
    if (base_) base_->observe(y);
    hits_ += y;
    if (++played_ == epoch_length(epoch_)) {
        ++epoch_;
        start_epoch();
        played_ = 0;
        hits_ = 0.0;
    }
}

}  // namespace adacal

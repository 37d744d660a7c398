#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracle.hpp"
#include "adacal/environments.hpp"
#include "adacal/errors.hpp"
#include "adacal/forecasters.hpp"
#include "adacal/harness.hpp"
#include "adacal/transform.hpp"

using namespace adacal;

namespace {

template <class F>
std::vector<double> play(F& f, const std::vector<int>& ys) {
    std::vector<double> ps;
    for (int y : ys) {
        ps.push_back(f.predict().p);
        f.observe(y);
    }
    return ps;
}

}  // namespace

TEST_CASE("simple epoch schedule") {
    SimpleEpoch f;
    const auto ps = play(f, {1, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(ps[0] == 0.5);
    CHECK(ps[1] == 0.5);
    for (int t = 2; t < 6; ++t) CHECK(ps[t] == 1.0);
    for (int t = 6; t < 14; ++t) CHECK(ps[t] == 0.5);
    CHECK(f.epoch() == 4);
}

TEST_CASE("simple epoch for pseudo-KL clips in angle space") {
    CHECK(pkl_clip_radius(2, 10.0) == doctest::Approx(std::numbers::pi / 4));
    CHECK(pkl_clip_radius(1 << 20, 1.0) == doctest::Approx(8 * std::numbers::pi / 1024));

    // Small epochs force d_m = pi / 4.
    SimpleEpochPkl f(10.0);
    const double lo = std::pow(std::sin(std::numbers::pi / 8), 2);
    for (double p : play(f, std::vector<int>(62, 0))) {
        CHECK(p >= lo - 1e-15);
        CHECK(p <= 1.0 - lo + 1e-15);
    }
    // A balanced epoch keeps 1/2 once d_m is small.
    SimpleEpochPkl g(1e-4);
    std::vector<int> ys;
    for (int t = 0; t < 62; ++t) ys.push_back(t % 2);
    for (double p : play(g, ys)) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    // All-zero epochs clip to psi(d_m) > 0.
    SimpleEpochPkl h(1e-4);
    const auto ps = play(h, std::vector<int>(30, 0));
    CHECK(ps[2] == doctest::Approx(psi(pkl_clip_radius(4, 1e-4))));
    CHECK(ps[2] > 0.0);
}

TEST_CASE("sign-change law cases") {
    const Partition p = unif_part({0.0, 1.0, true}, 4);
    auto law = sign_change_law(p, std::vector{0.1, -0.2, 0.0, 0.0}, 16);
    CHECK(law.which == PhiCase::zero_atom);
    CHECK(law.atoms.size() == 1);
    CHECK(law.atoms[0].value == 0.0);

    law = sign_change_law(p, std::vector{-0.1, 0.2, 0.1, 0.0}, 16);
    CHECK(law.which == PhiCase::one_atom);
    CHECK(law.atoms[0].value == 1.0);

    law = sign_change_law(p, std::vector{-0.5, 0.25, 0.25, 0.25}, 16);
    REQUIRE(law.which == PhiCase::bracket);
    CHECK(law.atoms[0].value == 3.0 / 16.0);
    CHECK(law.atoms[1].value == 4.0 / 16.0);
    CHECK(law.atoms[0].prob == doctest::Approx(1.0 / 3.0));
    CHECK(law.atoms[1].prob == doctest::Approx(2.0 / 3.0));
    CHECK(std::abs(law.expected_phi) <= 1e-15);

    // A zero at the left neighbour takes all the mass.
    law = sign_change_law(p, std::vector{-0.5, 0.0, 0.5, 0.5}, 16);
    CHECK(law.atoms[0].value == 7.0 / 16.0);
    CHECK(law.atoms[0].prob == 1.0);
    CHECK(law.atoms[1].prob == 0.0);
}

TEST_CASE("sign-change law matches the literal grid scan") {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + gen() % 20;
        const std::size_t T = 1 + gen() % 200;
        const Partition p = trial % 2 == 0
                                ? unif_part({0.0, 1.0, true}, n)
                                : build_nonuniform_cal(0.5 + 0.5 * unit(gen), 0.01 + 0.1 * std::abs(unit(gen)),
                                                       n, 1 + gen() % 3, 6);
        std::vector<double> phi(p.size());
        for (auto& v : phi) v = gen() % 7 == 0 ? 0.0 : unit(gen);
        const auto law = sign_change_law(p, phi, T);
        const auto ref = oracle::literal_scan(p, phi, T);
        CHECK(static_cast<int>(law.which) == ref.which);
        if (ref.which == 2) {
            REQUIRE(law.atoms.size() == 2);
            CHECK(law.atoms[0].value == ref.u);
            CHECK(law.atoms[1].value == ref.v);
            CHECK(law.atoms[0].prob == doctest::Approx(ref.pu).epsilon(1e-14));
            CHECK(std::abs(law.expected_phi) <= 1e-12);
        }
    }
}

TEST_CASE("hu forecaster parameters and construction") {
    CHECK(hu_uniform_size(4096, 8.0, 0.0) == 8);
    CHECK(hu_uniform_size(16, 100.0, 1e9) >= 1);
    // With C = T the cube-root branch is the smaller one.
    const double T = 1 << 16, iota = 8.0, lt = std::log(T);
    CHECK(hu_uniform_size(1 << 16, iota, T) ==
          static_cast<std::size_t>(std::ceil(std::cbrt(T * T / (iota * (1 + T) * lt)))));
    CHECK_THROWS_AS(HuCalibrator(unif_part({0.0, 0.5, true}, 2), 64, CounterRng(1)), std::invalid_argument);
}

TEST_CASE("hu forecaster emits pushed-forward laws") {
    auto f = make_hu_uniform(1024, 0.0, iota_for(1024, 0.05), CounterRng(3));
    const auto grid = f->grid();
    CounterRng env(9);
    for (int t = 0; t < 1024; ++t) {
        const RoundPrediction pred = f->predict();
        CHECK(pred.dist.is_valid());
        CHECK(pred.dist.contains(pred.p));
        REQUIRE(pred.raw.has_value());
        CHECK(pred.raw->is_valid());
        for (const Atom& a : pred.dist.atoms())
            CHECK(std::find(grid.begin(), grid.end(), a.value) != grid.end());
        if (f->last_law().which == PhiCase::bracket) CHECK(std::abs(f->last_law().expected_phi) <= 1e-12);
        f->observe(env.uniform() < 0.4 ? 1 : 0);
    }
}

TEST_CASE("forecaster protocol alternates strictly") {
    SimpleEpoch f;
    CHECK_THROWS_AS(f.observe(1), ContractViolation);
    f.predict();
    CHECK_THROWS_AS(f.predict(), ContractViolation);
    f.observe(0);
    CHECK_NOTHROW(f.predict());
}

TEST_CASE("linear rounding") {
    const TwoPointRow r = round_linear(0.3, 0, 0.0, 1.0);
    CHECK(r.w_lo == doctest::Approx(0.7));
    CHECK(r.w_hi == doctest::Approx(0.3));
    const TwoPointRow at = round_linear(0.25, 2, 0.25, 0.5);
    CHECK(at.w_lo == 1.0);
    CHECK(at.w_hi == 0.0);
    std::mt19937_64 gen(67);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double a = unit(gen), b = unit(gen);
        if (a > b) std::swap(a, b);
        const double x = a + (b - a) * unit(gen);
        const TwoPointRow h = round_linear(x, 0, a, b);
        CHECK(std::abs(h.w_lo * a + h.w_hi * b - x) <= 1e-12);
        CHECK(h.w_lo + h.w_hi == doctest::Approx(1.0));
    }
}

TEST_CASE("log-loss rounding") {
    const TwoPointRow r = round_log_loss(0.5, 0, 0.25, 0.75);
    CHECK(r.w_lo == doctest::Approx(0.5));
    CHECK(r.w_hi == doctest::Approx(0.5));
    const TwoPointRow at = round_log_loss(0.25, 0, 0.25, 0.75);
    CHECK(at.w_lo == doctest::Approx(1.0));

    std::mt19937_64 gen(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    while (checked < 1000) {
        const double za = 0.001 + (std::numbers::pi - 0.002) * unit(gen);
        const double width = std::numbers::pi / 2 * unit(gen);
        const double zb = za + width;
        if (zb >= std::numbers::pi - 0.001) continue;
        const double d = psi(za), b = psi(zb);
        const double a = d + (b - d) * unit(gen);
        const TwoPointRow h = round_log_loss(a, 0, d, b);
        for (int y : {0, 1}) {
            const double gap = h.w_lo * log_loss(d, y) + h.w_hi * log_loss(b, y) - log_loss(a, y);
            CHECK(gap <= width * width + 1e-12);
        }
        ++checked;
    }
}

TEST_CASE("swap l2 base keeps its chain stationary") {
    SwapL2Base f(unif_part({0.0, 1.0, true}, 6), CounterRng(5));
    CounterRng env(13);
    for (int t = 0; t < 500; ++t) {
        const RoundPrediction pred = f.predict();
        CHECK(f.last_residual() <= 1e-8);
        CHECK(pred.dist.is_valid());
        for (std::size_t s = 0; s < f.actions().size(); ++s) {
            const TwoPointRow& row = f.last_rows()[s];
            const auto states = f.grid();
            CHECK(std::abs(row.w_lo * states[row.lo] + row.w_hi * states[row.hi] - f.actions()[s]) <= 1e-12);
        }
        f.observe(env.uniform() < 0.7 ? 1 : 0);
    }
}

TEST_CASE("swap kl base keeps actions inside [eta, 1 - eta]") {
    const std::size_t T = 512;
    const double eta = 1.0 / (T + 1.0);
    SwapKlBase f(unif_part({theta(eta), theta(1.0 - eta), true}, 5), eta, CounterRng(7));
    CHECK(f.grid().front() == eta);
    CHECK(f.grid().back() == 1.0 - eta);
    CounterRng env(17);
    for (std::size_t t = 0; t < T; ++t) {
        const RoundPrediction pred = f.predict();
        CHECK(pred.dist.is_valid(1e-12, eta, 1.0 - eta));
        CHECK(f.last_residual() <= 1e-8);
        f.observe(env.uniform() < 0.05 ? 1 : 0);
    }
    CHECK(f.min_action() >= eta);
    CHECK(f.max_action() <= 1.0 - eta);
}

TEST_CASE("epoch framework parameters") {
    CHECK(epoch_radius(1024, 9.0, 0.0) == doctest::Approx(3.0 / 32.0));
    CHECK(epoch_radius(1024, 9.0, 512.0) == doctest::Approx(3.0 / 32.0 + 0.5));
    CHECK(inner_pieces(4096, 0.25, 8.0) == 4);
    CHECK(outer_pieces(EpochVariant::cal2, 0.0, 8.0, 4096) == 1);
    CHECK(outer_pieces(EpochVariant::cal2, 1199.0, 1.0, 4096) == 11);
    CHECK(outer_pieces(EpochVariant::cal1, 1999.0, 2.0, 1000) == 13);
    CHECK(epoch_radius_pkl(1024, 4.0, 0.0) == doctest::Approx(std::numbers::pi / 8));
    CHECK(outer_pieces_pkl(0.0, 4096) == 2);
    CHECK(inner_pieces_pkl(4, 3.0, 100.0) == 2);
}

TEST_CASE("epoch frameworks start at one half and restart each epoch") {
    EpochFramework f(EpochBase::hu, EpochVariant::cal2, 0.0, 256, 2.0, CounterRng(1));
    CHECK(f.predict().p == 0.5);
    f.observe(1);
    CHECK(f.predict().p == 0.5);
    f.observe(1);
    CHECK(f.epoch() == 2);
    REQUIRE(f.partition().has_value());
    CHECK(f.partition()->domain() == Interval{0.0, 1.0, true});

    EpochFrameworkPkl g(256, 0.0, 2.0, CounterRng(2));
    CHECK(g.eta() == doctest::Approx(1.0 / 257.0));
    CHECK(g.predict().p == 0.5);
    g.observe(0);
    g.predict();
    g.observe(0);
    REQUIRE(g.partition().has_value());
    CHECK(g.partition()->domain().lo == theta(g.eta()));
}

TEST_CASE("every named forecaster honours the round contract") {
    ExperimentConfig cfg;
    for (const auto& name : algorithm_names()) {
        AlgorithmSpec spec;
        spec.name = name;
        for (auto env : {EnvSpec{IidEnv{0.15}, 0, ""},
                         EnvSpec{PiecewiseEnv{{{0.5, 0.9}, {0.5, 0.2}}, true}, 0, ""}}) {
            CAPTURE(name);
            const CellOutput out = run_cell(cfg, spec, env, 256, 3);
            CHECK(out.transcript.horizon() == 256);
            CHECK(out.row.metrics.cal1 >= 0.0);
        }
    }
}

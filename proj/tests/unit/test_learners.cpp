#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "adacal/harness.hpp"
#include "adacal/learners.hpp"

using namespace adacal;

TEST_CASE("msmwc starts uniform and deterministic") {
    Msmwc a(4, 1024), b(4, 1024);
    for (double w : a.weights()) CHECK(w == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::accumulate(a.weights().begin(), a.weights().end(), 0.0) == doctest::Approx(1.0));
    CHECK(a.learning_rates().size() == 10);
    CHECK(a.learning_rates()[0] == 0.25);
    const std::vector<double> l{0.3, -0.2, 0.9, -1.0};
    a.update(l);
    b.update(l);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.weights()[i] == b.weights()[i]);
}

TEST_CASE("msmwc update examples") {
    Msmwc m(3, 256);
    const std::vector<double> before(m.weights().begin(), m.weights().end());
    m.update(std::vector{0.4, 0.4, 0.4});
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.weights()[i] == doctest::Approx(before[i]).epsilon(1e-14));
    m.update(std::vector{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.weights()[i] == doctest::Approx(before[i]).epsilon(1e-14));
    m.update(std::vector{1.0, -1.0, 1.0});
    CHECK(m.weights()[1] > m.weights()[0]);
    CHECK(m.weights()[1] > m.weights()[2]);
    CHECK_THROWS_AS(m.update(std::vector{1.5, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(m.update(std::vector{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("msmwc weights stay on the simplex") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> loss(-1.0, 1.0);
    Msmwc m(7, 10000);
    std::vector<double> l(7);
    for (int t = 0; t < 10000; ++t) {
        for (auto& v : l) v = loss(gen);
        m.update(l);
        double s = 0.0;
        for (double w : m.weights()) {
            CHECK(w >= 0.0);
            s += w;
        }
        CHECK(std::abs(s - 1.0) <= 1e-9);
    }
}

TEST_CASE("msmwc regret against the best expert is sublinear") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> means{0.1, 0.0, -0.05, 0.2, 0.05};
    Msmwc m(means.size(), 10000);
    std::vector<double> cum(means.size(), 0.0), l(means.size());
    double learner = 0.0;
    std::vector<std::pair<double, double>> curve;
    for (int t = 1; t <= 10000; ++t) {
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = std::clamp(means[i] + (unit(gen) - 0.5), -1.0, 1.0);
        for (std::size_t i = 0; i < l.size(); ++i) learner += m.weights()[i] * l[i];
        for (std::size_t i = 0; i < l.size(); ++i) cum[i] += l[i];
        m.update(l);
        if ((t & (t - 1)) == 0 && t >= 64)
            curve.emplace_back(t, std::max(1.0, learner - *std::min_element(cum.begin(), cum.end())));
    }
    CHECK(fit_exponent(curve) < 0.8);
}

TEST_CASE("ogd step examples") {
    Ogd a = Ogd::with_constant_step(0.1, 0.8);
    a.step(1.0, 1);
    CHECK(a.action() == doctest::Approx(0.84));
    Ogd b(0.3);
    b.step(0.0, 1);
    CHECK(b.action() == 0.3);
    Ogd c(1.0);
    c.step(0.7, 1);
    CHECK(c.action() == 1.0);
    CHECK_THROWS_AS(c.step(-0.1, 1), std::invalid_argument);
    Ogd d;
    d.step(1.0, 1);  // step 1/2, gradient -1
    CHECK(d.action() == doctest::Approx(1.0));
}

TEST_CASE("ogd stays in [0, 1]") {
    std::mt19937_64 gen(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto make : {+[] { return Ogd(); }, +[] { return Ogd::with_constant_step(3.0); }}) {
        Ogd o = make();
        for (int t = 0; t < 2000; ++t) {
            o.step(5.0 * unit(gen), static_cast<int>(gen() % 2));
            CHECK(o.action() >= 0.0);
            CHECK(o.action() <= 1.0);
        }
    }
}

TEST_CASE("ewoo closed form and range") {
    Ewoo e;
    CHECK(e.action() == 0.5);
    e.update(1.0, 1);
    CHECK(e.action() == doctest::Approx(2.0 / 3.0));
    e.update(1.0, 1);
    CHECK(e.action() == doctest::Approx(0.75));

    std::mt19937_64 gen(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t T = 512;
    for (int trial = 0; trial < 200; ++trial) {
        Ewoo w;
        double budget = static_cast<double>(T - 1);
        while (budget > 0.0) {
            const double m = std::min(budget, unit(gen));
            w.update(m, static_cast<int>(gen() % 2));
            budget -= m;
            CHECK(w.hits() <= w.mass());
            CHECK(w.action() >= 1.0 / (T + 1.0) - 1e-15);
            CHECK(w.action() <= 1.0 - 1.0 / (T + 1.0) + 1e-15);
        }
    }
}

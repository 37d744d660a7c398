#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adacal/errors.hpp"
#include "adacal/partition.hpp"
#include "adacal/transform.hpp"

using namespace adacal;

namespace {

void check_tiling(const Partition& p) {
    REQUIRE(p.size() > 0);
    CHECK(p[0].lo == p.domain().lo);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        CHECK(p[i].hi == p[i + 1].lo);
        CHECK_FALSE(p[i].right_closed);
        CHECK(p[i].lo < p[i].hi);
    }
    CHECK(p[p.size() - 1].hi == p.domain().hi);
    CHECK(p[p.size() - 1].right_closed == p.domain().right_closed);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.grid_point(i) == p[i].hi);
}

}  // namespace

TEST_CASE("interval membership and emptiness") {
    Interval half{0.0, 0.5, false};
    CHECK(half.contains(0.0));
    CHECK_FALSE(half.contains(0.5));
    CHECK(Interval{0.3, 0.3, false}.empty());
    CHECK_FALSE(Interval{0.3, 0.3, true}.empty());
    CHECK(Interval{0.2, 0.4, true}.distance_to(0.1) == doctest::Approx(0.1));
    CHECK(Interval{0.2, 0.4, true}.distance_to(0.3) == 0.0);
    CHECK(Interval{0.2, 0.4, false}.distance_to(0.9) == doctest::Approx(0.5));
}

TEST_CASE("unif_part examples") {
    const Partition one = unif_part({0.0, 1.0, true}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == Interval{0.0, 1.0, true});

    const Partition two = unif_part({0.0, 1.0, true}, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Interval{0.0, 0.5, false});
    CHECK(two[1] == Interval{0.5, 1.0, true});

    const Partition four = unif_part({0.2, 0.6, true}, 4);
    REQUIRE(four.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(four[i].lo == doctest::Approx(0.2 + 0.1 * static_cast<double>(i)).epsilon(1e-12));
        CHECK(std::abs(four[i].width() - 0.1) <= 1e-12);
    }
    CHECK(four[3].hi == 0.6);
    check_tiling(four);

    CHECK_THROWS_AS(unif_part({0.0, 1.0, true}, 0), std::invalid_argument);
    CHECK_THROWS_AS(unif_part({0.0, 1.0, false}, 2), std::invalid_argument);
}

TEST_CASE("unif_part widths agree with (hi - lo) / n") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double a = unit(gen), b = unit(gen);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        const std::size_t n = 1 + gen() % 300;
        const Partition p = unif_part({a, b, true}, n);
        REQUIRE(p.size() == n);
        check_tiling(p);
        for (double w : p.widths()) CHECK(std::abs(w - (b - a) / static_cast<double>(n)) <= 1e-12);
    }
}

TEST_CASE("locate examples and errors") {
    const Partition two = unif_part({0.0, 1.0, true}, 2);
    CHECK(two.locate(0.5) == 1);
    CHECK(two.locate(0.0) == 0);
    CHECK(unif_part({0.0, 1.0, true}, 1).locate(1.0) == 0);
    CHECK_THROWS_AS(two.locate(1.0000001), OutOfDomain);
    CHECK_THROWS_AS(two.locate(-1e-9), OutOfDomain);
}

TEST_CASE("locate of a grid point") {
    // z_J = sup J lies in J only when J is right-closed; otherwise it is the
    // left endpoint of the next piece.
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + gen() % 40;
        const Partition p = unif_part({0.0, 1.0, true}, n);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::size_t expect = p[i].right_closed ? i : i + 1;
            CHECK(p.locate(p.grid_point(i)) == expect);
            CHECK(p.locate(p[i].lo) == i);
        }
    }
}

TEST_CASE("build_nonuniform_cal examples") {
    const Partition p = build_nonuniform_cal(0.5, 0.1, 2, 1, band_levels(1024));
    check_tiling(p);
    CHECK(p.domain() == Interval{0.0, 1.0, true});
    const std::size_t mid = p.locate(0.5);
    CHECK(p[mid].lo == doctest::Approx(0.5));
    CHECK(p[mid - 1].lo == doctest::Approx(0.3));
    CHECK(p[mid].hi == doctest::Approx(0.7));
    const std::size_t left0 = p.locate(0.25);
    CHECK(p[left0].lo == doctest::Approx(0.2));
    CHECK(p[left0].hi == doctest::Approx(0.3));
    const std::size_t right0 = p.locate(0.75);
    CHECK(p[right0].lo == doctest::Approx(0.7));
    CHECK(p[right0].hi == doctest::Approx(0.8));

    const Partition clipped = build_nonuniform_cal(0.0, 0.3, 1, 1, band_levels(1024));
    check_tiling(clipped);
    CHECK(clipped[0].lo == 0.0);
    CHECK(clipped[0].hi == doctest::Approx(0.6));
}

TEST_CASE("build_nonuniform_cal band geometry") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double y = unit(gen);
        const double r = 0.002 + 0.2 * unit(gen);
        const std::size_t n = 1 + gen() % 8, k = 1 + gen() % 5, qmax = 1 + gen() % 12;
        const BandedPartition bp = build_banded(y, r, n, k, qmax, 0.0, 1.0);
        check_tiling(bp.partition);
        const double anchor = y + (2.0 * unit(gen) - 1.0) * r;
        for (std::size_t i = 0; i < bp.partition.size(); ++i) {
            const BandLabel& lab = bp.labels[i];
            if (lab.region == Region::inner || lab.stretched) continue;
            const Interval& J = bp.partition[i];
            const double scale = std::ldexp(r, static_cast<int>(lab.level));
            CHECK(J.distance_to(anchor) >= scale - 1e-12);
            CHECK(J.width() <= scale / static_cast<double>(k) + 1e-12);
        }
    }
}

TEST_CASE("build_nonuniform_pkl covers the clipped angle range") {
    const double eta = 1.0 / 1025.0;
    const Partition p = build_nonuniform_pkl(std::numbers::pi / 2, 0.2, 2, 1, band_levels(1024), eta);
    check_tiling(p);
    CHECK(p.domain().lo == theta(eta));
    CHECK(p.domain().hi == theta(1.0 - eta));
    const std::size_t mid = p.locate(std::numbers::pi / 2);
    CHECK(p[mid].lo == doctest::Approx(std::numbers::pi / 2));
    CHECK(p[mid - 1].lo == doctest::Approx(std::numbers::pi / 2 - 0.4));
    CHECK(p[mid].hi == doctest::Approx(std::numbers::pi / 2 + 0.4));

    const Partition edge = build_nonuniform_pkl(theta(eta) + 0.01, 0.5, 3, 2, 10, eta);
    check_tiling(edge);
    CHECK(edge[0].lo == theta(eta));
    CHECK_THROWS_AS(build_nonuniform_pkl(1.0, 0.1, 1, 1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("partition serialization round-trips") {
    const Partition p = build_nonuniform_cal(0.37, 0.05, 3, 2, 10);
    const Partition back = Partition::parse(p.serialize());
    REQUIRE(back.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(back[i] == p[i]);
    CHECK(back.domain() == p.domain());
}

TEST_CASE("partition validation rejects bad tilings") {
    CHECK_THROWS_AS(Partition({{0.0, 0.4, false}, {0.5, 1.0, true}}, {0.0, 1.0, true}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Partition({{0.0, 0.5, true}, {0.5, 1.0, true}}, {0.0, 1.0, true}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Partition({{0.0, 0.5, false}}, {0.0, 1.0, true}), std::invalid_argument);
}

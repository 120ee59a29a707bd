#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "growth/errors.hpp"
#include "growth/lpp.hpp"
#include "growth/randkit.hpp"
#include "oracles/oracles.hpp"

using namespace growth;
using namespace growth::lpp;
using randkit::Exponential;
using randkit::Geometric;
using randkit::Orientation;
using randkit::WeightField;

namespace {

WeightFn hand_2x2() {
    return [](std::int64_t i, std::int64_t j) {
        if (i == 1 && j == 1) return 1.0;
        if (i == 2 && j == 1) return 2.0;
        if (i == 1 && j == 2) return 3.0;
        return 4.0;
    };
}

}  // namespace

TEST_CASE("hand 2x2 instance") {
    const auto grid = passage_times_G(hand_2x2(), 2, 2);
    CHECK(grid.at(2, 2) == 8.0);
    CHECK(grid.at(1, 1) == 1.0);
    const auto path = argmax_path(grid, {2, 2});
    REQUIRE(path.size() == 3);
    CHECK(path[0] == Site{1, 1});
    CHECK(path[1] == Site{1, 2});
    CHECK(path[2] == Site{2, 2});
}

TEST_CASE("1x1 grid") {
    const WeightField f({1, 0, 1}, Exponential{1.0});
    const auto grid = passage_times_G(f, 1, 1);
    CHECK(grid.at(1, 1) == f.at(1, 1));
    CHECK(argmax_path(grid, {1, 1}) == LatticePath{{1, 1}});
    CHECK(grid.at(0, 1) == 0.0);
    CHECK(grid.at(1, -4) == 0.0);
    CHECK_THROWS_AS(grid.at(2, 1), DomainError);
    CHECK_THROWS_AS(argmax_path(grid, {2, 1}), DomainError);
    CHECK_THROWS_AS(passage_times_G(f, 0, 3), ArgumentError);
}

TEST_CASE("recursion matches exhaustive path enumeration up to 7x7") {
    for (std::uint64_t rep = 0; rep < 6; ++rep) {
        for (const randkit::WeightLaw law : {randkit::WeightLaw{Exponential{1.0}}, randkit::WeightLaw{Geometric{0.4}}}) {
            const WeightField f({77, rep, 1}, law);
            const WeightFn y = [&f](std::int64_t i, std::int64_t j) { return f.at(i, j); };
            const auto grid = passage_times_G(f, 7, 7);
            for (std::int64_t k = 1; k <= 7; ++k) {
                for (std::int64_t l = 1; l <= 7; ++l) CHECK(grid.at(k, l) == oracles::lpp_brute_force(y, 1, 1, k, l));
            }
        }
    }
}

TEST_CASE("line sweep equals the full table") {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const WeightField f({3, rep, 1}, Exponential{1.0});
        for (auto [K, L] : {std::pair<std::int64_t, std::int64_t>{40, 25}, {25, 40}, {33, 33}, {1, 17}, {17, 1}}) {
            CHECK(passage_time_G(f, K, L) == passage_times_G(f, K, L).at(K, L));
        }
    }
}

TEST_CASE("G is monotone and 1-Lipschitz in a single weight") {
    const WeightField f({12, 0, 1}, Exponential{1.0});
    const auto base = passage_times_G(f, 12, 12);
    for (std::int64_t k = 1; k <= 12; ++k) {
        for (std::int64_t l = 1; l <= 12; ++l) {
            if (k > 1) CHECK(base.at(k, l) >= base.at(k - 1, l));
            if (l > 1) CHECK(base.at(k, l) >= base.at(k, l - 1));
        }
    }
    const double delta = 0.75;
    const WeightFn bumped = [&](std::int64_t i, std::int64_t j) { return f.at(i, j) + (i == 5 && j == 7 ? delta : 0.0); };
    const auto grid = passage_times_G(bumped, 12, 12);
    for (std::int64_t k = 1; k <= 12; ++k) {
        for (std::int64_t l = 1; l <= 12; ++l) {
            const double d = grid.at(k, l) - base.at(k, l);
            CHECK(d >= -1e-12);
            CHECK(d <= delta + 1e-12);
            if (k < 5 || l < 7) CHECK(d == 0.0);
        }
    }
}

TEST_CASE("passage_between") {
    const WeightField f({8, 0, 1}, Exponential{1.0});
    const auto grid = passage_times_G(f, 9, 9);
    CHECK(passage_between(f, {0, 0}, {9, 9}) == grid.at(9, 9));
    CHECK(passage_between(f, {6, 2}, {6, 9}) == 0.0);
    CHECK(passage_between(f, {4, 4}, {3, 9}) == 0.0);
    const WeightFn y = [&f](std::int64_t i, std::int64_t j) { return f.at(i, j); };
    CHECK(passage_between(f, {2, 3}, {7, 6}) == oracles::lpp_brute_force(y, 3, 4, 7, 6));

    // Hand instance split at (1,1): only the corner (2,2) remains.
    const auto hand = passage_times_G(hand_2x2(), 2, 2);
    CHECK(hand.at(1, 1) + 4.0 <= hand.at(2, 2));
}

TEST_CASE("superadditivity on 200 instances") {
    randkit::Stream pick(randkit::SeedSpec{99, 0, randkit::purpose::kControl});
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
        const WeightField f({99, rep, 1}, rep % 2 ? randkit::WeightLaw{Geometric{0.3}} : randkit::WeightLaw{Exponential{1.0}});
        const auto m = 5 + static_cast<std::int64_t>(pick.below(20));
        const auto n = 5 + static_cast<std::int64_t>(pick.below(20));
        const auto k = static_cast<std::int64_t>(pick.below(static_cast<std::uint64_t>(m + 1)));
        const auto l = static_cast<std::int64_t>(pick.below(static_cast<std::uint64_t>(n + 1)));
        const double g_kl = (k >= 1 && l >= 1) ? passage_time_G(f, k, l) : 0.0;
        CHECK(g_kl + passage_between(f, {k, l}, {m, n}) <= passage_time_G(f, m, n));
    }
}

TEST_CASE("argmax path sums to G") {
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const WeightField f({5, rep, 1}, Exponential{1.0});
        const auto grid = passage_times_G(f, 50, 50);
        const auto path = argmax_path(grid, {50, 50});
        REQUIRE(is_up_right_path(path));
        REQUIRE(path.front() == Site{1, 1});
        double s = 0.0;
        for (const auto& site : path) s += f.at(site.i, site.j);
        CHECK(std::abs(s - grid.at(50, 50)) < 1e-9);
    }
}

TEST_CASE("argmax ties prefer the horizontal predecessor") {
    const WeightFn ones = [](std::int64_t, std::int64_t) { return 1.0; };
    const auto path = argmax_path(passage_times_G(ones, 3, 3), {3, 3});
    CHECK(path == LatticePath{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 3}});
}

TEST_CASE("H recursion equals G under the relabeling") {
    const WeightField quad({17, 0, 1}, Exponential{1.0});
    const auto wedge = quad.reoriented(Orientation::TasepWedge);
    const auto H = passage_times_H(wedge, {-15, 15, -30, -1});
    const auto G = passage_times_G(quad, 60, 30);
    double max_diff = 0.0;
    for (std::int64_t l = -30; l <= -1; ++l) {
        for (std::int64_t k = -15; k <= 15; ++k) {
            if (l < k) max_diff = std::max(max_diff, std::abs(H.at(k, l) - G.at(k - l, -l)));
            else CHECK(H.at(k, l) == 0.0);
        }
    }
    CHECK(max_diff == 0.0);
    // (0,-1) is the only cell of row -1 without a left neighbor in the region.
    CHECK(H.at(0, -1) == wedge.at(0, -1));
    CHECK(H.at(1, -1) == wedge.at(0, -1) + wedge.at(1, -1));
    CHECK(H.at(1, -1) == quad.at(1, 1) + quad.at(2, 1));

    const auto H0 = passage_times_H(wedge, {0, 10, -3, 0});
    for (std::int64_t k = 0; k <= 10; ++k) CHECK(H0.at(k, 0) == 0.0);
    CHECK_THROWS_AS(passage_times_H(quad, {0, 1, -1, -1}), ArgumentError);
}

TEST_CASE("wedge paths") {
    CHECK(is_wedge_path({{0, -1}, {1, -1}, {0, -2}}));
    CHECK_FALSE(is_wedge_path({{0, -1}, {0, -2}}));
}

TEST_CASE("gamma oracle") {
    CHECK(gamma_oracle(1, 1) == 4.0);
    CHECK(gamma_oracle(0, 2.5) == doctest::Approx(2.5));
    randkit::Stream s(randkit::SeedSpec{1, 1, 1});
    for (int k = 0; k < 50; ++k) {
        const double c = 5 * s.uniform(), x = 3 * s.uniform(), y = 3 * s.uniform();
        CHECK(gamma_oracle(c * x, c * y) == doctest::Approx(c * gamma_oracle(x, y)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gamma_oracle(-1, 1), ArgumentError);
}

TEST_CASE("shape estimates") {
    const auto one = estimate_shape(Exponential{1.0}, 1, 1, 1, 4000, 3);
    CHECK(std::abs(one.mean - 1.0) < 4 * one.std_error);

    const auto a = estimate_shape(Exponential{1.0}, 1, 1, 100, 60, 4);
    const auto b = estimate_shape(Exponential{1.0}, 2, 1, 100, 60, 5);
    CHECK(b.mean - a.mean > 4 * std::hypot(a.std_error, b.std_error));
    CHECK(a.mean < 4.0);
    CHECK(a.mean > 3.6);

    // Same seed reproduces bit-for-bit, regardless of the worker count.
    const auto c = estimate_shape(Exponential{1.0}, 1, 1, 100, 60, 4, 3);
    CHECK(c.samples == a.samples);
    CHECK_THROWS_AS(estimate_shape(Exponential{1.0}, 1, 1, 0.5, 10, 1), ArgumentError);
}

TEST_CASE("shape CSV") {
    std::ostringstream out;
    write_shape_csv(out, {{"lpp", "exp", 1, 1, 100, 10, 3.9, 0.01, 7}});
    CHECK(out.str().rfind("model,law,x,y,n,replicates,mean,stderr,seed\n", 0) == 0);
    CHECK(out.str().find("lpp,exp,1,1,100,10,3.9,0.01,7") != std::string::npos);
}

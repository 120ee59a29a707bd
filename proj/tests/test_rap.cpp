#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "growth/errors.hpp"
#include "growth/rap.hpp"
#include "growth/stats.hpp"

using namespace growth;
using namespace growth::rap;

namespace {

RapState random_heights(std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
    randkit::Stream s(seed);
    RapState st{lo, {}, 0};
    double h = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i) st.heights.push_back(h += s.uniform() * 2.0 - 0.5);
    return st;
}

RapState linear_heights(std::int64_t lo, std::int64_t hi, double c) {
    RapState st{lo, {}, 0};
    for (std::int64_t i = lo; i <= hi; ++i) st.heights.push_back(c * static_cast<double>(i));
    return st;
}

}  // namespace

TEST_CASE("weight schemes") {
    const auto beta = WeightScheme::two_point_beta(2.0, 3.0);
    CHECK(beta.range() == 1);
    CHECK(beta.mean_weights()[1] == doctest::Approx(0.4));
    CHECK(beta.drift() == doctest::Approx(-0.6));
    CHECK(beta.sigma_a_squared() == doctest::Approx(0.24));
    CHECK_FALSE(beta.degenerate());

    const auto dir = WeightScheme::uniform_dirichlet(2);
    CHECK(dir.size() == 5);
    CHECK(std::abs(dir.drift()) < 1e-15);
    CHECK(dir.sigma_a_squared() == doctest::Approx(2.0));

    CHECK(WeightScheme::deterministic({0.0, 1.0, 0.0}).degenerate());
    CHECK_FALSE(WeightScheme::deterministic({0.5, 0.0, 0.5}).degenerate());
    CHECK_THROWS_AS(WeightScheme::deterministic({0.5, 0.5}), ArgumentError);
    CHECK_THROWS_AS(WeightScheme::deterministic({0.5, 0.6, -0.1}), ArgumentError);
    CHECK_THROWS_AS(WeightScheme::two_point_beta(0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(WeightScheme::uniform_dirichlet(0), ArgumentError);
}

TEST_CASE("sampled weights are probability vectors with the right means") {
    for (const auto& scheme : {WeightScheme::two_point_beta(2.0, 3.0), WeightScheme::two_point_beta(1.0, 1.0),
                               WeightScheme::uniform_dirichlet(1), WeightScheme::uniform_dirichlet(3)}) {
        const Environment env(scheme, {1, 0, randkit::purpose::kEnvironment});
        std::vector<double> u(scheme.size()), sum(scheme.size(), 0.0);
        const int count = 20000;
        for (int k = 0; k < count; ++k) {
            env.weights(k % 200 - 100, 1 + k / 200, u);
            double s = 0.0;
            for (double x : u) {
                REQUIRE(x >= 0.0);
                s += x;
            }
            REQUIRE(std::abs(s - 1.0) <= 1e-12);
            for (std::size_t j = 0; j < u.size(); ++j) sum[j] += u[j];
        }
        for (std::size_t j = 0; j < u.size(); ++j) {
            CHECK(std::abs(sum[j] / count - scheme.mean_weights()[j]) < 0.01);
        }
    }
}

TEST_CASE("environment is a function of (site, step)") {
    const Environment env(WeightScheme::uniform_dirichlet(1), {2, 0, randkit::purpose::kEnvironment});
    std::vector<double> a(3), b(3), c(3);
    env.weights(5, 7, a);
    env.weights(6, 7, c);
    env.weights(5, 7, b);
    CHECK(a == b);
    CHECK(a != c);
    const auto small = env.bounded(-3, 3, 2);
    CHECK(small.covers(3, 2));
    CHECK_FALSE(small.covers(4, 1));
    CHECK_FALSE(small.covers(0, 3));
    CHECK_FALSE(env.covers(0, 0));
    CHECK_THROWS_AS(small.weights(0, 3, a), UndecidableError);
    small.weights(1, 1, b);
    env.weights(1, 1, a);
    CHECK(a == b);
}

TEST_CASE("rap step on deterministic laws") {
    const Environment identity(WeightScheme::deterministic({0.0, 1.0, 0.0}), {3, 0, 5});
    const auto h = random_heights(-10, 10, 3);
    const auto h1 = rap_step(h, identity);
    CHECK(h1.lo == -9);
    CHECK(h1.step == 1);
    for (std::int64_t i = -9; i <= 9; ++i) CHECK(h1.at(i) == h.at(i));

    const Environment avg(WeightScheme::deterministic({0.5, 0.0, 0.5}), {3, 0, 5});
    const auto lin = rap_evolve(linear_heights(-20, 20, 0.7), avg, 5);
    for (std::int64_t i = lin.lo; i <= lin.hi(); ++i) CHECK(lin.at(i) == doctest::Approx(0.7 * i));

    const Environment rnd(WeightScheme::uniform_dirichlet(2), {3, 1, 5});
    const RapState flat{-30, std::vector<double>(61, 2.5), 0};
    const auto f = rap_evolve(flat, rnd, 6);
    for (double x : f.heights) CHECK(x == doctest::Approx(2.5).epsilon(1e-14));

    const RapState narrow{0, {1.0, 2.0}, 0};
    CHECK_THROWS_AS(rap_step(narrow, rnd), WindowExhausted);
    try {
        rap_evolve(flat, rnd, 20);
        FAIL("expected WindowExhausted");
    } catch (const WindowExhausted& e) {
        CHECK(e.required_width() == 81);
    }
}

TEST_CASE("quenched random walk expectation equals the rap iteration") {
    const RapState h = random_heights(-20, 19, 4);
    const Environment env(WeightScheme::uniform_dirichlet(1), {4, 0, randkit::purpose::kEnvironment});
    CHECK(rwre_quenched_height(h, env, 3, 0) == h.at(3));

    int compared = 0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        for (const auto& scheme : {WeightScheme::uniform_dirichlet(1), WeightScheme::two_point_beta(2.0, 0.5),
                                   WeightScheme::uniform_dirichlet(2)}) {
            const RapState h0 = random_heights(-25, 25, 100 + rep);
            const Environment e(scheme, {5, rep, randkit::purpose::kEnvironment});
            const std::int64_t tau = 3 + static_cast<std::int64_t>(rep % 4);
            const auto ht = rap_evolve(h0, e, tau);
            for (std::int64_t i = ht.lo; i <= ht.hi(); ++i) {
                CHECK(std::abs(rwre_quenched_height(h0, e, i, tau) - ht.at(i)) <= 1e-10);
                ++compared;
            }
        }
    }
    CHECK(compared > 3000);

    // Constant initial heights give the constant for any environment.
    const RapState flat{-10, std::vector<double>(21, -1.25), 0};
    CHECK(rwre_quenched_height(flat, env, 0, 8) == doctest::Approx(-1.25).epsilon(1e-14));

    // Coverage errors.
    CHECK_THROWS_AS(rwre_quenched_height(flat, env, 0, 11), UndecidableError);
    CHECK_THROWS_AS(rwre_quenched_height(flat, env.bounded(-10, 10, 3), 0, 5), UndecidableError);
    CHECK_THROWS_AS(rwre_quenched_height(flat, env, 0, -1), ArgumentError);
}

TEST_CASE("light cone: padding beyond M tau does not matter") {
    const Environment env(WeightScheme::uniform_dirichlet(2), {6, 0, randkit::purpose::kEnvironment});
    const RapState wide = random_heights(-60, 60, 6);
    RapState narrow{-30, {}, 0};
    for (std::int64_t i = -30; i <= 30; ++i) narrow.heights.push_back(wide.at(i));
    const auto a = rap_evolve(wide, env, 10);
    const auto b = rap_evolve(narrow, env, 10);
    for (std::int64_t i = b.lo; i <= b.hi(); ++i) CHECK(a.at(i) == b.at(i));
}

TEST_CASE("increments under the symmetric deterministic law") {
    // Constant increments stay constant.
    const Environment avg(WeightScheme::deterministic({0.5, 0.0, 0.5}), {7, 0, 5});
    const auto h = rap_evolve(linear_heights(-40, 40, 1.5), avg, 10);
    for (std::int64_t i = h.lo + 1; i <= h.hi(); ++i) CHECK(h.at(i) - h.at(i - 1) == doctest::Approx(1.5));
}

TEST_CASE("current along the characteristic") {
    const auto scheme = WeightScheme::two_point_beta(1.0, 1.0);
    const auto law = IncrementLaw::constant(1.0, 1.0);
    CHECK(current_Z(scheme, law, 0.3, 100, 0.0, 0.5, {8, 0, 0}) == 0.0);
    const double times[] = {0.5, 1.0};
    const auto path = current_Z_path(scheme, law, 0.0, 64, times, 0.0, {8, 1, 0});
    CHECK(path.size() == 2);
    CHECK(path[1] == current_Z(scheme, law, 0.0, 64, 1.0, 0.0, {8, 1, 0}));

    // Heights are translated along the characteristic: mean Z / n -> 0.
    for (double n : {64.0, 256.0}) {
        std::vector<double> zs;
        for (std::uint64_t rep = 0; rep < 400; ++rep) {
            zs.push_back(current_Z(scheme, IncrementLaw::constant(1.0, 1.0, rep % 2 == 1), 0.0, n, 1.0, 0.0,
                                   {9, rep, 0}));
        }
        const auto m = stats::mean_with_stderr(zs);
        CHECK(std::abs(m.mean) <= 4.0 * m.std_error + 1.0);
        CHECK(std::abs(m.mean) / n < 0.02);
    }
}

TEST_CASE("variance of the current grows like sqrt(n)") {
    const double ns[] = {16, 32, 64, 128, 256};
    const auto sc = z_variance_scaling(WeightScheme::two_point_beta(1.0, 1.0), IncrementLaw::constant(1.0, 1.0), ns, 1.0,
                                       300, 10);
    MESSAGE("slope " << sc.slope << " +- " << sc.slope_stderr);
    CHECK(sc.slope > 0.3);
    CHECK(sc.slope < 0.7);
    CHECK(sc.variances.size() == 5);
    CHECK_THROWS_AS(z_variance_scaling(WeightScheme::two_point_beta(1.0, 1.0), IncrementLaw::constant(1.0, 1.0),
                                       std::span(ns, 1), 1.0, 10, 1),
                    ArgumentError);
}

TEST_CASE("limit covariance") {
    const double c = 0.5 * 1.2 * 4.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(limit_covariance(2.0, 2.0, 2.0, 0.5, 1.2) == doctest::Approx(c * 2.0 * std::sqrt(2.0)));
    CHECK(limit_covariance(0.0, 3.0, 2.0, 0.5, 1.2) == 0.0);
    CHECK(limit_covariance(3.0, 1.0, 2.0, 0.5, 1.2) == limit_covariance(1.0, 3.0, 2.0, 0.5, 1.2));
    randkit::Stream s(11);
    for (int k = 0; k < 100; ++k) {
        const double a = 5.0 * s.uniform_open(), u = 3.0 * s.uniform(), v = 3.0 * s.uniform();
        CHECK(limit_covariance(a * u, a * v, 1.0, 0.7, 0.9) ==
              doctest::Approx(std::sqrt(a) * limit_covariance(u, v, 1.0, 0.7, 0.9)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(limit_covariance(-1.0, 1.0, 1.0, 1.0, 1.0), ArgumentError);

    std::vector<CovariancePoint> pts;
    for (double u : {0.25, 0.5, 1.0}) {
        for (double v : {0.5, 1.0}) pts.push_back({u, v, limit_covariance(u, v, 1.5, 0.4, 2.5)});
    }
    const auto fit = fit_kappa(pts, 1.5, 0.4);
    CHECK(fit.kappa == doctest::Approx(2.5));
    CHECK(fit.rms_residual < 1e-12);
    CHECK(fit.points == 6);
}

TEST_CASE("Z CSV") {
    std::ostringstream out;
    const ZRow rows[] = {{64, 1, 0, -2.5, 3, 9}};
    write_z_csv(out, rows);
    CHECK(out.str() == "n,t,r,Z,replicate,seed\n64,1,0,-2.5,3,9\n");
}

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "growth/errors.hpp"
#include "growth/randkit.hpp"
#include "growth/stats.hpp"

using namespace growth;
using namespace growth::randkit;

TEST_CASE("seed specs identify streams") {
    const SeedSpec a{7, 0, purpose::kWeights};
    CHECK(a.key() == SeedSpec{7, 0, purpose::kWeights}.key());
    CHECK(a.key() != a.with_stream(1).key());
    CHECK(a.key() != a.with_purpose(purpose::kClocks).key());
    CHECK(a.key() != SeedSpec{8, 0, purpose::kWeights}.key());

    Stream s1(a), s2(a);
    for (int k = 0; k < 100; ++k) CHECK(s1() == s2());
}

TEST_CASE("below is in range and roughly uniform") {
    Stream s(SeedSpec{1, 2, 3});
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int k = 0; k < n; ++k) {
        const auto v = s.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("exponential clock moments") {
    Stream s(SeedSpec{11, 0, purpose::kClocks});
    const int n = 1000000;
    std::vector<double> xs(n);
    int above = 0;
    for (auto& x : xs) {
        x = sample_exponential(2.0, s);
        REQUIRE(x > 0.0);
    }
    CHECK(stats::mean(xs) == doctest::Approx(0.5).epsilon(0.004));
    // Rate 1 tail.
    for (int k = 0; k < n; ++k) above += sample_exponential(1.0, s) > 1.0 ? 1 : 0;
    CHECK(std::abs(above / double(n) - std::exp(-1.0)) < 0.005);
    CHECK_THROWS_AS(sample_exponential(0.0, s), ArgumentError);
}

TEST_CASE("weight field reproducibility and moments") {
    const WeightField f({5, 0, purpose::kWeights}, Exponential{1.0});
    const WeightField g({5, 0, purpose::kWeights}, Exponential{1.0});
    CHECK(f.at(3, 4) == g.at(3, 4));
    CHECK(f.at(3, 4) != f.at(4, 3));
    CHECK_THROWS_AS(f.at(0, 1), DomainError);

    std::vector<double> xs, lag_a, lag_b;
    for (int i = 1; i <= 1000; ++i) {
        for (int j = 1; j <= 1000; ++j) {
            xs.push_back(f.at(i, j));
            if (j > 1) {
                lag_a.push_back(f.at(i, j - 1));
                lag_b.push_back(f.at(i, j));
            }
        }
    }
    CHECK(std::abs(stats::mean(xs) - 1.0) < 0.01);
    CHECK(std::abs(stats::sample_variance(xs) - 1.0) < 0.02);
    CHECK(std::abs(stats::pearson(lag_a, lag_b)) < 0.01);
}

TEST_CASE("geometric weights have support {1,2,...} and mean 1/q") {
    const WeightField f({9, 0, purpose::kWeights}, Geometric{0.25});
    std::vector<double> xs;
    for (int i = 1; i <= 400; ++i) {
        for (int j = 1; j <= 400; ++j) {
            const double y = f.at(i, j);
            REQUIRE(y >= 1.0);
            REQUIRE(y == std::floor(y));
            xs.push_back(y);
        }
    }
    CHECK(std::abs(stats::mean(xs) - 4.0) < 0.05);
    CHECK(law_mean(Geometric{0.25}) == 4.0);
}

TEST_CASE("wedge orientation relabels the same weights") {
    const WeightField quad({3, 1, purpose::kWeights}, Exponential{1.0});
    const auto wedge = quad.reoriented(Orientation::TasepWedge);
    for (int i = -5; i <= 5; ++i) {
        for (int j = -6; j <= -1; ++j) {
            if (j < i) CHECK(wedge.at(i, j) == quad.at(i - j, -j));
        }
    }
    CHECK_THROWS_AS(wedge.at(0, 0), DomainError);
    CHECK_THROWS_AS(wedge.at(-3, -3), DomainError);
}

TEST_CASE("Poisson points") {
    const Rect r{0, 0, 10, 1};
    std::vector<double> counts;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const auto pts = sample_poisson_points(r, 1.0, {21, k, purpose::kPoisson});
        for (const auto& p : pts.points) REQUIRE(r.contains(p.x, p.time));
        counts.push_back(static_cast<double>(pts.points.size()));
    }
    const auto m = stats::mean_with_stderr(counts);
    CHECK(std::abs(m.mean - 10.0) < 0.2);
    CHECK(std::abs(stats::sample_variance(counts) - 10.0) < 1.0);

    CHECK(sample_poisson_points(r, 0.0, {1, 0, 0}).points.empty());
    CHECK(sample_poisson_points({0, 0, 0, 5}, 3.0, {1, 0, 0}).points.empty());
    CHECK_THROWS_AS(sample_poisson_points(r, -1.0, {1, 0, 0}), ArgumentError);
}

TEST_CASE("Poisson count mean") {
    Stream s(SeedSpec{4, 0, purpose::kPoisson});
    std::vector<double> xs(100000);
    for (auto& x : xs) x = static_cast<double>(sample_poisson(10.0, s));
    CHECK(std::abs(stats::mean(xs) - 10.0) < 0.1);
}

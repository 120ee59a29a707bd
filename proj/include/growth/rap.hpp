#pragma once

// Random average process: heights updated as random convex combinations of
// neighbouring heights, the dual backward random walk in the same random
// environment, the current along the characteristic and the limiting
// covariance of its n^{1/4}-scaled fluctuations.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "growth/randkit.hpp"

namespace growth::rap {

// Law of the weight vector u = (u_{-M}, ..., u_M).
class WeightScheme {
public:
    // u_0 = B, u_1 = 1 - B with B ~ Beta(alpha, beta); M = 1, u_{-1} = 0.
    static WeightScheme two_point_beta(double alpha, double beta);
    // Uniform on the simplex of 2M+1 offsets.
    static WeightScheme uniform_dirichlet(int M);
    // Always the given vector (odd length 2M+1). Test laws; u = delta_0 is degenerate.
    static WeightScheme deterministic(std::vector<double> u);

    int range() const { return M_; }
    std::size_t size() const { return static_cast<std::size_t>(2 * M_ + 1); }
    // p(j) = E u_j, indexed j + M.
    const std::vector<double>& mean_weights() const { return mean_; }
    double drift() const;           // b = -sum_j j p(j)
    double sigma_a_squared() const;  // variance of the distribution p
    bool degenerate() const;         // P{max_j u_j < 1} = 0

    // Writes one weight vector (size 2M+1).
    void sample(randkit::Stream& stream, std::span<double> out) const;

private:
    enum class Kind { Beta, Dirichlet, Fixed };
    Kind kind_ = Kind::Fixed;
    int M_ = 0;
    double alpha_ = 1.0, beta_ = 1.0;
    std::vector<double> mean_;
};

// Counter-based environment: the weights at (site i, step tau) are a pure
// function of (seed, i, tau), so any window or evaluation order sees the same
// omega. Optional bounds model a finite environment.
class Environment {
public:
    Environment(WeightScheme scheme, const randkit::SeedSpec& seed);
    Environment bounded(std::int64_t lo, std::int64_t hi, std::int64_t max_step) const;

    const WeightScheme& scheme() const { return scheme_; }
    bool covers(std::int64_t i, std::int64_t tau) const;
    // Throws UndecidableError outside the bounds.
    void weights(std::int64_t i, std::int64_t tau, std::span<double> out) const;

private:
    WeightScheme scheme_;
    std::uint64_t key_;
    std::optional<std::int64_t> lo_, hi_, max_step_;
};

struct RapState {
    std::int64_t lo = 0;         // site of heights.front()
    std::vector<double> heights;
    std::int64_t step = 0;

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(heights.size()) - 1; }
    double at(std::int64_t i) const { return heights[static_cast<std::size_t>(i - lo)]; }
};

// h_i(tau) = sum_j u_j(i, tau) h_{i+j}(tau - 1), tau = state.step + 1. The
// result lives on [lo + M, hi - M]; WindowExhausted if that is empty.
RapState rap_step(const RapState& state, const Environment& env);
RapState rap_evolve(const RapState& state, const Environment& env, std::int64_t steps);

// E^omega[h_{X_tau}(0)] for the backward walk started at i at step tau,
// which moves from x to x + j with probability u_j(x, s) at step s. Computed
// by exact convolution. UndecidableError if the initial window or the
// environment misses the walk's range.
double rwre_quenched_height(const RapState& initial, const Environment& env, std::int64_t i, std::int64_t tau);

// Initial increments eta_i = h_i - h_{i-1} with mean rho(i/n) and variance
// v(i/n): Gaussian, or uniform with the same two moments (bounded support).
struct IncrementLaw {
    std::function<double(double)> rho;
    std::function<double(double)> variance;
    bool bounded = false;

    static IncrementLaw constant(double rho, double variance, bool bounded = false);
};

// Z_n(t,r) = h_{[n ybar] + [r sqrt n] + [n t b]}([n t]) - h_{[n ybar] + [r sqrt n]}(0)
// for each t in `times`, all from one initial profile and one environment.
std::vector<double> current_Z_path(const WeightScheme& scheme, const IncrementLaw& law, double ybar, double n,
                                   std::span<const double> times, double r, const randkit::SeedSpec& seed);
double current_Z(const WeightScheme& scheme, const IncrementLaw& law, double ybar, double n, double t, double r,
                 const randkit::SeedSpec& seed);

// Special case v = kappa rho^2 of the limit covariance of n^{-1/4} Z_n:
// (sigma_a kappa rho^2 / sqrt(2 pi)) (sqrt s + sqrt t - sqrt|t - s|), i.e. a
// fractional Brownian motion with Hurst parameter 1/4 in t. It does not depend on r.
double limit_covariance(double s, double t, double rho, double sigma_a, double kappa);

struct CovariancePoint {
    double s = 0, t = 0;
    double covariance = 0;  // of n^{-1/4} Z_n
};
struct KappaFit {
    double kappa = 0.0;  // estimate
    double rms_residual = 0.0;
    std::size_t points = 0;
};
// Least-squares kappa for limit_covariance against simulated covariances.
KappaFit fit_kappa(std::span<const CovariancePoint> points, double rho, double sigma_a);

struct VarianceScaling {
    std::vector<double> ns;
    std::vector<double> variances;  // Var Z_n(t, r)
    std::vector<double> variance_stderr;
    double slope = 0.0;  // of log Var against log n
    double slope_stderr = 0.0;
};
VarianceScaling z_variance_scaling(const WeightScheme& scheme, const IncrementLaw& law, std::span<const double> ns,
                                   double t, std::size_t reps, std::uint64_t seed, unsigned threads = 0);

struct ZRow {
    double n = 0, t = 0, r = 0;
    double Z = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
};
void write_z_csv(std::ostream& out, std::span<const ZRow> rows);

}  // namespace growth::rap

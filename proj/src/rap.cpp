#include "growth/rap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"
#include "growth/stats.hpp"

namespace growth::rap {

WeightScheme WeightScheme::two_point_beta(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0)) throw ArgumentError("two_point_beta: parameters must be positive");
    WeightScheme w;
    w.kind_ = Kind::Beta;
    w.M_ = 1;
    w.alpha_ = alpha;
    w.beta_ = beta;
    const double m = alpha / (alpha + beta);
    w.mean_ = {0.0, m, 1.0 - m};
    return w;
}

WeightScheme WeightScheme::uniform_dirichlet(int M) {
    if (M < 1) throw ArgumentError("uniform_dirichlet: range must be >= 1");
    WeightScheme w;
    w.kind_ = Kind::Dirichlet;
    w.M_ = M;
    w.mean_.assign(static_cast<std::size_t>(2 * M + 1), 1.0 / (2 * M + 1));
    return w;
}

WeightScheme WeightScheme::deterministic(std::vector<double> u) {
    if (u.size() % 2 == 0) throw ArgumentError("deterministic weights: need odd length 2M+1");
    double s = 0.0;
    for (double x : u) {
        if (!(x >= 0.0)) throw ArgumentError("deterministic weights: entries must be >= 0");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ArgumentError("deterministic weights: entries must sum to 1");
    WeightScheme w;
    w.kind_ = Kind::Fixed;
    w.M_ = static_cast<int>(u.size() / 2);
    w.mean_ = std::move(u);
    return w;
}

double WeightScheme::drift() const {
    double s = 0.0;
    for (int j = -M_; j <= M_; ++j) s += j * mean_[static_cast<std::size_t>(j + M_)];
    return -s;
}

double WeightScheme::sigma_a_squared() const {
    double m1 = 0.0, m2 = 0.0;
    for (int j = -M_; j <= M_; ++j) {
        const double p = mean_[static_cast<std::size_t>(j + M_)];
        m1 += j * p;
        m2 += static_cast<double>(j) * j * p;
    }
    return m2 - m1 * m1;
}

bool WeightScheme::degenerate() const {
    return kind_ == Kind::Fixed && std::ranges::any_of(mean_, [](double p) { return p == 1.0; });
}

void WeightScheme::sample(randkit::Stream& stream, std::span<double> out) const {
    if (out.size() != size()) throw ArgumentError("WeightScheme::sample: output size must be 2M+1");
    switch (kind_) {
        case Kind::Fixed:
            std::ranges::copy(mean_, out.begin());
            return;
        case Kind::Beta: {
            double b;
            if (alpha_ == 1.0 && beta_ == 1.0) {
                b = stream.uniform();
            } else {
                const double x = std::gamma_distribution<double>(alpha_)(stream);
                const double y = std::gamma_distribution<double>(beta_)(stream);
                b = x / (x + y);
            }
            out[0] = 0.0;
            out[1] = b;
            out[2] = 1.0 - b;
            return;
        }
        case Kind::Dirichlet: {
            double s = 0.0;
            for (auto& x : out) s += (x = randkit::sample_exponential(1.0, stream));
            for (auto& x : out) x /= s;
            return;
        }
    }
}

Environment::Environment(WeightScheme scheme, const randkit::SeedSpec& seed)
    : scheme_(std::move(scheme)), key_(seed.key()) {}

Environment Environment::bounded(std::int64_t lo, std::int64_t hi, std::int64_t max_step) const {
    if (hi < lo || max_step < 0) throw ArgumentError("Environment::bounded: empty bounds");
    Environment e = *this;
    e.lo_ = lo;
    e.hi_ = hi;
    e.max_step_ = max_step;
    return e;
}

bool Environment::covers(std::int64_t i, std::int64_t tau) const {
    if (tau < 1) return false;
    if (!lo_) return true;
    return i >= *lo_ && i <= *hi_ && tau <= *max_step_;
}

void Environment::weights(std::int64_t i, std::int64_t tau, std::span<double> out) const {
    if (!covers(i, tau)) throw UndecidableError("Environment: weights requested outside the environment");
    using randkit::mix64;
    const std::uint64_t k = mix64(mix64(key_ + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL) ^
                                  (static_cast<std::uint64_t>(tau) * 0xD1B54A32D192ED03ULL));
    randkit::Stream s(k);
    scheme_.sample(s, out);
}

RapState rap_step(const RapState& state, const Environment& env) {
    const int M = env.scheme().range();
    const auto n = static_cast<std::int64_t>(state.heights.size());
    if (n <= 2 * M) throw WindowExhausted("rap_step: window narrower than 2M+1", 2 * M + 1);
    RapState next{state.lo + M, std::vector<double>(static_cast<std::size_t>(n - 2 * M)), state.step + 1};
    std::vector<double> u(env.scheme().size());
    for (std::int64_t i = next.lo; i <= next.hi(); ++i) {
        env.weights(i, next.step, u);
        double h = 0.0;
        for (int j = -M; j <= M; ++j) h += u[static_cast<std::size_t>(j + M)] * state.at(i + j);
        next.heights[static_cast<std::size_t>(i - next.lo)] = h;
    }
    return next;
}

RapState rap_evolve(const RapState& state, const Environment& env, std::int64_t steps) {
    if (steps < 0) throw ArgumentError("rap_evolve: steps must be >= 0");
    const std::int64_t need = 2 * env.scheme().range() * steps + 1;
    if (static_cast<std::int64_t>(state.heights.size()) < need) {
        throw WindowExhausted("rap_evolve: initial window too narrow for the light cone", need);
    }
    RapState s = state;
    for (std::int64_t k = 0; k < steps; ++k) s = rap_step(s, env);
    return s;
}

double rwre_quenched_height(const RapState& initial, const Environment& env, std::int64_t i, std::int64_t tau) {
    if (tau < 0) throw ArgumentError("rwre_quenched_height: tau must be >= 0");
    const std::int64_t M = env.scheme().range();
    if (i - M * tau < initial.lo || i + M * tau > initial.hi()) {
        throw UndecidableError("rwre_quenched_height: initial heights do not cover the backward light cone");
    }
    // mass[x - base] over x in [i - M tau, i + M tau].
    const std::int64_t base = i - M * tau;
    std::vector<double> mass(static_cast<std::size_t>(2 * M * tau + 1), 0.0), next(mass.size());
    mass[static_cast<std::size_t>(i - base)] = 1.0;
    std::vector<double> u(env.scheme().size());
    std::int64_t lo = i, hi = i;
    for (std::int64_t s = initial.step + tau; s > initial.step; --s) {
        std::fill(next.begin() + (lo - M - base), next.begin() + (hi + M - base) + 1, 0.0);
        std::int64_t nlo = hi + M, nhi = lo - M;
        for (std::int64_t x = lo; x <= hi; ++x) {
            const double m = mass[static_cast<std::size_t>(x - base)];
            if (m == 0.0) continue;
            env.weights(x, s, u);
            for (std::int64_t j = -M; j <= M; ++j) {
                const double w = u[static_cast<std::size_t>(j + M)];
                if (w == 0.0) continue;
                next[static_cast<std::size_t>(x + j - base)] += m * w;
                nlo = std::min(nlo, x + j);
                nhi = std::max(nhi, x + j);
            }
        }
        std::swap(mass, next);
        lo = nlo;
        hi = nhi;
    }
    double e = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) e += mass[static_cast<std::size_t>(x - base)] * initial.at(x);
    return e;
}

IncrementLaw IncrementLaw::constant(double rho, double variance, bool bounded) {
    if (!(variance >= 0.0)) throw ArgumentError("IncrementLaw: variance must be >= 0");
    return {[rho](double) { return rho; }, [variance](double) { return variance; }, bounded};
}

std::vector<double> current_Z_path(const WeightScheme& scheme, const IncrementLaw& law, double ybar, double n,
                                   std::span<const double> times, double r, const randkit::SeedSpec& seed) {
    if (!(n >= 1.0)) throw ArgumentError("current_Z: n must be >= 1");
    const std::int64_t M = scheme.range();
    const double b = scheme.drift();
    const auto x0 = static_cast<std::int64_t>(std::floor(n * ybar) + std::floor(r * std::sqrt(n)));
    std::vector<std::int64_t> taus, targets;
    std::int64_t lo = x0, hi = x0;
    for (double t : times) {
        if (!(t >= 0.0)) throw ArgumentError("current_Z: t must be >= 0");
        const auto tau = static_cast<std::int64_t>(std::floor(n * t));
        const auto x1 = x0 + static_cast<std::int64_t>(std::floor(n * t * b));
        taus.push_back(tau);
        targets.push_back(x1);
        lo = std::min(lo, x1 - M * tau);
        hi = std::max(hi, x1 + M * tau);
    }

    randkit::Stream init(seed.with_purpose(randkit::purpose::kInitial));
    RapState h0{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0), 0};
    std::normal_distribution<double> normal;
    for (std::int64_t i = lo + 1; i <= hi; ++i) {
        const double y = static_cast<double>(i) / n;
        const double mean = law.rho(y), sd = std::sqrt(law.variance(y));
        const double eta = law.bounded ? mean + sd * std::sqrt(3.0) * (2.0 * init.uniform() - 1.0) : mean + sd * normal(init);
        h0.heights[static_cast<std::size_t>(i - lo)] = h0.heights[static_cast<std::size_t>(i - 1 - lo)] + eta;
    }
    const double anchor = h0.at(x0);
    for (auto& h : h0.heights) h -= anchor;

    const Environment env(scheme, seed.with_purpose(randkit::purpose::kEnvironment));
    std::vector<double> z;
    for (std::size_t k = 0; k < times.size(); ++k) z.push_back(rwre_quenched_height(h0, env, targets[k], taus[k]));
    return z;
}

double current_Z(const WeightScheme& scheme, const IncrementLaw& law, double ybar, double n, double t, double r,
                 const randkit::SeedSpec& seed) {
    const double times[] = {t};
    return current_Z_path(scheme, law, ybar, n, times, r, seed).front();
}

double limit_covariance(double s, double t, double rho, double sigma_a, double kappa) {
    if (!(s >= 0.0 && t >= 0.0)) throw ArgumentError("limit_covariance: times must be >= 0");
    const double c = sigma_a * kappa * rho * rho / std::sqrt(2.0 * std::numbers::pi);
    return c * (std::sqrt(s) + std::sqrt(t) - std::sqrt(std::abs(t - s)));
}

KappaFit fit_kappa(std::span<const CovariancePoint> points, double rho, double sigma_a) {
    if (points.empty()) throw ArgumentError("fit_kappa: no covariance points");
    double num = 0.0, den = 0.0;
    for (const auto& p : points) {
        const double f = limit_covariance(p.s, p.t, rho, sigma_a, 1.0);
        num += f * p.covariance;
        den += f * f;
    }
    if (!(den > 0.0)) throw ArgumentError("fit_kappa: covariance shape vanishes at every point");
    KappaFit fit{num / den, 0.0, points.size()};
    double ss = 0.0;
    for (const auto& p : points) {
        const double e = p.covariance - limit_covariance(p.s, p.t, rho, sigma_a, fit.kappa);
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(points.size()));
    return fit;
}

VarianceScaling z_variance_scaling(const WeightScheme& scheme, const IncrementLaw& law, std::span<const double> ns,
                                   double t, std::size_t reps, std::uint64_t seed, unsigned threads) {
    if (ns.size() < 2 || reps < 2) throw ArgumentError("z_variance_scaling: need >= 2 sizes and >= 2 replicates");
    VarianceScaling out;
    std::vector<double> logn, logv, se;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const auto zs = run_replicates(reps, threads, [&](std::size_t rep) {
            return current_Z(scheme, law, 0.0, ns[k], t, 0.0, {seed, (static_cast<std::uint64_t>(k) << 32) | rep, 0});
        });
        const auto v = stats::variance_with_stderr(zs);
        out.ns.push_back(ns[k]);
        out.variances.push_back(v.variance);
        out.variance_stderr.push_back(v.std_error);
        logn.push_back(std::log(ns[k]));
        logv.push_back(std::log(v.variance));
        se.push_back(v.std_error / v.variance);
    }
    out.slope = stats::least_squares(logn, logv).slope;
    const double mean = std::accumulate(logn.begin(), logn.end(), 0.0) / static_cast<double>(logn.size());
    double sxx = 0.0;
    for (double x : logn) sxx += (x - mean) * (x - mean);
    double var = 0.0;
    for (std::size_t k = 0; k < logn.size(); ++k) var += std::pow((logn[k] - mean) / sxx * se[k], 2);
    out.slope_stderr = std::sqrt(var);
    return out;
}

void write_z_csv(std::ostream& out, std::span<const ZRow> rows) {
    out << "n,t,r,Z,replicate,seed\n";
    out.precision(15);
    for (const auto& r : rows) {
        out << r.n << ',' << r.t << ',' << r.r << ',' << r.Z << ',' << r.replicate << ',' << r.seed << '\n';
    }
}

}  // namespace growth::rap

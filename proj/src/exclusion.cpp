#include "growth/exclusion.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"
#include "growth/stats.hpp"

namespace growth::exclusion {

using randkit::SeedSpec;
using randkit::Stream;

void AsymmetryParams::validate() const {
    if (!(q >= 0.0) || !(p > q) || std::abs(p + q - 1.0) > 1e-12) {
        throw ArgumentError("AsymmetryParams: need p > q >= 0 and p + q = 1");
    }
}

double flux(double rho, const AsymmetryParams& params) { return params.drift() * rho * (1.0 - rho); }

double characteristic_speed(double rho, const AsymmetryParams& params) {
    return params.drift() * (1.0 - 2.0 * rho);
}

HeightState::HeightState(int K, std::int64_t lo, std::vector<std::int64_t> heights, double time)
    : K_(K), lo_(lo), h_(std::move(heights)), time_(time) {
    if (K < 1) throw ArgumentError("HeightState: K must be >= 1");
    if (h_.size() < 3) throw ArgumentError("HeightState: window needs at least three columns");
}

bool HeightState::valid() const {
    for (std::size_t k = 1; k < h_.size(); ++k) {
        const auto d = h_[k] - h_[k - 1];
        if (d < 0 || d > K_) return false;
    }
    return true;
}

HeightState init_wedge(std::int64_t W) {
    if (W < 1) throw ArgumentError("init_wedge: W must be >= 1");
    return init_shifted_wedge(-W, W, 0, 0);
}

HeightState init_shifted_wedge(std::int64_t lo, std::int64_t hi, std::int64_t k, std::int64_t apex) {
    if (hi - lo < 2) throw ArgumentError("init_shifted_wedge: window too small");
    std::vector<std::int64_t> h(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t i = lo; i <= hi; ++i) h[static_cast<std::size_t>(i - lo)] = apex + (i < k ? i - k : 0);
    return {1, lo, std::move(h)};
}

HeightState init_bernoulli(std::int64_t W, double rho, Stream& stream) {
    if (W < 1) throw ArgumentError("init_bernoulli: W must be >= 1");
    return init_bernoulli(-W, W, rho, stream);
}

HeightState init_bernoulli(std::int64_t lo, std::int64_t hi, double rho, Stream& stream) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("init_bernoulli: density outside [0,1]");
    if (lo > 0 || hi < 0 || hi - lo < 2) throw ArgumentError("init_bernoulli: window must contain 0");
    std::vector<std::int64_t> eta(static_cast<std::size_t>(hi - lo));
    for (auto& e : eta) e = stream.bernoulli(rho) ? 1 : 0;
    return init_from_increments(1, lo, eta, 0, 0);
}

HeightState init_from_increments(int K, std::int64_t lo, std::span<const std::int64_t> increments,
                                 std::int64_t anchor, std::int64_t anchor_height) {
    const std::int64_t hi = lo + static_cast<std::int64_t>(increments.size());
    if (anchor < lo || anchor > hi) throw ArgumentError("init_from_increments: anchor outside window");
    std::vector<std::int64_t> h(increments.size() + 1, 0);
    for (std::size_t k = 0; k < increments.size(); ++k) {
        if (increments[k] < 0 || increments[k] > K) throw ArgumentError("init_from_increments: increment outside [0,K]");
        h[k + 1] = h[k] + increments[k];
    }
    const auto shift = anchor_height - h[static_cast<std::size_t>(anchor - lo)];
    for (auto& v : h) v += shift;
    return {K, lo, std::move(h)};
}

std::int64_t required_half_width(std::int64_t max_abs_site, const AsymmetryParams& params, double horizon) {
    if (horizon < 0.0) throw ArgumentError("required_half_width: negative horizon");
    return std::abs(max_abs_site) + static_cast<std::int64_t>(std::ceil(4.0 * (params.p + params.q) * horizon)) + 4;
}

std::int64_t influence_margin(const AsymmetryParams& params, double horizon) {
    if (horizon < 0.0) throw ArgumentError("influence_margin: negative horizon");
    const double m = (params.p + params.q) * horizon;
    return static_cast<std::int64_t>(std::ceil(m + 6.5 * std::sqrt(m) + 12.0));
}

ClockRace::ClockRace(std::int64_t lo, std::int64_t hi, const AsymmetryParams& params, const SeedSpec& seed)
    : stream_(seed), first_(lo + 1), p_(params.p), q_(params.q) {
    if (hi - lo < 2) throw ArgumentError("ClockRace: no interior columns");
    count_ = static_cast<std::uint64_t>(hi - lo - 1);
    total_rate_ = static_cast<double>(count_) * (params.p + params.q);
}

namespace {

void validate_snapshots(const std::vector<double>& times, double start, double end) {
    double prev = start;
    for (double t : times) {
        if (!(t >= prev) || t > end) throw ArgumentError("evolve: snapshot times must increase within the horizon");
        prev = t;
    }
}

Snapshot take_snapshot(const HeightState& s, double t, const std::vector<std::int64_t>& sites) {
    Snapshot snap{t, {}};
    snap.values.reserve(sites.size());
    for (auto i : sites) snap.values.push_back(s.at(i));
    return snap;
}

}  // namespace

Trajectory evolve(const HeightState& state, const AsymmetryParams& params, double horizon, const SeedSpec& seed,
                  const EvolveOptions& options) {
    params.validate();
    if (!(horizon >= 0.0)) throw ArgumentError("evolve: horizon must be >= 0");
    if (!state.valid()) throw ArgumentError("evolve: initial state violates the increment bound");
    const double start = state.time();
    const double end = start + horizon;
    validate_snapshots(options.snapshot_times, start, end);
    for (auto i : options.observe_sites) {
        if (i < state.lo() || i > state.hi()) throw ArgumentError("evolve: observation site outside the window");
    }

    Trajectory tr{state, state, {}, {}, {state.lo(), state.hi()}, false, 0};
    HeightState& s = tr.final_state;
    const std::int64_t lo = s.lo();
    const int K = s.K();
    auto heights = s.heights();
    ClockRace race(lo, s.hi(), params, seed);

    auto apply = [&](double t) {
        const auto tick = race.tick();
        tr.fronts.on_tick(tick.column);
        ++tr.attempts;
        if (try_jump(heights, lo, tick.column, tick.delta, K)) {
            if (options.record_events) tr.events.push_back({t, tick.column, tick.delta});
        }
        assert(heights[tick.column - lo] - heights[tick.column - lo - 1] >= 0);
    };

    std::size_t next_snap = 0;
    if (options.record_events) {
        double t = start;
        while (true) {
            t += race.gap();
            while (next_snap < options.snapshot_times.size() && options.snapshot_times[next_snap] < t) {
                tr.snapshots.push_back(take_snapshot(s, options.snapshot_times[next_snap], options.observe_sites));
                ++next_snap;
            }
            if (t > end) break;
            apply(t);
        }
    } else {
        // Only counts matter between observation times: Poisson many attempts.
        double t = start;
        auto advance_to = [&](double target) {
            for (auto n = race.ticks_in(target - t); n > 0; --n) apply(target);
            t = target;
        };
        for (; next_snap < options.snapshot_times.size(); ++next_snap) {
            advance_to(options.snapshot_times[next_snap]);
            tr.snapshots.push_back(take_snapshot(s, t, options.observe_sites));
        }
        advance_to(end);
    }
    s.set_time(end);
    for (auto i : options.observe_sites) {
        if (!tr.fronts.exact(i)) tr.boundary_influenced = true;
    }
    return tr;
}

StoppingTimes::StoppingTimes(std::int64_t i_lo, std::int64_t i_hi, std::int64_t j_lo, std::int64_t j_hi)
    : i_lo_(i_lo), i_hi_(i_hi), j_lo_(j_lo), j_hi_(j_hi) {
    if (i_hi < i_lo || j_hi < j_lo) throw ArgumentError("StoppingTimes: empty table");
    values_.assign(static_cast<std::size_t>((i_hi - i_lo + 1) * (j_hi - j_lo + 1)),
                   std::numeric_limits<double>::quiet_NaN());
}

std::optional<double> StoppingTimes::at(std::int64_t i, std::int64_t j) const {
    if (!contains(i, j)) throw DomainError("StoppingTimes: entry outside the table");
    const double v = values_[index(i, j)];
    if (std::isnan(v)) return std::nullopt;
    return v;
}

void StoppingTimes::set(std::int64_t i, std::int64_t j, double t) { values_[index(i, j)] = t; }

StoppingTimes stopping_times(const Trajectory& wedge, std::int64_t i_max, std::int64_t j_min) {
    if (j_min > 0) throw ArgumentError("stopping_times: j_min must be <= 0");
    if (i_max < j_min) throw ArgumentError("stopping_times: i_max must be >= j_min");
    const auto& w0 = wedge.initial;
    if (j_min < w0.lo() || i_max > w0.hi()) throw ArgumentError("stopping_times: table exceeds the window");
    if (wedge.events.empty() && !std::ranges::equal(wedge.initial.heights(), wedge.final_state.heights())) {
        throw ArgumentError("stopping_times: trajectory has no event log");
    }
    StoppingTimes table(j_min, i_max, j_min, 0);
    for (std::int64_t i = j_min; i <= i_max; ++i) {
        for (std::int64_t j = j_min; j <= 0; ++j) {
            if (w0.at(i) <= j) table.set(i, j, w0.time());
        }
    }
    // Replay the log; a column reaching level j for the first time fixes T(i,j).
    HeightState s = w0;
    for (const auto& e : wedge.events) {
        auto& h = s.at(e.column);
        h += e.delta;
        if (e.delta < 0 && table.contains(e.column, h) && !table.at(e.column, h)) table.set(e.column, h, e.time);
    }
    return table;
}

std::int64_t current(const Trajectory& trajectory, std::int64_t i, double t) {
    const auto& h0 = trajectory.initial;
    if (i < h0.lo() || i > h0.hi()) throw ArgumentError("current: edge outside the window");
    if (t < h0.time() || t > trajectory.final_state.time()) throw ArgumentError("current: time outside the horizon");
    if (t == trajectory.final_state.time()) return h0.at(i) - trajectory.final_state.at(i);
    if (trajectory.events.empty() && !std::ranges::equal(h0.heights(), trajectory.final_state.heights())) {
        throw ArgumentError("current: trajectory has no event log");
    }
    std::int64_t net = 0;
    for (const auto& e : trajectory.events) {
        if (e.time > t) break;
        if (e.column == i) net -= e.delta;
    }
    return net;
}

StationarySamples stationary_heights(double rho, const AsymmetryParams& params, std::span<const double> velocities,
                                     std::span<const double> times, std::size_t reps, std::uint64_t seed,
                                     unsigned threads) {
    params.validate();
    if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("stationary_heights: need 0 < rho < 1");
    if (velocities.empty() || times.empty()) throw ArgumentError("stationary_heights: nothing to observe");
    std::vector<double> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0) throw ArgumentError("stationary_heights: negative time");
    const double horizon = sorted.back();

    // Sites observed at sorted time k, for every velocity.
    std::vector<std::int64_t> sites;
    std::int64_t site_lo = 0, site_hi = 0;
    for (double v : velocities) {
        for (double t : sorted) {
            const auto x = static_cast<std::int64_t>(std::floor(v * t));
            sites.push_back(x);
            site_lo = std::min(site_lo, x);
            site_hi = std::max(site_hi, x);
        }
    }
    const auto margin = influence_margin(params, horizon);
    const std::int64_t lo = site_lo - margin, hi = site_hi + margin;

    StationarySamples out;
    out.velocities.assign(velocities.begin(), velocities.end());
    out.times.assign(times.begin(), times.end());
    out.half_width = std::max(-lo, hi);

    struct RepResult {
        std::vector<std::vector<double>> by_v;
        bool flagged = false;
    };
    auto results = run_replicates(reps, threads, [&](std::size_t rep) {
        Stream init(SeedSpec{seed, rep, randkit::purpose::kInitial});
        const auto h0 = init_bernoulli(lo, hi, rho, init);
        EvolveOptions opts;
        opts.snapshot_times = sorted;
        std::vector<std::int64_t> uniq = sites;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        opts.observe_sites = uniq;
        const auto tr = evolve(h0, params, horizon, SeedSpec{seed, rep, randkit::purpose::kClocks}, opts);
        RepResult r;
        r.flagged = tr.boundary_influenced;
        r.by_v.assign(velocities.size(), std::vector<double>(times.size()));
        for (std::size_t vi = 0; vi < velocities.size(); ++vi) {
            for (std::size_t ti = 0; ti < times.size(); ++ti) {
                const auto k = static_cast<std::size_t>(
                    std::lower_bound(sorted.begin(), sorted.end(), times[ti]) - sorted.begin());
                const auto x = static_cast<std::int64_t>(std::floor(velocities[vi] * times[ti]));
                const auto pos = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), x) - uniq.begin());
                r.by_v[vi][ti] = static_cast<double>(tr.snapshots[k].values[pos]);
            }
        }
        return r;
    });
    out.samples.reserve(reps);
    for (auto& r : results) {
        out.boundary_flags += r.flagged ? 1 : 0;
        out.samples.push_back(std::move(r.by_v));
    }
    return out;
}

SecondClassRun second_class_run(double rho, const AsymmetryParams& params, double horizon, const SeedSpec& seed,
                                std::span<const double> record_times, bool check_invariant) {
    params.validate();
    if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("second_class_run: need 0 < rho < 1");
    if (!(horizon >= 0.0)) throw ArgumentError("second_class_run: horizon must be >= 0");
    std::vector<double> times(record_times.begin(), record_times.end());
    validate_snapshots(times, 0.0, horizon);

    // Q moves at total rate <= p + q, the influence fronts at rate p + q.
    const std::int64_t W = 2 * influence_margin(params, horizon) + 2;
    const std::int64_t lo = -W, hi = W;
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::uint8_t> eta(n, 0), zeta(n, 0);
    Stream init(seed.with_purpose(randkit::purpose::kInitial));
    for (std::int64_t x = lo + 1; x <= hi; ++x) {
        const auto k = static_cast<std::size_t>(x - lo);
        eta[k] = (x != 0 && init.bernoulli(rho)) ? 1 : 0;
        zeta[k] = x == 0 ? 1 : eta[k];
    }

    SecondClassRun run;
    std::int64_t Q = 0;
    InfluenceFronts fronts{lo, hi};
    ClockRace race(lo, hi, params, seed.with_purpose(randkit::purpose::kClocks));

    auto step = [](std::vector<std::uint8_t>& c, std::size_t k, int delta) {
        if (delta < 0) {
            if (c[k] == 1 && c[k + 1] == 0) std::swap(c[k], c[k + 1]);
        } else if (c[k] == 0 && c[k + 1] == 1) {
            std::swap(c[k], c[k + 1]);
        }
    };
    auto apply = [&] {
        const auto tick = race.tick();
        fronts.on_tick(tick.column);
        const auto k = static_cast<std::size_t>(tick.column - lo);
        step(eta, k, tick.delta);
        step(zeta, k, tick.delta);
        ++run.events;
        const bool touched = Q == tick.column || Q == tick.column + 1;
        if (touched) {
            Q = eta[k] != zeta[k] ? tick.column : tick.column + 1;
        }
        if (check_invariant) {
            int count = touched ? 0 : 1;
            count += (eta[k] != zeta[k]) + (eta[k + 1] != zeta[k + 1]);
            const auto q = static_cast<std::size_t>(Q - lo);
            if (count != 1 || zeta[q] != 1 || eta[q] != 0) ++run.invariant_violations;
        }
        if (!(Q - 1 > fronts.left && Q < fronts.right)) run.discarded = true;
    };

    double t = 0.0;
    auto advance_to = [&](double target) {
        for (auto m = race.ticks_in(target - t); m > 0; --m) apply();
        t = target;
    };
    for (double r : times) {
        advance_to(r);
        run.path.emplace_back(r, Q);
    }
    advance_to(horizon);
    run.final_position = Q;
    return run;
}

DriftEstimate second_class_drift(double rho, const AsymmetryParams& params, double t, std::size_t reps,
                                 std::uint64_t seed, unsigned threads) {
    if (!(t > 0.0)) throw ArgumentError("second_class_drift: t must be positive");
    auto runs = run_replicates(reps, threads, [&](std::size_t rep) {
        return second_class_run(rho, params, t, SeedSpec{seed, rep, 0});
    });
    DriftEstimate est;
    std::vector<double> ratios;
    for (const auto& r : runs) {
        if (r.discarded) {
            ++est.discarded;
            continue;
        }
        est.positions.push_back(static_cast<double>(r.final_position));
        ratios.push_back(static_cast<double>(r.final_position) / t);
    }
    const auto m = stats::mean_with_stderr(ratios);
    est.mean = m.mean;
    est.std_error = m.std_error;
    est.used = ratios.size();
    return est;
}

VarianceIdentity variance_identity_check(double rho, const AsymmetryParams& params, double v, double t,
                                         std::size_t reps, std::uint64_t seed, unsigned threads) {
    if (!(t >= 0.0)) throw ArgumentError("variance_identity_check: t must be >= 0");
    if (reps < 2) throw ArgumentError("variance_identity_check: need at least two replicates");
    VarianceIdentity out;
    const double vs[] = {v};
    const double ts[] = {t};
    const auto heights = stationary_heights(rho, params, vs, ts, reps, seed, threads);
    std::vector<double> h;
    h.reserve(reps);
    for (const auto& s : heights.samples) h.push_back(s[0][0]);
    const auto var = stats::variance_with_stderr(h);
    out.lhs = var.variance;
    out.lhs_se = var.std_error;

    // Independent seed family for the coupled side.
    const std::uint64_t coupled_seed = randkit::mix64(seed ^ 0xC0C0C0C0ULL);
    const auto target = static_cast<std::int64_t>(std::floor(v * t));
    const double times[] = {t};
    auto dev = run_replicates(reps, threads, [&](std::size_t rep) {
        const auto run = second_class_run(rho, params, t, SeedSpec{coupled_seed, rep, 0}, times);
        return static_cast<double>(std::abs(run.final_position - target));
    });
    const auto m = stats::mean_with_stderr(dev);
    const double c = rho * (1.0 - rho);
    out.rhs = c * m.mean;
    out.rhs_se = c * m.std_error;
    if (out.rhs > 0.0) {
        out.ratio = out.lhs / out.rhs;
        const double a = out.lhs > 0.0 ? out.lhs_se / out.lhs : 0.0;
        const double b = out.rhs_se / out.rhs;
        out.ratio_se = out.ratio * std::sqrt(a * a + b * b);
    }
    return out;
}

namespace {

double log_slope(std::span<const double> times, const std::vector<double>& variances) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < times.size(); ++k) {
        x.push_back(std::log(times[k]));
        y.push_back(std::log(std::max(variances[k], 1e-300)));
    }
    return stats::least_squares(x, y).slope;
}

}  // namespace

std::vector<ExponentFit> characteristic_variance_exponent(double rho, const AsymmetryParams& params,
                                                          std::span<const double> t_grid,
                                                          std::span<const double> velocities, std::size_t reps,
                                                          std::uint64_t seed, unsigned threads) {
    if (t_grid.size() < 4) throw ArgumentError("characteristic_variance_exponent: need >= 4 grid points");
    const auto [mn, mx] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*mn > 0.0) || std::log10(*mx / *mn) < 1.5 - 1e-12) {
        throw ArgumentError("characteristic_variance_exponent: grid must be positive and span >= 1.5 decades");
    }
    if (reps < 8) throw ArgumentError("characteristic_variance_exponent: need at least 8 replicates");
    std::vector<double> vs(velocities.begin(), velocities.end());
    if (vs.empty()) vs.push_back(characteristic_speed(rho, params));
    const auto samples = stationary_heights(rho, params, vs, t_grid, reps, seed, threads);

    std::vector<ExponentFit> fits;
    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
        auto variances_of = [&](std::span<const std::size_t> idx) {
            std::vector<double> var(t_grid.size());
            std::vector<double> col(idx.size());
            for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
                for (std::size_t k = 0; k < idx.size(); ++k) col[k] = samples.samples[idx[k]][vi][ti];
                var[ti] = stats::sample_variance(col);
            }
            return var;
        };
        auto slope_of = [&](std::span<const std::size_t> idx) { return log_slope(t_grid, variances_of(idx)); };

        std::vector<std::size_t> all(reps);
        std::iota(all.begin(), all.end(), std::size_t{0});
        ExponentFit fit;
        fit.velocity = vs[vi];
        fit.times.assign(t_grid.begin(), t_grid.end());
        fit.variances = variances_of(all);
        fit.slope = log_slope(t_grid, fit.variances);
        const std::size_t groups = std::min<std::size_t>(20, reps);
        fit.slope_se = stats::grouped_jackknife_stderr(reps, groups, slope_of);

        const std::size_t half = reps / 2;
        std::vector<std::size_t> first(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<std::size_t> second(all.begin() + static_cast<std::ptrdiff_t>(half), all.end());
        fit.first_half_slope = slope_of(first);
        fit.second_half_slope = slope_of(second);
        auto half_se = [&](const std::vector<std::size_t>& part) {
            return stats::grouped_jackknife_stderr(part.size(), std::min<std::size_t>(10, part.size()),
                                                   [&](std::span<const std::size_t> idx) {
                                                       std::vector<std::size_t> mapped;
                                                       mapped.reserve(idx.size());
                                                       for (auto k : idx) mapped.push_back(part[k]);
                                                       return slope_of(mapped);
                                                   });
        };
        const double s1 = half_se(first), s2 = half_se(second);
        fit.half_difference_se = std::sqrt(s1 * s1 + s2 * s2);
        fits.push_back(std::move(fit));
    }
    return fits;
}

EnvelopeReport envelope_coupled_run(const HeightState& initial, double horizon, const SeedSpec& seed,
                                    bool shared_clocks) {
    if (initial.K() != 1 || !initial.valid()) throw ArgumentError("envelope_coupled_run: need a K = 1 height state");
    if (!(horizon >= 0.0)) throw ArgumentError("envelope_coupled_run: horizon must be >= 0");
    const std::int64_t lo = initial.lo(), hi = initial.hi();
    HeightState h = initial;
    std::vector<HeightState> wedges;
    wedges.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) wedges.push_back(init_shifted_wedge(lo, hi, k, initial.at(k)));

    EnvelopeReport report;
    auto check = [&](std::int64_t i, double t) {
        std::int64_t env = std::numeric_limits<std::int64_t>::min();
        for (const auto& y : wedges) env = std::max(env, y.at(i));
        ++report.checks;
        if (env != h.at(i)) {
            if (report.mismatches == 0) report.first_mismatch_time = t;
            ++report.mismatches;
        }
    };
    auto check_all = [&](double t) {
        for (std::int64_t i = lo; i <= hi; ++i) check(i, t);
    };

    const AsymmetryParams tasep = AsymmetryParams::tasep();
    ClockRace race(lo, hi, tasep, seed.with_purpose(randkit::purpose::kClocks));
    Stream selector(seed.with_purpose(randkit::purpose::kControl));
    // With independent clocks the two systems ring at twice the total rate;
    // each ring belongs to one of them with probability 1/2.
    const double rate_factor = shared_clocks ? 1.0 : 2.0;

    check_all(0.0);
    double t = 0.0;
    while (true) {
        t += race.gap() / rate_factor;
        if (t > horizon) break;
        const auto tick = race.tick();
        ++report.events;
        const int which = shared_clocks ? 2 : (selector.bernoulli(0.5) ? 0 : 1);
        if (which != 1) try_jump(h.heights(), lo, tick.column, tick.delta, 1);
        if (which != 0) {
            for (auto& y : wedges) try_jump(y.heights(), lo, tick.column, tick.delta, 1);
        }
        check(tick.column, t);
    }
    check_all(horizon);
    return report;
}

FluxEstimate k_exclusion_flux_estimate(int K, double rho, std::int64_t L, double horizon, const SeedSpec& seed,
                                       double burn_fraction, int batches) {
    if (K < 1) throw ArgumentError("k_exclusion_flux_estimate: K must be >= 1");
    if (L < 2) throw ArgumentError("k_exclusion_flux_estimate: ring needs at least two sites");
    if (!(rho >= 0.0 && rho <= K)) throw ArgumentError("k_exclusion_flux_estimate: density outside [0,K]");
    const double mass_real = rho * static_cast<double>(L);
    const auto mass = static_cast<std::int64_t>(std::llround(mass_real));
    if (std::abs(mass_real - static_cast<double>(mass)) > 1e-9) {
        throw ArgumentError("k_exclusion_flux_estimate: rho * L must be an integer");
    }
    if (!(horizon > 0.0) || !(burn_fraction >= 0.0 && burn_fraction < 1.0) || batches < 2) {
        throw ArgumentError("k_exclusion_flux_estimate: bad horizon, burn-in or batch count");
    }

    const auto n = static_cast<std::size_t>(L);
    std::vector<int> eta(n, 0);
    Stream init(seed.with_purpose(randkit::purpose::kInitial));
    // Place units one at a time on uniformly chosen non-full sites.
    std::vector<std::size_t> open(n);
    std::iota(open.begin(), open.end(), std::size_t{0});
    for (std::int64_t u = 0; u < mass; ++u) {
        const auto k = init.below(open.size());
        const auto site = open[k];
        if (++eta[site] == K) {
            open[k] = open.back();
            open.pop_back();
        }
    }

    Stream clocks(seed.with_purpose(randkit::purpose::kClocks));
    std::uint64_t jumps = 0;
    auto run_for = [&](double dt) {
        std::uint64_t moved = 0;
        for (auto m = randkit::sample_poisson(static_cast<double>(L) * dt, clocks); m > 0; --m) {
            const auto c = clocks.below(n);
            const auto d = c + 1 == n ? 0 : c + 1;
            if (eta[c] > 0 && eta[d] < K) {
                --eta[c];
                ++eta[d];
                ++moved;
            }
        }
        return moved;
    };

    run_for(burn_fraction * horizon);
    const double dt = (1.0 - burn_fraction) * horizon / batches;
    std::vector<double> batch_flux;
    for (int b = 0; b < batches; ++b) {
        const auto moved = run_for(dt);
        jumps += moved;
        batch_flux.push_back(static_cast<double>(moved) / (static_cast<double>(L) * dt));
    }
    const auto m = stats::mean_with_stderr(batch_flux);
    return {m.mean, m.std_error, mass, jumps};
}

void write_height_csv(std::ostream& out, std::span<const HeightRow> rows) {
    out << "t,site,value,replicate,seed\n";
    out.precision(12);
    for (const auto& r : rows) out << r.t << ',' << r.site << ',' << r.value << ',' << r.replicate << ',' << r.seed << '\n';
}

void write_second_class_csv(std::ostream& out, std::span<const SecondClassRow> rows) {
    out << "t,Q,replicate,seed\n";
    out.precision(12);
    for (const auto& r : rows) out << r.t << ',' << r.Q << ',' << r.replicate << ',' << r.seed << '\n';
}

}  // namespace growth::exclusion

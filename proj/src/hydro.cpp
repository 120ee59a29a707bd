#include "growth/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "growth/errors.hpp"
#include "growth/numerics.hpp"
#include "growth/parallel.hpp"

namespace growth::hydro {

namespace {

void check_breakpoints(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || xs.size() != ys.size()) throw ArgumentError("Profile: need matching, nonempty breakpoint lists");
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (!(xs[k] > xs[k - 1])) throw ArgumentError("Profile: breakpoints must increase strictly");
    }
}

}  // namespace

Profile::Profile(std::vector<double> xs, std::vector<double> ys, double left_slope, double right_slope)
    : xs_(std::move(xs)), ys_(std::move(ys)), left_slope_(left_slope), right_slope_(right_slope) {
    check_breakpoints(xs_, ys_);
}

Profile::Profile(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    check_breakpoints(xs_, ys_);
    if (xs_.size() < 2) throw ArgumentError("Profile: extension slopes need two breakpoints");
    const auto n = xs_.size();
    left_slope_ = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    right_slope_ = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
}

Profile Profile::linear(double rho) { return {{0.0}, {0.0}, rho, rho}; }
Profile Profile::wedge() { return {{0.0}, {0.0}, 1.0, 0.0}; }
Profile Profile::two_slope(double left, double right, double corner) { return {{corner}, {0.0}, left, right}; }

double Profile::operator()(double y) const {
    if (y < xs_.front()) {
        const double d = y - xs_.front();
        return ys_.front() + left_slope_ * d - curvature_ * d * d;
    }
    if (y >= xs_.back()) return ys_.back() + right_slope_ * (y - xs_.back());
    const auto k = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), y) - xs_.begin());
    const double w = (y - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return ys_[k - 1] + w * (ys_[k] - ys_[k - 1]);
}

double Profile::min_slope() const {
    double m = std::min(left_slope_, right_slope_);
    for (std::size_t k = 1; k < xs_.size(); ++k) m = std::min(m, (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]));
    return m;
}

double Profile::max_slope() const {
    double m = std::max(left_slope_, right_slope_);
    for (std::size_t k = 1; k < xs_.size(); ++k) m = std::max(m, (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]));
    return m;
}

Profile Profile::with_left_tail_curvature(double c) const {
    if (!(c >= 0.0)) throw ArgumentError("Profile: tail curvature must be >= 0");
    Profile p = *this;
    p.curvature_ = c;
    return p;
}

double g_oracle(double x, double drift) {
    if (!(drift > 0.0)) throw ArgumentError("g_oracle: drift must be positive");
    const double u = x / drift;
    if (u < -1.0 || u > 1.0) return drift * std::min(0.0, u);
    return -drift * (1.0 - u) * (1.0 - u) / 4.0;
}

double flux_oracle(double rho, double drift) { return drift * rho * (1.0 - rho); }

double duality_check(double rho, double drift) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("duality_check: rho outside [0,1]");
    // rho y + g(-y) is concave; it increases for y < -d and decreases for y > d.
    const auto best = numerics::golden_maximize([&](double y) { return rho * y + g_oracle(-y, drift); }, -drift - 1.0,
                                                drift + 1.0, 1e-10);
    return best.value;
}

DualitySweep duality_sweep(std::size_t points, double drift) {
    if (points < 2) throw ArgumentError("duality_sweep: need at least two points");
    DualitySweep out;
    out.points = points;
    for (std::size_t k = 0; k < points; ++k) {
        const double rho = static_cast<double>(k) / static_cast<double>(points - 1);
        const double err = std::abs(duality_check(rho, drift) + flux_oracle(rho, drift));
        if (err > out.max_error) {
            out.max_error = err;
            out.worst_rho = rho;
        }
    }
    return out;
}

namespace {

// Cells on [lo, hi] cut at the profile's breakpoints, each split further.
std::vector<std::pair<double, double>> cells(const Profile& u0, double lo, double hi, std::size_t sub) {
    std::vector<double> cuts{lo};
    for (double b : u0.breakpoints()) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::vector<std::pair<double, double>> out;
    sub = std::max<std::size_t>(sub, 1);
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        const double w = (cuts[k] - cuts[k - 1]) / static_cast<double>(sub);
        for (std::size_t s = 0; s < sub; ++s) {
            const double a = cuts[k - 1] + w * static_cast<double>(s);
            const double b = s + 1 == sub ? cuts[k] : a + w;
            out.emplace_back(a, b);
        }
    }
    return out;
}

}  // namespace

double hopf_lax_height(const Profile& u0, double t, double x, double drift, const VariationalOptions& opts) {
    if (!(t > 0.0)) throw ArgumentError("hopf_lax_height: t must be positive");
    auto objective = [&](double y) { return u0(y) + t * g_oracle((x - y) / t, drift); };
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : cells(u0, x - drift * t, x + drift * t, opts.sub_cells)) {
        best = std::max(best, numerics::golden_maximize(objective, a, b, opts.vtol).value);
    }
    return best;
}

HammersleyHopfLax hopf_lax_hammersley(const Profile& u0, double t, double x, const VariationalOptions& opts) {
    if (!(t > 0.0)) throw ArgumentError("hopf_lax_hammersley: t must be positive");
    const double c = u0.tail_curvature();
    const double a = 1.0 / (4.0 * t) - c;
    if (!(a > 0.0)) {
        throw DomainError("hopf_lax_hammersley: the profile's left tail makes the infimum -infinity");
    }
    // Beyond distance R from x the objective exceeds its value at y = x.
    const double L = std::max(0.0, u0.max_slope());
    const double e = std::max(0.0, u0.breakpoints().front() - x);
    const double b = L + 2.0 * c * e;
    const double R = (b + std::sqrt(b * b + 4.0 * a * c * e * e)) / (2.0 * a) + 1.0;

    auto objective = [&](double y) { return u0(y) + (x - y) * (x - y) / (4.0 * t); };
    std::vector<numerics::Extremum> found;
    for (const auto& [lo, hi] : cells(u0, x - R, x, opts.sub_cells)) {
        found.push_back(numerics::golden_minimize(objective, lo, hi, opts.vtol));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : found) best = std::min(best, f.value);

    // Keep near-optimal local minima, then merge those closer than the gap.
    const double h = 1e-6;
    std::vector<numerics::Extremum> keep;
    for (const auto& f : found) {
        if (f.value > best + opts.value_tol) continue;
        const double slack = 1e-12 * (1.0 + std::abs(f.value));
        const bool left_ok = objective(f.x - h) >= f.value - slack;
        const bool right_ok = f.x + h > x || objective(f.x + h) >= f.value - slack;
        if (left_ok && right_ok) keep.push_back(f);
    }
    if (keep.empty()) {
        keep.push_back(*std::min_element(found.begin(), found.end(),
                                         [](const auto& p, const auto& q) { return p.value < q.value; }));
    }
    std::sort(keep.begin(), keep.end(), [](const auto& p, const auto& q) { return p.x < q.x; });
    HammersleyHopfLax out;
    out.value = best;
    numerics::Extremum rep = keep.front();
    for (std::size_t k = 1; k < keep.size(); ++k) {
        if (keep[k].x - keep[k - 1].x > opts.cluster_gap) {
            out.minimizers.points.push_back(rep.x);
            rep = keep[k];
        } else if (keep[k].value < rep.value) {
            rep = keep[k];
        }
    }
    out.minimizers.points.push_back(rep.x);
    return out;
}

bool shock_detect(const Profile& u0, double t, double x, double tol, const VariationalOptions& opts) {
    return hopf_lax_hammersley(u0, t, x, opts).minimizers.diameter() > tol;
}

double SampledProfile::operator()(double y) const {
    if (ys.empty() || ys.size() != values.size()) throw ArgumentError("SampledProfile: empty or mismatched samples");
    if (y <= ys.front()) return values.front();
    if (y >= ys.back()) return values.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
    const double w = (y - ys[k - 1]) / (ys[k] - ys[k - 1]);
    return values[k - 1] + w * (values[k] - values[k - 1]);
}

double fluctuation_transform(const SampledProfile& zeta0, const MinimizerSet& minimizers) {
    if (minimizers.points.empty()) throw ArgumentError("fluctuation_transform: empty minimizer set");
    double v = std::numeric_limits<double>::infinity();
    for (double y : minimizers.points) v = std::min(v, zeta0(y));
    return v;
}

exclusion::HeightState tasep_initial_from_profile(const Profile& u0, double n, std::int64_t lo, std::int64_t hi,
                                                  randkit::Stream& stream) {
    if (!(n > 0.0)) throw ArgumentError("tasep_initial_from_profile: n must be positive");
    if (lo > 0 || hi < 0 || hi - lo < 2) throw ArgumentError("tasep_initial_from_profile: window must contain 0");
    std::vector<std::int64_t> eta(static_cast<std::size_t>(hi - lo));
    for (std::int64_t i = lo + 1; i <= hi; ++i) {
        const double p = n * (u0(static_cast<double>(i) / n) - u0(static_cast<double>(i - 1) / n));
        if (p < -1e-9 || p > 1.0 + 1e-9) throw ArgumentError("tasep_initial_from_profile: profile slope outside [0,1]");
        eta[static_cast<std::size_t>(i - lo - 1)] = stream.bernoulli(p) ? 1 : 0;
    }
    const auto h0 = static_cast<std::int64_t>(std::floor(n * u0(0.0)));
    return exclusion::init_from_increments(1, lo, eta, 0, h0);
}

hammersley::HammersleyState hammersley_initial_from_profile(const Profile& u0, double n, std::int64_t i_min,
                                                            std::int64_t i_max) {
    if (!(n > 0.0) || i_max < i_min) throw ArgumentError("hammersley_initial_from_profile: bad scale or labels");
    hammersley::HammersleyState st;
    st.i_min = i_min;
    for (std::int64_t i = i_min; i <= i_max; ++i) st.z.push_back(n * u0(static_cast<double>(i) / n));
    if (!st.sorted()) throw ArgumentError("hammersley_initial_from_profile: profile must be nondecreasing");
    return st;
}

HydroComparison hydro_compare(HydroModel model, const Profile& u0, double n, double t, std::span<const double> x_grid,
                              std::size_t reps, std::uint64_t seed, unsigned threads) {
    if (!(n >= 1.0) || !(t >= 0.0) || x_grid.empty() || reps < 1) {
        throw ArgumentError("hydro_compare: need n >= 1, t >= 0, a nonempty grid and replicates");
    }
    std::vector<std::int64_t> sites;
    for (double x : x_grid) sites.push_back(static_cast<std::int64_t>(std::floor(n * x)));
    const auto [smin, smax] = std::minmax_element(sites.begin(), sites.end());
    const double horizon = n * t;

    HydroComparison out;
    std::vector<std::vector<double>> per_rep;
    if (model == HydroModel::TasepWedge) {
        if (!u0.exclusion_admissible()) throw ArgumentError("hydro_compare: exclusion profiles need slopes in [0,1]");
        const auto margin = exclusion::influence_margin(exclusion::AsymmetryParams::tasep(), horizon);
        const std::int64_t lo = std::min<std::int64_t>(*smin, 0) - margin;
        const std::int64_t hi = std::max<std::int64_t>(*smax, 0) + margin;
        auto results = run_replicates(reps, threads, [&](std::size_t rep) {
            randkit::Stream init({seed, rep, randkit::purpose::kInitial});
            const auto h0 = tasep_initial_from_profile(u0, n, lo, hi, init);
            exclusion::EvolveOptions opts;
            opts.observe_sites = sites;
            const auto tr = exclusion::evolve(h0, exclusion::AsymmetryParams::tasep(), horizon,
                                              {seed, rep, randkit::purpose::kClocks}, opts);
            std::vector<double> v;
            for (auto s : sites) v.push_back(static_cast<double>(tr.final_state.at(s)) / n);
            return std::make_pair(v, tr.boundary_influenced);
        });
        for (auto& [v, flag] : results) {
            per_rep.push_back(std::move(v));
            out.boundary_flags += flag ? 1 : 0;
        }
    } else {
        if (!u0.nondecreasing()) throw ArgumentError("hydro_compare: Hammersley profiles must be nondecreasing");
        const double xmin = static_cast<double>(*smin) / n;
        const double pad = 2.0 * t * std::max(0.0, u0.max_slope()) + 0.25;
        const auto i_min = static_cast<std::int64_t>(std::floor(n * (xmin - pad))) - 20;
        const auto initial = hammersley_initial_from_profile(u0, n, i_min, *smax);
        const randkit::Rect rect{initial.z.front(), 0.0, initial.z.back(), std::max(horizon, 1e-12)};
        auto results = run_replicates(reps, threads, [&](std::size_t rep) {
            const auto pts = randkit::sample_poisson_points(rect, 1.0, {seed, rep, randkit::purpose::kPoisson});
            const auto run = hammersley::evolve_hammersley(initial, pts, horizon);
            std::vector<double> v;
            for (auto s : sites) v.push_back(run.final_state.at(s) / n);
            return v;
        });
        per_rep = std::move(results);
    }

    for (std::size_t k = 0; k < x_grid.size(); ++k) {
        HydroRow row;
        row.t = t;
        row.x = x_grid[k];
        row.n = n;
        double s = 0.0;
        for (const auto& v : per_rep) s += v[k];
        row.u_simulated = s / static_cast<double>(per_rep.size());
        if (t == 0.0) row.u_hopf_lax = u0(x_grid[k]);
        else if (model == HydroModel::TasepWedge) row.u_hopf_lax = hopf_lax_height(u0, t, x_grid[k]);
        else row.u_hopf_lax = hopf_lax_hammersley(u0, t, x_grid[k]).value;
        row.error = std::abs(row.u_simulated - row.u_hopf_lax);
        out.max_error = std::max(out.max_error, row.error);
        out.rows.push_back(row);
    }
    return out;
}

void write_hydro_csv(std::ostream& out, std::span<const HydroRow> rows) {
    out << "t,x,u_hopf_lax,u_simulated,n,error\n";
    out.precision(12);
    for (const auto& r : rows) {
        out << r.t << ',' << r.x << ',' << r.u_hopf_lax << ',' << r.u_simulated << ',' << r.n << ',' << r.error << '\n';
    }
}

}  // namespace growth::hydro

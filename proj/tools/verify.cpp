#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "growth/errors.hpp"
#include "growth/exclusion.hpp"
#include "growth/hammersley.hpp"
#include "growth/hydro.hpp"
#include "growth/ldp.hpp"
#include "growth/lpp.hpp"
#include "growth/parallel.hpp"
#include "growth/rap.hpp"
#include "growth/stats.hpp"
#include "oracles/oracles.hpp"

namespace growth::verify {

namespace {

using randkit::SeedSpec;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string interval(const Interval& i) { return "[" + fmt(i.lo) + ", " + fmt(i.hi) + "]"; }

void shape(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "corner growth shape";
    const auto est = lpp::estimate_shape(randkit::Exponential{1.0}, 1.0, 1.0, th.shape_n, th.shape_reps,
                                         th.shape_seed, threads);
    r.estimates = {{"mean_G_over_n", est.mean}};
    r.std_errors = {{"mean_G_over_n", est.std_error}};
    r.pass = th.shape.contains(est.mean);
    r.detail = "G(n,n)/n=" + fmt(est.mean) + " in " + interval(th.shape);
}

void wedge(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "wedge TASEP shape";
    const auto params = exclusion::AsymmetryParams::tasep();
    const auto W = exclusion::influence_margin(params, th.wedge_t) + 2;
    struct One {
        double value = 0.0;
        bool flagged = false;
    };
    const auto runs = run_replicates(th.wedge_reps, threads, [&](std::size_t rep) {
        exclusion::EvolveOptions opts;
        opts.observe_sites = {0};
        const auto tr = exclusion::evolve(exclusion::init_wedge(W), params, th.wedge_t,
                                          {th.wedge_seed, rep, randkit::purpose::kClocks}, opts);
        return One{static_cast<double>(tr.final_state.at(0)) / th.wedge_t, tr.boundary_influenced};
    });
    std::vector<double> xs;
    std::size_t flags = 0;
    for (const auto& o : runs) {
        xs.push_back(o.value);
        flags += o.flagged;
    }
    const auto m = stats::mean_with_stderr(xs);
    r.estimates = {{"mean_w0_over_t", m.mean}, {"boundary_flags", static_cast<double>(flags)}};
    r.std_errors = {{"mean_w0_over_t", m.std_error}};
    r.pass = th.wedge.contains(m.mean) && flags == 0;
    r.detail = "w_0(t)/t=" + fmt(m.mean) + " in " + interval(th.wedge) + ", boundary flags " + std::to_string(flags);
}

void current(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "stationary current";
    const double v[] = {0.0}, t[] = {th.current_t};
    const auto s = exclusion::stationary_heights(th.current_rho, exclusion::AsymmetryParams::tasep(), v, t,
                                                 th.current_reps, th.current_seed, threads);
    std::vector<double> xs;
    for (const auto& rep : s.samples) xs.push_back(rep[0][0] / th.current_t);
    const auto m = stats::mean_with_stderr(xs);
    r.estimates = {{"mean_h0_over_t", m.mean}, {"boundary_flags", static_cast<double>(s.boundary_flags)}};
    r.std_errors = {{"mean_h0_over_t", m.std_error}};
    r.pass = th.current.contains(m.mean) && s.boundary_flags == 0;
    r.detail = "h_0(t)/t=" + fmt(m.mean) + " in " + interval(th.current);
}

void drift(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "second-class drift";
    const auto d = exclusion::second_class_drift(th.drift_rho, exclusion::AsymmetryParams::tasep(), th.drift_t,
                                                 th.drift_reps, th.drift_seed, threads);
    r.estimates = {{"mean_Q_over_t", d.mean}, {"discarded", static_cast<double>(d.discarded)}};
    r.std_errors = {{"mean_Q_over_t", d.std_error}};
    r.pass = th.drift.contains(d.mean);
    r.detail = "Q(t)/t=" + fmt(d.mean) + " in " + interval(th.drift) + ", " + std::to_string(d.discarded) +
               " runs discarded";
}

void identity(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "variance-coupling identity";
    const auto id = exclusion::variance_identity_check(th.identity_rho, exclusion::AsymmetryParams::tasep(),
                                                       th.identity_v, th.identity_t, th.identity_reps,
                                                       th.identity_seed, threads);
    r.estimates = {{"lhs", id.lhs}, {"rhs", id.rhs}, {"ratio", id.ratio}};
    r.std_errors = {{"lhs", id.lhs_se}, {"rhs", id.rhs_se}, {"ratio", id.ratio_se}};
    r.pass = th.identity.contains(id.ratio);
    r.detail = "Var h=" + fmt(id.lhs) + ", rho(1-rho)E|Q|=" + fmt(id.rhs) + ", ratio=" + fmt(id.ratio) + " in " +
               interval(th.identity);
}

void kpz(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "KPZ exponent";
    const auto params = exclusion::AsymmetryParams::tasep();
    const double v[] = {exclusion::characteristic_speed(th.kpz_rho, params), th.kpz_control_velocity};
    const auto fits = exclusion::characteristic_variance_exponent(th.kpz_rho, params, th.kpz_times, v, th.kpz_reps,
                                                                  th.kpz_seed, threads);
    r.estimates = {{"slope", fits[0].slope}, {"control_slope", fits[1].slope}};
    r.std_errors = {{"slope", fits[0].slope_se}, {"control_slope", fits[1].slope_se}};
    r.pass = th.kpz.contains(fits[0].slope) && th.kpz_control.contains(fits[1].slope);
    r.detail = "slope=" + fmt(fits[0].slope) + " in " + interval(th.kpz) + ", control slope=" +
               fmt(fits[1].slope) + " in " + interval(th.kpz_control);
}

void ulam(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "Ulam constant";
    const auto est = hammersley::ulam_estimate(th.ulam_n, th.ulam_reps, th.ulam_seed, threads);
    r.estimates = {{"mean_L_over_n", est.mean}};
    r.std_errors = {{"mean_L_over_n", est.std_error}};
    r.pass = th.ulam.contains(est.mean);
    r.detail = "L_n/n=" + fmt(est.mean) + " in " + interval(th.ulam);
}

hammersley::HammersleyState random_particles(std::size_t count, double lo, double hi, randkit::Stream& s) {
    hammersley::HammersleyState st;
    st.i_min = -static_cast<std::int64_t>(count / 2);
    for (std::size_t k = 0; k < count; ++k) st.z.push_back(lo + (hi - lo) * s.uniform());
    std::sort(st.z.begin(), st.z.end());
    return st;
}

void exact(CriterionResult& r, const Thresholds& th, unsigned) {
    r.name = "exact-equality oracles";
    const auto seed = th.exact_seed;
    std::vector<std::pair<std::string, std::uint64_t>> failures;
    auto tally = [&](const std::string& what, std::uint64_t bad, std::uint64_t total) {
        failures.emplace_back(what, bad);
        r.estimates.emplace_back(what + "_mismatches", static_cast<double>(bad));
        r.estimates.emplace_back(what + "_checks", static_cast<double>(total));
    };

    {  // recursion vs exhaustive enumeration
        std::uint64_t bad = 0, total = 0;
        const auto m = static_cast<std::int64_t>(th.exact_brute_max);
        for (std::uint64_t rep = 0; rep < 3; ++rep) {
            for (const randkit::WeightLaw law : {randkit::WeightLaw{randkit::Exponential{1.0}},
                                                 randkit::WeightLaw{randkit::Geometric{0.4}}}) {
                const randkit::WeightField f({seed, rep, randkit::purpose::kWeights}, law);
                const auto grid = lpp::passage_times_G(f, m, m);
                const lpp::WeightFn y = [&f](std::int64_t i, std::int64_t j) { return f.at(i, j); };
                for (std::int64_t k = 1; k <= m; ++k) {
                    for (std::int64_t l = 1; l <= m; ++l) {
                        bad += grid.at(k, l) != oracles::lpp_brute_force(y, 1, 1, k, l);
                        ++total;
                    }
                }
            }
        }
        tally("brute_force", bad, total);
    }
    {  // superadditivity
        std::uint64_t bad = 0;
        randkit::Stream pick(SeedSpec{seed, 0, randkit::purpose::kControl});
        for (std::uint64_t rep = 0; rep < th.exact_superadditive; ++rep) {
            const randkit::WeightField f({seed, 1000 + rep, randkit::purpose::kWeights}, randkit::Exponential{1.0});
            const auto m = 5 + static_cast<std::int64_t>(pick.below(20));
            const auto n = 5 + static_cast<std::int64_t>(pick.below(20));
            const auto k = static_cast<std::int64_t>(pick.below(static_cast<std::uint64_t>(m + 1)));
            const auto l = static_cast<std::int64_t>(pick.below(static_cast<std::uint64_t>(n + 1)));
            const double g = (k >= 1 && l >= 1) ? lpp::passage_time_G(f, k, l) : 0.0;
            bad += g + lpp::passage_between(f, {k, l}, {m, n}) > lpp::passage_time_G(f, m, n);
        }
        tally("superadditivity", bad, th.exact_superadditive);
    }
    {  // H = G under the relabeling, shared weights
        std::uint64_t bad = 0, total = 0;
        for (std::uint64_t rep = 0; rep < th.exact_bijection; ++rep) {
            const randkit::WeightField quad({seed, 2000 + rep, randkit::purpose::kWeights}, randkit::Exponential{1.0});
            const auto H = lpp::passage_times_H(quad.reoriented(randkit::Orientation::TasepWedge), {-30, 15, -30, -1});
            const auto G = lpp::passage_times_G(quad, 60, 30);
            for (std::int64_t l = -30; l <= -1; ++l) {
                for (std::int64_t k = l + 1; k <= 15; ++k) {
                    bad += H.at(k, l) != G.at(k - l, -l);
                    ++total;
                }
            }
        }
        tally("bijection", bad, total);
    }
    {  // envelope coupling
        std::uint64_t bad = 0;
        for (std::uint64_t rep = 0; rep < th.exact_envelope; ++rep) {
            randkit::Stream init(SeedSpec{seed, 3000 + rep, randkit::purpose::kInitial});
            const auto h0 = rep == 0 ? exclusion::init_wedge(30) : exclusion::init_bernoulli(40, 0.5, init);
            bad += !exclusion::envelope_coupled_run(h0, 20.0, {seed, 3000 + rep, 0}).equal();
        }
        tally("envelope", bad, th.exact_envelope);
    }
    {  // Hammersley variational formula
        std::uint64_t bad = 0, total = 0;
        for (std::uint64_t rep = 0; rep < th.exact_hammersley; ++rep) {
            randkit::Stream s(SeedSpec{seed, 4000 + rep, randkit::purpose::kInitial});
            const auto init = random_particles(20, 1.0, 11.0, s);
            const randkit::Rect rect{0.0, 0.0, 12.0, 100.0 / 12.0};
            const auto pts = randkit::sample_poisson_points(rect, 1.0, {seed, 4000 + rep, randkit::purpose::kPoisson});
            for (std::int64_t i = init.i_min; i <= init.i_max(); ++i) {
                bad += !hammersley::check_variational(init, pts, rect.t, i).equal;
                ++total;
            }
        }
        tally("hammersley_variational", bad, total);
    }
    {  // RAP iteration vs quenched walk
        std::uint64_t bad = 0, total = 0;
        double worst = 0.0;
        for (std::uint64_t rep = 0; rep < th.exact_rap; ++rep) {
            const auto scheme = rep % 2 ? rap::WeightScheme::two_point_beta(2.0, 0.5) : rap::WeightScheme::uniform_dirichlet(1);
            randkit::Stream s(SeedSpec{seed, 5000 + rep, randkit::purpose::kInitial});
            rap::RapState h0{-20, {}, 0};
            double h = 0.0;
            for (int i = 0; i < 40; ++i) h0.heights.push_back(h += 2.0 * s.uniform() - 0.5);
            const rap::Environment env(scheme, {seed, 5000 + rep, randkit::purpose::kEnvironment});
            const auto ht = rap::rap_evolve(h0, env, 3);
            for (std::int64_t i = ht.lo; i <= ht.hi(); ++i) {
                const double d = std::abs(rap::rwre_quenched_height(h0, env, i, 3) - ht.at(i));
                worst = std::max(worst, d);
                bad += d > th.exact_rap_tol;
                ++total;
            }
        }
        tally("rap_rwre", bad, total);
        r.estimates.emplace_back("rap_rwre_max_difference", worst);
    }
    {  // patience sorting vs quadratic DP
        std::uint64_t bad = 0;
        for (std::uint64_t rep = 0; rep < th.exact_lis; ++rep) {
            const double side = rep % 5 == 0 ? 40.0 : 12.0;
            const auto pts = randkit::sample_poisson_points({0, 0, side, side}, 1.0,
                                                            {seed, 6000 + rep, randkit::purpose::kPoisson});
            bad += hammersley::lis_count(pts) != oracles::lis_quadratic(pts.points);
        }
        tally("lis", bad, th.exact_lis);
    }

    r.pass = true;
    r.detail.clear();
    for (const auto& [what, bad] : failures) {
        if (bad > 0) {
            r.pass = false;
            r.detail += (r.detail.empty() ? "" : ", ") + what + " mismatches " + std::to_string(bad);
        }
    }
    if (r.pass) r.detail = "all " + std::to_string(failures.size()) + " oracle families agree";
}

void analytic(CriterionResult& r, const Thresholds& th, unsigned) {
    r.name = "analytic evaluators";
    const double duality = hydro::duality_sweep(21).max_error;
    const double i2 = std::abs(ldp::I_ulam_upper(2.0));
    const double i25 = std::abs(ldp::I_ulam_upper(2.5) - (5.0 * std::numbers::ln2 - 3.0));
    const double u2 = std::abs(ldp::U_ulam_lower(2.0));
    const double u0 = std::abs(ldp::U_ulam_lower(0.0) - 1.0);
    const double legendre = ldp::rw_legendre_check(0.3, 41);
    const double h = 1e-5;
    double du = 0.0, di = 0.0;
    for (int k = 0; k <= 36; ++k) {
        const double x = 0.1 + 0.05 * k;
        const double fd = (ldp::U_ulam_lower(x + h) - ldp::U_ulam_lower(x - h)) / (2 * h);
        du = std::max(du, std::abs(fd + ldp::R2_poisson(x)));
    }
    for (int k = 0; k <= 79; ++k) {
        const double x = 2.05 + 0.05 * k;
        const double fd = (ldp::I_ulam_upper(x + h) - ldp::I_ulam_upper(x - h)) / (2 * h);
        di = std::max(di, std::abs(fd - 2.0 * std::acosh(x / 2.0)));
    }
    r.estimates = {{"duality_max_error", duality}, {"I2_error", i2},          {"I25_error", i25},
                   {"U2_error", u2},               {"U0_error", u0},          {"legendre_max_error", legendre},
                   {"dU_plus_R2_max", du},         {"dI_minus_acosh_max", di}};
    r.pass = duality <= th.duality_tol && i2 <= th.rate_tol && i25 <= th.rate_tol && u2 <= th.rate_tol &&
             u0 <= th.rate_tol && legendre <= th.legendre_tol && du <= th.derivative_tol && di <= th.derivative_tol;
    r.detail = "duality " + fmt(duality) + ", I " + fmt(std::max(i2, i25)) + ", U " + fmt(std::max(u2, u0)) +
               ", Legendre " + fmt(legendre) + ", U' " + fmt(du) + ", I' " + fmt(di);
}

void tails(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "LDP tails";
    bool lower_ok = th.lower_tail_ns.size() == th.lower_tail_reps.size();
    std::string detail = "lower x=0:";
    for (std::size_t k = 0; k < th.lower_tail_ns.size() && lower_ok; ++k) {
        const double n = th.lower_tail_ns[k];
        const auto est = ldp::mc_tail(ldp::Tail::UlamLower, n, 0.0, static_cast<std::uint64_t>(th.lower_tail_reps[k]),
                                      th.tail_seed, threads);
        const std::string key = "lower_n" + fmt(n);
        if (!est.value) {
            lower_ok = false;
            detail += " n=" + fmt(n) + " no estimate";
            continue;
        }
        r.estimates.emplace_back(key, *est.value);
        r.std_errors.emplace_back(key, est.std_error);
        lower_ok = lower_ok && std::abs(*est.value + 1.0) <= th.lower_tail_sigmas * est.std_error;
        detail += " " + fmt(*est.value) + "+-" + fmt(est.std_error);
    }

    bool upper_ok = th.upper_tail_ns.size() == th.upper_tail_reps.size() && !th.upper_tail_ns.empty();
    std::vector<double> rates;
    detail += "; upper x=" + fmt(th.upper_tail_x) + " -log P/n:";
    for (std::size_t k = 0; k < th.upper_tail_ns.size() && upper_ok; ++k) {
        const double n = th.upper_tail_ns[k];
        const auto est = ldp::mc_tail(ldp::Tail::UlamUpper, n, th.upper_tail_x,
                                      static_cast<std::uint64_t>(th.upper_tail_reps[k]), th.tail_seed + 1, threads);
        if (!est.value) {
            upper_ok = false;
            detail += " n=" + fmt(n) + " no estimate";
            continue;
        }
        rates.push_back(-*est.value);
        r.estimates.emplace_back("upper_rate_n" + fmt(n), -*est.value);
        r.std_errors.emplace_back("upper_rate_n" + fmt(n), est.std_error);
        detail += " " + fmt(-*est.value);
    }
    const bool increasing = std::is_sorted(rates.begin(), rates.end(), std::less_equal<>());
    upper_ok = upper_ok && increasing && th.upper_tail_last.contains(rates.back());
    r.estimates.emplace_back("I_limit", ldp::I_ulam_upper(th.upper_tail_x));
    detail += " (limit " + fmt(ldp::I_ulam_upper(th.upper_tail_x)) + "; required increasing, last in " +
              interval(th.upper_tail_last) + ")";
    r.pass = lower_ok && upper_ok;
    r.detail = std::string(lower_ok ? "lower ok" : "lower FAIL") + ", " + (upper_ok ? "upper ok" : "upper FAIL") +
               "; " + detail;
}

void hydro_limit(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "hydrodynamic comparison";
    const auto fine = hydro::hydro_compare(hydro::HydroModel::TasepWedge, hydro::Profile::wedge(), th.hydro_n,
                                           th.hydro_t, th.hydro_grid, th.hydro_reps, th.hydro_seed, threads);
    const auto coarse = hydro::hydro_compare(hydro::HydroModel::TasepWedge, hydro::Profile::wedge(), th.hydro_coarse_n,
                                             th.hydro_t, th.hydro_grid, th.hydro_reps, th.hydro_seed, threads);
    r.estimates = {{"max_error_fine", fine.max_error},
                   {"max_error_coarse", coarse.max_error},
                   {"boundary_flags", static_cast<double>(fine.boundary_flags + coarse.boundary_flags)}};
    r.pass = fine.max_error <= th.hydro_max_error && fine.max_error < coarse.max_error;
    r.detail = "max error n=" + fmt(th.hydro_n) + ": " + fmt(fine.max_error) + " (<= " + fmt(th.hydro_max_error) +
               "), n=" + fmt(th.hydro_coarse_n) + ": " + fmt(coarse.max_error);
}

void rap_scaling(CriterionResult& r, const Thresholds& th, unsigned threads) {
    r.name = "RAP scaling";
    const auto sc = rap::z_variance_scaling(rap::WeightScheme::two_point_beta(th.rap_alpha, th.rap_beta),
                                            rap::IncrementLaw::constant(th.rap_rho, th.rap_variance), th.rap_ns, 1.0,
                                            th.rap_reps, th.rap_seed, threads);
    r.estimates = {{"slope", sc.slope}};
    r.std_errors = {{"slope", sc.slope_stderr}};
    r.pass = th.rap.contains(sc.slope);
    r.detail = "slope of log Var Z_n(1,0)=" + fmt(sc.slope) + " in " + interval(th.rap);
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "full") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    if (suite == "deterministic") return {8, 9};
    if (suite == "statistical") return {1, 2, 3, 4, 5, 6, 7, 10, 11, 12};
    throw ArgumentError("unknown suite '" + suite + "' (full, deterministic, statistical)");
}

CriterionResult run_criterion(int id, const Thresholds& th, unsigned threads) {
    using Runner = void (*)(CriterionResult&, const Thresholds&, unsigned);
    struct Entry {
        Runner run;
        double minutes;
    };
    const Entry table[] = {{shape, th.shape_minutes},       {wedge, th.wedge_minutes},
                           {current, th.current_minutes},   {drift, th.drift_minutes},
                           {identity, th.identity_minutes}, {kpz, th.kpz_minutes},
                           {ulam, th.ulam_minutes},         {exact, th.exact_minutes},
                           {analytic, th.analytic_minutes}, {tails, th.tail_minutes},
                           {hydro_limit, th.hydro_minutes}, {rap_scaling, th.rap_minutes}};
    if (id < 1 || id > kCriteria) throw ArgumentError("criterion id must be 1..12");
    CriterionResult r;
    r.id = id;
    r.limit_seconds = 60.0 * table[id - 1].minutes;
    const auto start = std::chrono::steady_clock::now();
    table[id - 1].run(r, th, threads);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.limit_seconds) {
        r.pass = false;
        r.detail += "; runtime " + fmt(r.seconds) + " s over the " + fmt(r.limit_seconds) + " s limit";
    }
    return r;
}

std::string format_line(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %s: ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
    char tail[48];
    std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
    return head + r.detail + tail;
}

nlohmann::json to_json(const CriterionResult& r) {
    nlohmann::json est = nlohmann::json::object(), se = nlohmann::json::object();
    for (const auto& [k, v] : r.estimates) est[k] = v;
    for (const auto& [k, v] : r.std_errors) se[k] = v;
    return {{"id", r.id},           {"name", r.name},       {"pass", r.pass},
            {"estimates", est},     {"stderr", se},         {"detail", r.detail},
            {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds}};
}

}  // namespace growth::verify

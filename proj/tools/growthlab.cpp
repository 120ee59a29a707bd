// growthlab: experiments and the acceptance suite from the command line.
// Exit codes: 0 pass, 1 fail or runtime error, 2 usage or invalid config.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "growth/errors.hpp"
#include "growth/exclusion.hpp"
#include "growth/hammersley.hpp"
#include "growth/hydro.hpp"
#include "growth/ldp.hpp"
#include "growth/lpp.hpp"
#include "growth/rap.hpp"
#include "growth/thresholds.hpp"
#include "json.hpp"
#include "verify.hpp"

using namespace growth;
using cli::Config;
using cli::ConfigError;
using nlohmann::json;

namespace {

struct Summary {
    json estimates = json::object();
    json std_errors = json::object();
    bool pass = true;
    json extra = json::object();
};

struct Context {
    const Config& cfg;
    unsigned threads;
    std::string out;  // CSV path, empty for none

    // CSV with the regenerating command line as a comment on the first line.
    template <class Writer>
    void csv(Writer&& write) const {
        if (out.empty()) return;
        std::ofstream f(out);
        if (!f) throw ConfigError("cannot write '" + out + "'");
        f << "# " << cfg.echo() << '\n';
        write(f);
    }
};

using Runner = std::function<Summary(const Context&)>;

struct Command {
    std::string name, help;
    std::vector<std::pair<std::string, std::string>> defaults;
    Runner run;
};

exclusion::AsymmetryParams asymmetry(const Config& c) {
    exclusion::AsymmetryParams p{c.num("p"), c.num("q")};
    if (!(std::abs(p.p + p.q - 1.0) <= 1e-12 && p.p > p.q && p.q >= 0.0)) {
        throw ConfigError("config keys p, q: need p + q = 1 and p > q >= 0");
    }
    return p;
}

Summary run_shape(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& model = c.choice("model", {"corner", "ulam"});
    const double n = c.positive("n");
    const auto reps = c.at_least("reps", 1);
    const auto seed = c.count("seed");
    Summary s;
    if (model == "ulam") {
        const auto est = hammersley::ulam_estimate(n, reps, seed, ctx.threads);
        s.estimates["mean_L_over_n"] = est.mean;
        s.std_errors["mean_L_over_n"] = est.std_error;
        ctx.csv([&](std::ostream& f) {
            std::vector<hammersley::UlamRow> rows;
            for (std::size_t r = 0; r < est.counts.size(); ++r) rows.push_back({n, r, est.counts[r], seed});
            hammersley::write_ulam_csv(f, rows);
        });
        return s;
    }
    const auto& law_name = c.choice("law", {"exp", "geom"});
    const randkit::WeightLaw law = law_name == "exp" ? randkit::WeightLaw{randkit::Exponential{c.positive("rate")}}
                                                     : randkit::WeightLaw{randkit::Geometric{c.num_in("geom_q", 1e-9, 1.0)}};
    const double x = c.positive("x"), y = c.positive("y");
    const auto est = lpp::estimate_shape(law, x, y, n, reps, seed, ctx.threads);
    s.estimates["mean_G_over_n"] = est.mean;
    s.std_errors["mean_G_over_n"] = est.std_error;
    ctx.csv([&](std::ostream& f) {
        lpp::ShapeRow row;
        row.model = "corner";
        row.law = randkit::law_name(law);
        row.x = x;
        row.y = y;
        row.n = n;
        row.replicates = reps;
        row.mean = est.mean;
        row.std_error = est.std_error;
        row.seed = seed;
        lpp::write_shape_csv(f, {row});
    });
    return s;
}

Summary run_simulate(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& model = c.choice("model", {"tasep", "hammersley"});
    const double t = c.positive("t");
    const auto reps = c.at_least("reps", 1);
    const auto seed = c.count("seed");
    const auto snaps = c.at_least("snapshots", 1);
    std::vector<double> times;
    for (std::uint64_t k = 1; k <= snaps; ++k) times.push_back(t * static_cast<double>(k) / static_cast<double>(snaps));
    Summary s;

    if (model == "tasep") {
        const auto params = asymmetry(c);
        const auto& init = c.choice("init", {"wedge", "bernoulli"});
        const double rho = c.num_in("rho", 0.0, 1.0);
        std::vector<std::int64_t> sites;
        std::int64_t reach = 0;
        for (double v : c.list("sites")) {
            sites.push_back(static_cast<std::int64_t>(v));
            reach = std::max<std::int64_t>(reach, std::abs(sites.back()));
        }
        if (sites.empty()) throw ConfigError("config key 'sites' must list at least one site");
        auto W = static_cast<std::int64_t>(c.count("width"));
        if (W == 0) W = reach + exclusion::influence_margin(params, t) + 2;
        std::vector<exclusion::HeightRow> rows;
        std::size_t flags = 0;
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            randkit::Stream is(randkit::SeedSpec{seed, rep, randkit::purpose::kInitial});
            const auto h0 = init == "wedge" ? exclusion::init_wedge(W) : exclusion::init_bernoulli(W, rho, is);
            exclusion::EvolveOptions opts;
            opts.snapshot_times = times;
            opts.observe_sites = sites;
            const auto tr = exclusion::evolve(h0, params, t, {seed, rep, randkit::purpose::kClocks}, opts);
            flags += tr.boundary_influenced;
            for (auto site : sites) rows.push_back({0.0, site, static_cast<double>(h0.at(site)), rep, seed});
            for (const auto& snap : tr.snapshots) {
                for (std::size_t k = 0; k < sites.size(); ++k) {
                    rows.push_back({snap.time, sites[k], static_cast<double>(snap.values[k]), rep, seed});
                }
            }
        }
        s.estimates["half_width"] = W;
        s.estimates["boundary_flags"] = flags;
        s.pass = flags == 0;
        ctx.csv([&](std::ostream& f) { exclusion::write_height_csv(f, rows); });
        return s;
    }

    const double rho = c.positive("rho");
    const double L = c.positive("length");
    std::vector<hammersley::ParticleRow> rows;
    std::uint64_t boundary = 0;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
        randkit::Stream is(randkit::SeedSpec{seed, rep, randkit::purpose::kInitial});
        hammersley::HammersleyState st;
        for (double z = randkit::sample_exponential(rho, is); z <= L; z += randkit::sample_exponential(rho, is)) {
            st.z.push_back(z);
        }
        const auto pts = randkit::sample_poisson_points({0.0, 0.0, L, t}, 1.0, {seed, rep, randkit::purpose::kPoisson});
        auto emit = [&](const hammersley::HammersleyState& h, double time) {
            for (std::int64_t i = h.i_min; i <= h.i_max(); ++i) rows.push_back({time, i, h.at(i), rep});
        };
        emit(st, 0.0);
        double prev = 0.0;
        for (double time : times) {
            const auto run = hammersley::evolve_hammersley(st, pts, time - prev);
            boundary += run.boundary_events;
            st = run.final_state;
            st.time = time;
            prev = time;
            emit(st, time);
        }
    }
    s.estimates["boundary_events"] = boundary;
    ctx.csv([&](std::ostream& f) { hammersley::write_particle_csv(f, rows); });
    return s;
}

rap::WeightScheme weight_scheme(const Config& c) {
    const auto& kind = c.choice("scheme", {"beta", "dirichlet"});
    if (kind == "beta") return rap::WeightScheme::two_point_beta(c.positive("alpha"), c.positive("beta"));
    return rap::WeightScheme::uniform_dirichlet(static_cast<int>(c.at_least("M", 1)));
}

Summary run_fluct(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& model = c.choice("model", {"tasep", "rap"});
    const auto reps = c.at_least("reps", 2);
    const auto seed = c.count("seed");
    Summary s;
    if (model == "rap") {
        const auto ns = c.list("ns");
        const auto sc = rap::z_variance_scaling(weight_scheme(c),
                                                rap::IncrementLaw::constant(c.num("rho"), c.num_in("variance", 0, 1e300)),
                                                ns, c.positive("t"), reps, seed, ctx.threads);
        s.estimates["slope"] = sc.slope;
        s.std_errors["slope"] = sc.slope_stderr;
        ctx.csv([&](std::ostream& f) {
            f << "n,variance,variance_stderr\n";
            for (std::size_t k = 0; k < sc.ns.size(); ++k) {
                f << sc.ns[k] << ',' << sc.variances[k] << ',' << sc.variance_stderr[k] << '\n';
            }
        });
        return s;
    }
    const auto params = asymmetry(c);
    const double rho = c.num_in("rho", 0.0, 1.0);
    auto vs = c.list("velocities");
    if (vs.empty()) vs.push_back(exclusion::characteristic_speed(rho, params));
    const auto fits = exclusion::characteristic_variance_exponent(rho, params, c.list("times"), vs, reps, seed,
                                                                  ctx.threads);
    for (const auto& fit : fits) {
        const std::string key = "slope_v" + std::to_string(fit.velocity);
        s.estimates[key] = fit.slope;
        s.std_errors[key] = fit.slope_se;
    }
    ctx.csv([&](std::ostream& f) {
        f << "velocity,t,variance\n";
        for (const auto& fit : fits) {
            for (std::size_t k = 0; k < fit.times.size(); ++k) {
                f << fit.velocity << ',' << fit.times[k] << ',' << fit.variances[k] << '\n';
            }
        }
    });
    return s;
}

Summary run_coupling(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& check = c.choice("check", {"second_class", "envelope", "variational", "identity"});
    const auto reps = c.at_least("reps", 1);
    const auto seed = c.count("seed");
    const double t = c.positive("t");
    Summary s;
    if (check == "second_class") {
        const auto d = exclusion::second_class_drift(c.num_in("rho", 0.0, 1.0), asymmetry(c), t, reps, seed,
                                                     ctx.threads);
        s.estimates["mean_Q_over_t"] = d.mean;
        s.std_errors["mean_Q_over_t"] = d.std_error;
        s.estimates["discarded"] = d.discarded;
        s.pass = d.used > 0;
        ctx.csv([&](std::ostream& f) {
            std::vector<exclusion::SecondClassRow> rows;
            for (std::size_t r = 0; r < d.positions.size(); ++r) {
                rows.push_back({t, static_cast<std::int64_t>(d.positions[r]), r, seed});
            }
            exclusion::write_second_class_csv(f, rows);
        });
    } else if (check == "identity") {
        const auto id = exclusion::variance_identity_check(c.num_in("rho", 0.0, 1.0), asymmetry(c), c.num("v"), t,
                                                           reps, seed, ctx.threads);
        s.estimates["lhs"] = id.lhs;
        s.estimates["rhs"] = id.rhs;
        s.estimates["ratio"] = id.ratio;
        s.std_errors["lhs"] = id.lhs_se;
        s.std_errors["rhs"] = id.rhs_se;
        s.std_errors["ratio"] = id.ratio_se;
        s.pass = std::abs(id.ratio - 1.0) <= c.positive("tol");
    } else if (check == "envelope") {
        std::uint64_t bad = 0, checks = 0;
        const auto W = static_cast<std::int64_t>(c.at_least("width", 1));
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            randkit::Stream is(randkit::SeedSpec{seed, rep, randkit::purpose::kInitial});
            const auto rep_report = exclusion::envelope_coupled_run(
                exclusion::init_bernoulli(W, c.num_in("rho", 0.0, 1.0), is), t, {seed, rep, randkit::purpose::kClocks});
            bad += rep_report.mismatches;
            checks += rep_report.checks;
        }
        s.estimates["checks"] = checks;
        s.estimates["mismatches"] = bad;
        s.pass = bad == 0;
    } else {
        const auto count = c.at_least("particles", 1);
        const double L = c.positive("length");
        std::uint64_t bad = 0, checks = 0;
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            randkit::Stream is(randkit::SeedSpec{seed, rep, randkit::purpose::kInitial});
            hammersley::HammersleyState st;
            for (std::uint64_t k = 0; k < count; ++k) st.z.push_back(L * is.uniform());
            std::sort(st.z.begin(), st.z.end());
            const auto pts =
                randkit::sample_poisson_points({0.0, 0.0, L, t}, 1.0, {seed, rep, randkit::purpose::kPoisson});
            for (std::int64_t i = st.i_min; i <= st.i_max(); ++i) {
                bad += !hammersley::check_variational(st, pts, t, i).equal;
                ++checks;
            }
        }
        s.estimates["checks"] = checks;
        s.estimates["mismatches"] = bad;
        s.pass = bad == 0;
    }
    return s;
}

Summary run_hydro(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& model = c.choice("model", {"tasep", "hammersley"});
    const auto& profile = c.choice("profile", {"wedge", "linear", "two_slope"});
    const hydro::Profile u0 = profile == "wedge"    ? hydro::Profile::wedge()
                              : profile == "linear" ? hydro::Profile::linear(c.num("rho"))
                                                    : hydro::Profile::two_slope(c.num("left"), c.num("right"));
    const auto cmp = hydro::hydro_compare(model == "tasep" ? hydro::HydroModel::TasepWedge : hydro::HydroModel::Hammersley,
                                          u0, c.positive("n"), c.num_in("t", 0.0, 1e300), c.list("grid"),
                                          c.at_least("reps", 1), c.count("seed"), ctx.threads);
    Summary s;
    s.estimates["max_error"] = cmp.max_error;
    s.estimates["boundary_flags"] = cmp.boundary_flags;
    s.pass = cmp.max_error <= c.positive("tol") && cmp.boundary_flags == 0;
    ctx.csv([&](std::ostream& f) { hydro::write_hydro_csv(f, cmp.rows); });
    return s;
}

Summary run_ldp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto tail = c.choice("tail", {"upper", "lower"}) == "upper" ? ldp::Tail::UlamUpper : ldp::Tail::UlamLower;
    const double x = tail == ldp::Tail::UlamUpper ? c.num_in("x", 0.0, 1e300) : c.num_in("x", 0.0, 2.0);
    const auto reps = c.at_least("reps", 1);
    const auto seed = c.count("seed");
    const auto ns = c.list("ns");
    if (ns.empty()) throw ConfigError("config key 'ns' must list at least one n");
    Summary s;
    std::vector<ldp::TailRow> rows;
    for (double n : ns) {
        const auto est = ldp::mc_tail(tail, n, x, reps, seed, ctx.threads);
        rows.push_back({n, x, tail, est.hits, est.reps, est.value, seed});
        std::ostringstream key_text;
        key_text << "log_p_over_scale_n" << n;
        const std::string key = key_text.str();
        if (est.value) {
            s.estimates[key] = *est.value;
            s.std_errors[key] = est.std_error;
        } else {
            s.estimates[key] = nullptr;
            s.pass = false;
        }
    }
    s.estimates["rate_limit"] = tail == ldp::Tail::UlamUpper ? -ldp::I_ulam_upper(x) : -ldp::U_ulam_lower(x);
    ctx.csv([&](std::ostream& f) { ldp::write_tail_csv(f, rows); });
    return s;
}

Summary run_verify(const Context& ctx) {
    const auto& c = ctx.cfg;
    std::vector<int> ids;
    for (double v : c.list("criteria")) {
        if (v != std::floor(v) || v < 1 || v > verify::kCriteria) {
            throw ConfigError("config key 'criteria': ids must be integers in 1..12");
        }
        ids.push_back(static_cast<int>(v));
    }
    if (ids.empty()) {
        try {
            ids = verify::suite_criteria(c.str("suite"));
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    const Thresholds th;
    Summary s;
    json results = json::array();
    for (int id : ids) {
        const auto r = verify::run_criterion(id, th, ctx.threads);
        std::cerr << verify::format_line(r) << std::endl;
        const std::string prefix = std::to_string(id) + ".";
        for (const auto& [k, v] : r.estimates) s.estimates[prefix + k] = v;
        for (const auto& [k, v] : r.std_errors) s.std_errors[prefix + k] = v;
        s.pass = s.pass && r.pass;
        results.push_back(verify::to_json(r));
    }
    s.extra["criteria"] = results;
    s.extra["thresholds_version"] = kThresholdsVersion;
    return s;
}

std::vector<Command> commands() {
    return {
        {"shape", "limit-shape estimates: corner growth G(nx,ny)/n or the Ulam constant",
         {{"model", "corner"}, {"law", "exp"}, {"rate", "1"}, {"geom_q", "0.5"}, {"x", "1"}, {"y", "1"},
          {"n", "1000"}, {"reps", "200"}, {"seed", "1"}},
         run_shape},
        {"simulate", "height or particle trajectories",
         {{"model", "tasep"}, {"init", "wedge"}, {"rho", "0.5"}, {"p", "1"}, {"q", "0"}, {"t", "100"},
          {"snapshots", "10"}, {"sites", "-10,0,10"}, {"width", "0"}, {"length", "100"}, {"reps", "1"}, {"seed", "1"}},
         run_simulate},
        {"fluct", "fluctuation exponents: TASEP along characteristics or RAP currents",
         {{"model", "tasep"}, {"rho", "0.5"}, {"p", "1"}, {"q", "0"}, {"times", "16,32,64,128,256,512,1024"},
          {"velocities", ""}, {"scheme", "beta"}, {"alpha", "1"}, {"beta", "1"}, {"M", "1"}, {"variance", "1"},
          {"ns", "64,128,256,512"}, {"t", "1"}, {"reps", "100"}, {"seed", "1"}},
         run_fluct},
        {"coupling", "second-class drift, variance identity, envelope and variational checks",
         {{"check", "second_class"}, {"rho", "0.3"}, {"p", "1"}, {"q", "0"}, {"t", "200"}, {"v", "0"},
          {"width", "40"}, {"particles", "20"}, {"length", "12"}, {"tol", "0.1"}, {"reps", "100"}, {"seed", "1"}},
         run_coupling},
        {"hydro", "simulated profiles against the Hopf-Lax solution",
         {{"model", "tasep"}, {"profile", "wedge"}, {"rho", "0.5"}, {"left", "1"}, {"right", "0"}, {"n", "500"},
          {"t", "1"}, {"grid", "-0.75,-0.5,-0.25,0,0.25,0.5,0.75"}, {"tol", "0.05"}, {"reps", "20"}, {"seed", "1"}},
         run_hydro},
        {"ldp", "Monte Carlo tails of the Ulam problem",
         {{"tail", "upper"}, {"x", "2.5"}, {"ns", "4,8"}, {"reps", "100000"}, {"seed", "1"}},
         run_ldp},
        {"verify", "acceptance suite with fixed seeds; exit 0 iff every criterion passes",
         {{"suite", "full"}, {"criteria", ""}},
         run_verify},
    };
}

std::string flag_name(std::string key) {
    for (auto& ch : key) {
        if (ch == '_') ch = '-';
    }
    return "--" + key;
}

int report_error(const std::string& kind, const std::string& message, int code) {
    std::cout << json{{"error", {{"kind", kind}, {"message", message}}}, {"pass", false}}.dump(2) << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growthlab: random growth models, coupling checks and the acceptance suite"};
    app.require_subcommand(1, 1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

    struct Bound {
        Command cmd;
        CLI::App* sub = nullptr;
        std::string config_file, out, json_out;
        std::vector<std::string> sets;
        std::map<std::string, std::string> flags;
        std::map<std::string, CLI::Option*> flag_opts;
    };
    std::vector<std::unique_ptr<Bound>> bound;
    for (auto& cmd : commands()) {
        auto b = std::make_unique<Bound>();
        b->cmd = std::move(cmd);
        b->sub = app.add_subcommand(b->cmd.name, b->cmd.help);
        b->sub->add_option("--config", b->config_file, "key=value file");
        b->sub->add_option("--set", b->sets, "key=value override (repeatable)");
        b->sub->add_option("--out", b->out, "CSV output path");
        b->sub->add_option("--json", b->json_out, "also write the JSON summary here");
        b->sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
        for (const auto& [key, def] : b->cmd.defaults) {
            b->flag_opts[key] = b->sub->add_option(flag_name(key), b->flags[key], "default '" + def + "'");
        }
        bound.push_back(std::move(b));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("usage", e.what(), 2);
    }

    for (auto& b : bound) {
        if (!b->sub->parsed()) continue;
        std::optional<Config> cfg;
        try {
            cfg.emplace(b->cmd.name, b->cmd.defaults);
            if (!b->config_file.empty()) cfg->load_file(b->config_file);
            for (const auto& a : b->sets) cfg->assign(a);
            for (const auto& [key, opt] : b->flag_opts) {
                if (opt->count() > 0) cfg->set(key, b->flags[key]);
            }
            const Context ctx{*cfg, threads, b->out};
            const auto s = b->cmd.run(ctx);
            json j = {{"config", cfg->to_json()}, {"estimates", s.estimates}, {"stderr", s.std_errors}, {"pass", s.pass}};
            for (const auto& [k, v] : s.extra.items()) j[k] = v;
            if (!b->out.empty()) j["csv"] = b->out;
            std::cout << j.dump(2) << std::endl;
            if (!b->json_out.empty()) {
                std::ofstream f(b->json_out);
                if (!f) return report_error("io", "cannot write '" + b->json_out + "'", 1);
                f << j.dump(2) << '\n';
            }
            return s.pass ? 0 : 1;
        } catch (const ConfigError& e) {
            return report_error("config", e.what(), 2);
        } catch (const ArgumentError& e) {
            return report_error("config", e.what(), 2);
        } catch (const DomainError& e) {
            return report_error("config", e.what(), 2);
        } catch (const std::exception& e) {
            return report_error("runtime", e.what(), 1);
        }
    }
    return report_error("usage", "no subcommand", 2);
}

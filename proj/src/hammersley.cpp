#include "growth/hammersley.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"
#include "growth/stats.hpp"

namespace growth::hammersley {

namespace {

// Sort by x, and by decreasing time within equal x so that equal abscissae
// never chain.
void chain_order(std::vector<PlanarPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& p, const PlanarPoint& q) {
        return p.x < q.x || (p.x == q.x && p.time > q.time);
    });
}

// Patience piles: tails[k] is the smallest final time of a chain of length k+1.
struct Patience {
    std::vector<double> tails;
    void add(double time) {
        const auto it = std::lower_bound(tails.begin(), tails.end(), time);
        if (it == tails.end()) tails.push_back(time);
        else *it = time;
    }
    std::int64_t length() const { return static_cast<std::int64_t>(tails.size()); }
};

// Points of the container with time in (s, t], in chain order.
std::vector<PlanarPoint> slab(const PlanarPoints& container, double s, double t) {
    std::vector<PlanarPoint> pts;
    for (const auto& p : container.points) {
        if (p.time > s && p.time <= t) pts.push_back(p);
    }
    chain_order(pts);
    return pts;
}

// Smallest x with L((a,s),(x,t)) >= w over an ordered slab; +inf if none.
double gamma_endpoint(const std::vector<PlanarPoint>& ordered, double a, std::int64_t w) {
    if (w <= 0) return a;
    Patience piles;
    auto it = std::upper_bound(ordered.begin(), ordered.end(), a,
                               [](double v, const PlanarPoint& p) { return v < p.x; });
    while (it != ordered.end()) {
        const double x = it->x;
        for (; it != ordered.end() && it->x == x; ++it) piles.add(it->time);
        if (piles.length() >= w) return x;
    }
    return kInfinity;
}

}  // namespace

std::int64_t lis_count(const UlamQuery& query) {
    std::vector<PlanarPoint> pts;
    for (const auto& p : query.points) {
        if (query.rect.contains(p.x, p.time)) pts.push_back(p);
    }
    chain_order(pts);
    Patience piles;
    for (const auto& p : pts) piles.add(p.time);
    return piles.length();
}

std::int64_t lis_count(const PlanarPoints& points) { return lis_count(UlamQuery{points.rect, points.points}); }

double gamma_inverse(const PlanarPoints& container, double a, double s, double t, std::int64_t w) {
    if (w < 0) throw ArgumentError("gamma_inverse: w must be >= 0");
    if (w == 0) return 0.0;
    if (!(t > s)) throw ArgumentError("gamma_inverse: need t > s");
    const Rect& r = container.rect;
    if (a < r.a || s < r.s || t > r.t) {
        throw UndecidableError("gamma_inverse: query leaves the point container; widen the container");
    }
    const double x = gamma_endpoint(slab(container, s, t), a, w);
    return std::isinf(x) ? kInfinity : x - a;
}

bool HammersleyState::sorted() const { return std::is_sorted(z.begin(), z.end()); }

HammersleyRun evolve_hammersley(const HammersleyState& initial, const PlanarPoints& points, double horizon) {
    if (!(horizon >= 0.0)) throw ArgumentError("evolve_hammersley: horizon must be >= 0");
    if (!initial.sorted()) throw ArgumentError("evolve_hammersley: initial positions must be nondecreasing");
    const double t0 = initial.time, t1 = initial.time + horizon;
    std::vector<PlanarPoint> pts;
    for (const auto& p : points.points) {
        if (p.time > t0 && p.time <= t1) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& p, const PlanarPoint& q) { return p.time < q.time; });

    HammersleyRun run{initial, 0, 0, true};
    auto& z = run.final_state.z;
    for (const auto& p : pts) {
        const auto it = std::upper_bound(z.begin(), z.end(), p.x);
        if (it == z.end()) {
            ++run.boundary_events;
            continue;
        }
        *it = p.x;
        ++run.pulls;
    }
    run.final_state.time = t1;
    run.stayed_sorted = run.final_state.sorted();
    return run;
}

namespace {

void check_container(const HammersleyState& initial, const PlanarPoints& points, double horizon) {
    const Rect& r = points.rect;
    if (initial.time < r.s || initial.time + horizon > r.t) {
        throw UndecidableError("variational formula: time window leaves the point container");
    }
    if (initial.z.front() < r.a) throw UndecidableError("variational formula: particles left of the point container");
}

// Terms of the variational formula; index 0 is the reservoir.
std::vector<double> variational_terms(const HammersleyState& initial, const PlanarPoints& points, double horizon,
                                      std::int64_t i) {
    const auto ordered = slab(points, initial.time, initial.time + horizon);
    std::vector<double> terms;
    terms.push_back(gamma_endpoint(ordered, points.rect.a, i - initial.i_min + 1));
    for (std::int64_t k = initial.i_min; k <= i; ++k) terms.push_back(gamma_endpoint(ordered, initial.at(k), i - k));
    return terms;
}

}  // namespace

VariationalValue variational_position(const HammersleyState& initial, const PlanarPoints& points, double horizon,
                                      std::int64_t i) {
    if (i < initial.i_min || i > initial.i_max()) throw ArgumentError("variational_position: label outside the state");
    if (!(horizon > 0.0)) return {initial.at(i), i};
    check_container(initial, points, horizon);
    const auto terms = variational_terms(initial, points, horizon, i);
    const auto best = std::min_element(terms.begin(), terms.end());
    return {*best, initial.i_min - 1 + (best - terms.begin())};
}

VariationalCheck check_variational(const HammersleyState& initial, const PlanarPoints& points, double horizon,
                                   std::int64_t i, std::int64_t k_min) {
    if (i < initial.i_min || i > initial.i_max()) throw ArgumentError("check_variational: label outside the state");
    VariationalCheck out;
    out.simulated = evolve_hammersley(initial, points, horizon).final_state.at(i);
    if (!(horizon > 0.0)) {
        out.variational = out.simulated;
        out.equal = true;
        out.argmin_k = i;
        return out;
    }
    check_container(initial, points, horizon);
    const auto terms = variational_terms(initial, points, horizon, i);
    const auto best = std::min_element(terms.begin(), terms.end());
    out.variational = *best;
    out.argmin_k = initial.i_min - 1 + (best - terms.begin());
    out.equal = std::abs(out.simulated - out.variational) <= 1e-12 * (1.0 + std::abs(out.variational));
    if (k_min > initial.i_min) {
        double truncated = kInfinity;
        for (std::int64_t k = std::max(k_min, initial.i_min); k <= i; ++k) {
            truncated = std::min(truncated, terms[static_cast<std::size_t>(k - initial.i_min + 1)]);
        }
        out.truncation_sensitive = truncated != out.variational;
    }
    return out;
}

UlamEstimate ulam_estimate(double n, std::size_t replicates, std::uint64_t seed, unsigned threads) {
    if (!(n > 0.0)) throw ArgumentError("ulam_estimate: n must be positive");
    if (replicates < 1) throw ArgumentError("ulam_estimate: need at least one replicate");
    UlamEstimate est;
    est.counts = run_replicates(replicates, threads, [&](std::size_t rep) {
        const auto pts = randkit::sample_poisson_points({0.0, 0.0, n, n}, 1.0, {seed, rep, randkit::purpose::kPoisson});
        return lis_count(pts);
    });
    std::vector<double> scaled;
    for (auto c : est.counts) scaled.push_back(static_cast<double>(c) / n);
    const auto m = stats::mean_with_stderr(scaled);
    est.mean = m.mean;
    est.std_error = m.std_error;
    return est;
}

void write_ulam_csv(std::ostream& out, std::span<const UlamRow> rows) {
    out << "n,replicate,L,seed\n";
    out.precision(12);
    for (const auto& r : rows) out << r.n << ',' << r.replicate << ',' << r.L << ',' << r.seed << '\n';
}

void write_particle_csv(std::ostream& out, std::span<const ParticleRow> rows) {
    out << "t,i,z,replicate\n";
    out.precision(15);
    for (const auto& r : rows) out << r.t << ',' << r.i << ',' << r.z << ',' << r.replicate << '\n';
}

}  // namespace growth::hammersley

#include "growth/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "growth/errors.hpp"
#include "growth/hammersley.hpp"
#include "growth/numerics.hpp"
#include "growth/parallel.hpp"
#include "growth/randkit.hpp"

namespace growth::ldp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy_ratio(double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); }
}  // namespace

double I_ulam_upper(double x) {
    if (x <= 2.0) return 0.0;
    return 2.0 * x * std::acosh(x / 2.0) - 2.0 * std::sqrt(x * x - 4.0);
}

double R2_poisson(double s) {
    if (s < 0.0) throw DomainError("R2_poisson: s must be >= 0");
    return (s == 0.0 ? 0.0 : s * std::log(s / 2.0)) - s + 2.0;
}

double U_ulam_lower(double x) {
    if (!(x >= 0.0 && x <= 2.0)) throw DomainError("U_ulam_lower: x must lie in [0,2]");
    if (x == 2.0) return 0.0;
    return numerics::adaptive_simpson(R2_poisson, x, 2.0, 1e-10);
}

double rw_rate(double x, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("rw_rate: p must lie in (0,1)");
    if (x < -1.0 || x > 1.0) return kInf;
    const double a = (1.0 + x) / 2.0, b = (1.0 - x) / 2.0;
    return xlogy_ratio(a, p) + xlogy_ratio(b, 1.0 - p);
}

double rw_log_mgf(double theta, double p) {
    const double a = std::log(p) + theta, b = std::log1p(-p) - theta;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double rw_legendre_check(double p, std::size_t points) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("rw_legendre_check: p must lie in (0,1)");
    if (points < 1) throw ArgumentError("rw_legendre_check: need at least one point");
    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const double x = -1.0 + 2.0 * static_cast<double>(k + 1) / static_cast<double>(points + 1);
        // theta x - Lambda(theta) is concave; its maximizer is finite inside (-1,1).
        const auto best = numerics::golden_maximize([&](double th) { return th * x - rw_log_mgf(th, p); }, -60.0, 60.0,
                                                    1e-12);
        worst = std::max(worst, std::abs(best.value - rw_rate(x, p)));
    }
    return worst;
}

const char* tail_name(Tail tail) { return tail == Tail::UlamUpper ? "ulam_upper" : "ulam_lower"; }

namespace {

// Counts replicates in blocks so memory does not grow with the replicate count.
template <class Hit>
std::uint64_t count_hits(std::uint64_t reps, unsigned threads, Hit&& hit) {
    const std::uint64_t blocks = std::min<std::uint64_t>(reps, 4096);
    const auto counts = run_replicates(blocks, threads, [&](std::size_t b) {
        std::uint64_t c = 0;
        for (std::uint64_t rep = b; rep < reps; rep += blocks) c += hit(rep) ? 1 : 0;
        return c;
    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

void finish(TailEstimate& est, double scale) {
    if (est.hits == 0) {
        est.status = TailStatus::ZeroHits;
        return;
    }
    if (est.hits < kMinHits) {
        est.status = TailStatus::InsufficientHits;
        return;
    }
    const double p = static_cast<double>(est.hits) / static_cast<double>(est.reps);
    est.status = TailStatus::Estimate;
    est.value = std::log(p) / scale;
    est.std_error = std::sqrt((1.0 - p) / static_cast<double>(est.hits)) / scale;
}

}  // namespace

TailEstimate mc_tail(Tail tail, double n, double x, std::uint64_t reps, std::uint64_t seed, unsigned threads) {
    if (!(n > 0.0) || reps < 1) throw ArgumentError("mc_tail: need n > 0 and at least one replicate");
    TailEstimate est;
    est.tail = tail;
    est.n = n;
    est.x = x;
    est.reps = reps;
    const double nx = n * x;
    const auto upper = static_cast<std::int64_t>(std::ceil(nx - 1e-9));
    const auto lower = static_cast<std::int64_t>(std::floor(nx + 1e-9));
    est.hits = count_hits(reps, threads, [&](std::uint64_t rep) {
        const auto pts = randkit::sample_poisson_points({0.0, 0.0, n, n}, 1.0, {seed, rep, randkit::purpose::kPoisson});
        const auto L = hammersley::lis_count(pts);
        return tail == Tail::UlamUpper ? L >= upper : L <= lower;
    });
    finish(est, tail == Tail::UlamUpper ? n : n * n);
    return est;
}

PsiEstimate psi_estimate(double w, double r, std::span<const double> n_grid, std::uint64_t reps, std::uint64_t seed,
                         unsigned threads) {
    if (!(w >= 0.0) || !(r >= 0.0) || n_grid.empty() || reps < 1) {
        throw ArgumentError("psi_estimate: need w, r >= 0, a grid and replicates");
    }
    PsiEstimate out;
    out.w = w;
    out.r = r;
    std::optional<double> prev;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        const double n = n_grid[k];
        const auto need = static_cast<std::int64_t>(std::ceil(n * w - 1e-9));
        TailEstimate est;
        est.n = n;
        est.x = w;
        est.reps = reps;
        if (need <= 0) {
            est.hits = reps;
        } else if (r > 0.0) {
            est.hits = count_hits(reps, threads, [&](std::uint64_t rep) {
                const auto pts = randkit::sample_poisson_points({0.0, 0.0, n * r, n}, 1.0,
                                                                {seed, (static_cast<std::uint64_t>(k) << 40) | rep,
                                                                 randkit::purpose::kPoisson});
                return hammersley::lis_count(pts) >= need;
            });
        }
        finish(est, n);
        out.ns.push_back(n);
        out.hits.push_back(est.hits);
        std::optional<double> v;
        if (est.value) v = *est.value == 0.0 ? 0.0 : -*est.value;
        out.values.push_back(v);
        if (v && prev && *v > *prev) out.nonincreasing = false;
        if (v) prev = v;
    }
    return out;
}

double j_t_compose(const J0Fn& J0, const PsiFn& Psi, double t, double x, double r, const ComposeGrid& grid) {
    if (!(t > 0.0)) throw ArgumentError("j_t_compose: t must be positive");
    if (!(grid.y_lo < x) || !(grid.s_lo < r) || grid.steps < 2 || grid.steps % 2 != 0) {
        throw ArgumentError("j_t_compose: grid must start below (x, r) with an even positive step count");
    }
    auto objective = [&](double y, double s) {
        const double j = J0(y, s);
        if (std::isinf(j)) return j;
        return j + t * Psi((x - y) / t, (r - s) / t);
    };

    const int m = grid.steps;
    double ylo = grid.y_lo, yhi = x, slo = grid.s_lo, shi = r;
    double best = kInf, by = x, bs = r;
    for (int round = 0; round <= grid.refinements; ++round) {
        double edge = kInf, inner = kInf;
        const double hy = (yhi - ylo) / m, hs = (shi - slo) / m;
        for (int a = 0; a <= m; ++a) {
            const double y = a == m ? yhi : ylo + (yhi - ylo) * a / m;
            for (int b = 0; b <= m; ++b) {
                const double s = b == m ? shi : slo + (shi - slo) * b / m;
                const double v = objective(y, s);
                if (round == 0 && (a == 0 || b == 0)) edge = std::min(edge, v);
                else inner = std::min(inner, v);
                if (v < best) {
                    best = v;
                    by = y;
                    bs = s;
                }
            }
        }
        if (round == 0 && edge < inner - 1e-12 * (1.0 + std::abs(inner))) {
            throw GridNotLocalized("j_t_compose: infimum sits on the lower grid edge; lower y_lo or s_lo");
        }
        ylo = std::max(grid.y_lo, by - hy);
        yhi = std::min(x, by + hy);
        slo = std::max(grid.s_lo, bs - hs);
        shi = std::min(r, bs + hs);
        if (!(yhi > ylo) || !(shi > slo)) break;
    }
    return best;
}

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows) {
    out << "n,x,tail,hits,reps,log_p_over_rate_scale,seed\n";
    out.precision(12);
    for (const auto& r : rows) {
        out << r.n << ',' << r.x << ',' << tail_name(r.tail) << ',' << r.hits << ',' << r.reps << ',';
        if (r.value) out << *r.value;
        out << ',' << r.seed << '\n';
    }
}

}  // namespace growth::ldp

#pragma once

// Large deviations: rate functions for the Ulam count and for the simple
// random walk, naive Monte Carlo tail estimates, the superadditive rate Psi
// and its Hopf-Lax type composition J_t.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace growth::ldp {

// lim n^{-1} log P{L_n >= n x} = -I(x): I(x) = 2x acosh(x/2) - 2 sqrt(x^2 - 4)
// for x >= 2, and 0 for x < 2 (the event becomes typical).
double I_ulam_upper(double x);
// R_2(s) = s log(s/2) - s + 2 (R_2(0) = 2).
double R2_poisson(double s);
// lim n^{-2} log P{L_n <= n x} = -U(x), U(x) = int_x^2 R_2; adaptive Simpson
// to 1e-10. DomainError outside [0,2].
double U_ulam_lower(double x);

// Entropy rate of the +-1 walk with P{+1} = p: finite on [-1,1], +infinity outside.
double rw_rate(double x, double p);
// log(p e^theta + (1-p) e^-theta).
double rw_log_mgf(double theta, double p);
// Max |sup_theta {theta x - Lambda(theta)} - rw_rate(x, p)| over the grid
// x_k = -1 + 2(k+1)/(points+1), k = 0..points-1.
double rw_legendre_check(double p, std::size_t points = 41);

enum class Tail { UlamUpper, UlamLower };
const char* tail_name(Tail tail);

enum class TailStatus { Estimate, InsufficientHits, ZeroHits };

struct TailEstimate {
    Tail tail = Tail::UlamUpper;
    double n = 0, x = 0;
    std::uint64_t hits = 0;
    std::uint64_t reps = 0;
    TailStatus status = TailStatus::ZeroHits;
    // log P / n (upper) or log P / n^2 (lower); empty unless status == Estimate.
    std::optional<double> value;
    double std_error = 0.0;  // delta method on the binomial proportion
};
inline constexpr std::uint64_t kMinHits = 10;

// Naive Monte Carlo for P{L_n >= n x} or P{L_n <= n x} with L_n the longest
// chain in [0,n]^2. Fewer than kMinHits hits gives no estimate.
TailEstimate mc_tail(Tail tail, double n, double x, std::uint64_t reps, std::uint64_t seed, unsigned threads = 0);

struct PsiEstimate {
    double w = 0, r = 0;
    std::vector<double> ns;
    std::vector<std::uint64_t> hits;
    std::vector<std::optional<double>> values;  // -n^{-1} log P{Gamma((0,0), n, n w) <= n r}
    bool nonincreasing = true;  // among the available estimates
};
// Gamma((0,0), n, nw) <= nr iff the longest chain in (0, nr] x (0, n] is >= nw.
PsiEstimate psi_estimate(double w, double r, std::span<const double> n_grid, std::uint64_t reps, std::uint64_t seed,
                         unsigned threads = 0);

using J0Fn = std::function<double(double y, double s)>;    // +infinity allowed
using PsiFn = std::function<double(double w, double r)>;

struct ComposeGrid {
    double y_lo = -1.0;  // search y in [y_lo, x]
    double s_lo = -1.0;  // search s in [s_lo, r]
    int steps = 40;      // even, so refinements keep the centre
    int refinements = 4;
};
// inf_{y <= x, s <= r} { J0(y,s) + t Psi((x-y)/t, (r-s)/t) } on the grid,
// refined around the best point. GridNotLocalized when the lower edges of the
// grid strictly beat its interior.
double j_t_compose(const J0Fn& J0, const PsiFn& Psi, double t, double x, double r, const ComposeGrid& grid = {});

struct TailRow {
    double n = 0, x = 0;
    Tail tail = Tail::UlamUpper;
    std::uint64_t hits = 0, reps = 0;
    std::optional<double> value;
    std::uint64_t seed = 0;
};
void write_tail_csv(std::ostream& out, std::span<const TailRow> rows);

}  // namespace growth::ldp

#pragma once

// Macroscopic layer: piecewise-linear profiles, the wedge shape g and flux f,
// the Hopf-Lax formulas for exclusion (sup form) and Hammersley (inf form),
// minimizer sets and shocks, the fluctuation transform, and comparisons of
// rescaled simulations with the deterministic limit.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "growth/exclusion.hpp"
#include "growth/hammersley.hpp"

namespace growth::hydro {

// Piecewise-linear function through (xs[k], ys[k]), extended beyond the end
// breakpoints with the given slopes. An optional curvature c > 0 subtracts
// c (y - xs.front())^2 left of the first breakpoint; it exists to represent
// profiles whose left tail grows quadratically.
class Profile {
public:
    Profile(std::vector<double> xs, std::vector<double> ys, double left_slope, double right_slope);
    // Extensions continue the first and last segments (needs >= 2 breakpoints).
    Profile(std::vector<double> xs, std::vector<double> ys);

    static Profile linear(double rho);  // rho * y
    static Profile wedge();             // 0 ^ y
    // Slope `left` for y < corner, `right` for y >= corner, value 0 at the corner.
    static Profile two_slope(double left, double right, double corner = 0.0);

    double operator()(double y) const;
    const std::vector<double>& breakpoints() const { return xs_; }
    double left_slope() const { return left_slope_; }
    double right_slope() const { return right_slope_; }
    double min_slope() const;
    double max_slope() const;
    double tail_curvature() const { return curvature_; }
    Profile with_left_tail_curvature(double c) const;

    bool exclusion_admissible() const { return curvature_ == 0.0 && min_slope() >= 0.0 && max_slope() <= 1.0; }
    bool nondecreasing() const { return curvature_ == 0.0 && min_slope() >= 0.0; }

private:
    std::vector<double> xs_, ys_;
    double left_slope_, right_slope_;
    double curvature_ = 0.0;
};

// g(x) = -(1 - x)^2 / 4 on [-1,1], 0 ^ x outside; with asymmetry d = p - q
// the shape is d g(x / d) and the flux d rho (1 - rho).
double g_oracle(double x, double drift = 1.0);
double flux_oracle(double rho, double drift = 1.0);

// sup_y { rho y + g(-y) }, computed numerically; equals -f(rho).
double duality_check(double rho, double drift = 1.0);
struct DualitySweep {
    double max_error = 0.0;
    double worst_rho = 0.0;
    std::size_t points = 0;
};
// rho_k = k / (points - 1), k = 0..points-1.
DualitySweep duality_sweep(std::size_t points = 21, double drift = 1.0);

struct VariationalOptions {
    double vtol = 1e-9;          // golden-section tolerance in y
    double value_tol = 1e-7;     // candidates this close to the optimum are minimizers
    double cluster_gap = 1e-3;   // minimizers farther apart than this are distinct
    std::size_t sub_cells = 4;   // golden searches per linear piece
};

// u(t,x) = sup_y { u0(y) + t g((x - y)/t) } over y in [x - d t, x + d t].
double hopf_lax_height(const Profile& u0, double t, double x, double drift = 1.0, const VariationalOptions& opts = {});

struct MinimizerSet {
    std::vector<double> points;  // increasing
    double diameter() const { return points.empty() ? 0.0 : points.back() - points.front(); }
};

struct HammersleyHopfLax {
    double value = 0.0;
    MinimizerSet minimizers;
};
// u(t,x) = inf_{y <= x} { u0(y) + (x - y)^2 / (4 t) }. DomainError when the
// profile's left tail makes the infimum -infinity.
HammersleyHopfLax hopf_lax_hammersley(const Profile& u0, double t, double x, const VariationalOptions& opts = {});

bool shock_detect(const Profile& u0, double t, double x, double tol, const VariationalOptions& opts = {});

// Values on an increasing grid, linearly interpolated in between (constant
// beyond the ends).
struct SampledProfile {
    std::vector<double> ys;
    std::vector<double> values;
    double operator()(double y) const;
};
double fluctuation_transform(const SampledProfile& zeta0, const MinimizerSet& minimizers);

enum class HydroModel { TasepWedge, Hammersley };

// Initial heights for a rescaled exclusion profile: P[eta_i = 1] =
// n (u0(i/n) - u0((i-1)/n)), h_0 = floor(n u0(0)).
exclusion::HeightState tasep_initial_from_profile(const Profile& u0, double n, std::int64_t lo, std::int64_t hi,
                                                  randkit::Stream& stream);
// z_i(0) = n u0(i/n) for i_min <= i <= i_max.
hammersley::HammersleyState hammersley_initial_from_profile(const Profile& u0, double n, std::int64_t i_min,
                                                            std::int64_t i_max);

struct HydroRow {
    double t = 0, x = 0;
    double u_hopf_lax = 0, u_simulated = 0;
    double n = 0;
    double error = 0;
};
struct HydroComparison {
    std::vector<HydroRow> rows;
    double max_error = 0.0;
    std::size_t boundary_flags = 0;
};
// n^{-1} (height at [nx], time nt) for exclusion, n^{-1} z_[nx](nt) for
// Hammersley, averaged over replicates and compared with the Hopf-Lax value.
HydroComparison hydro_compare(HydroModel model, const Profile& u0, double n, double t, std::span<const double> x_grid,
                              std::size_t reps, std::uint64_t seed, unsigned threads = 0);

void write_hydro_csv(std::ostream& out, std::span<const HydroRow> rows);

}  // namespace growth::hydro

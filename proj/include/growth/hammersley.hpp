#pragma once

// Hammersley's process: longest increasing chains of planar Poisson points
// (Ulam's problem), the horizontal inverse Gamma, the particle system driven
// by the points and its variational description.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "growth/randkit.hpp"

namespace growth::hammersley {

using randkit::PlanarPoint;
using randkit::PlanarPoints;
using randkit::Rect;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct UlamQuery {
    Rect rect;
    std::span<const PlanarPoint> points;  // points outside rect are ignored
};

// Longest chain strictly increasing in both coordinates among the points of
// the query rectangle (patience sorting, O(P log P)).
std::int64_t lis_count(const UlamQuery& query);
std::int64_t lis_count(const PlanarPoints& points);

// Gamma((a,s),t,w) = inf{h >= 0 : L((a,s),(a+h,t)) >= w}, using the points of
// `container`. Returns +infinity when the container's points never reach w.
// Throws UndecidableError when the query rectangle is not covered by the
// container (a < rect.a, s < rect.s or t > rect.t).
double gamma_inverse(const PlanarPoints& container, double a, double s, double t, std::int64_t w);

struct HammersleyState {
    std::int64_t i_min = 0;  // label of z.front(); labels below i_min sit at -infinity
    std::vector<double> z;   // nondecreasing
    double time = 0.0;

    std::int64_t i_max() const { return i_min + static_cast<std::int64_t>(z.size()) - 1; }
    double at(std::int64_t i) const { return z[static_cast<std::size_t>(i - i_min)]; }
    bool sorted() const;
};

struct HammersleyRun {
    HammersleyState final_state;
    std::uint64_t pulls = 0;
    std::uint64_t boundary_events = 0;  // points right of every particle (container short on the right)
    bool stayed_sorted = true;
};

// Applies, in time order, every point with time in (state.time, state.time + horizon]:
// the leftmost particle strictly right of x jumps to x.
HammersleyRun evolve_hammersley(const HammersleyState& initial, const PlanarPoints& points, double horizon);

struct VariationalValue {
    double value = 0.0;
    std::int64_t argmin_k = 0;  // i_min - 1 stands for the reservoir of particles at -infinity
};
// inf_{k <= i} { z_k(0) + Gamma((z_k(0), s), s + horizon, i - k) } over the
// points of `points`; labels below i_min contribute through the container's
// left edge.
VariationalValue variational_position(const HammersleyState& initial, const PlanarPoints& points, double horizon,
                                      std::int64_t i);

struct VariationalCheck {
    double simulated = 0.0;
    double variational = 0.0;
    bool equal = false;
    std::int64_t argmin_k = 0;
    bool truncation_sensitive = false;  // restricting k >= k_min changes the value
};

// Compares z_i(t) from the particle dynamics with variational_position on
// the same points. k_min (if above i_min) is a truncation whose effect is reported.
VariationalCheck check_variational(const HammersleyState& initial, const PlanarPoints& points, double horizon,
                                   std::int64_t i, std::int64_t k_min = std::numeric_limits<std::int64_t>::min());

struct UlamEstimate {
    double mean = 0.0;  // of L_n / n
    double std_error = 0.0;
    std::vector<std::int64_t> counts;
};
// L((0,0),(n,n)) over rate-1 Poisson points, one realization per replicate.
UlamEstimate ulam_estimate(double n, std::size_t replicates, std::uint64_t seed, unsigned threads = 0);

struct UlamRow {
    double n = 0;
    std::size_t replicate = 0;
    std::int64_t L = 0;
    std::uint64_t seed = 0;
};
void write_ulam_csv(std::ostream& out, std::span<const UlamRow> rows);

struct ParticleRow {
    double t = 0;
    std::int64_t i = 0;
    double z = 0;
    std::size_t replicate = 0;
};
void write_particle_csv(std::ostream& out, std::span<const ParticleRow> rows);

}  // namespace growth::hammersley

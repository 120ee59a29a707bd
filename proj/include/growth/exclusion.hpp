#pragma once

// Height processes with increments constrained to [0,K]: TASEP/ASEP
// (K = 1), K-exclusion, the wedge process and its stopping times, currents,
// second-class particles and the envelope coupling.
//
// Conventions. Column i holds h_i; the increment eta_i = h_i - h_{i-1} is the
// particle count at site i. A down jump of column i moves one particle from
// site i to site i+1 (rate p); an up jump moves one back (rate q). Attempts
// that would leave the state space are ignored.
//
// The line is simulated on a window [lo, hi] whose end columns never jump.
// Every run tracks how far the influence of those frozen columns has spread
// (one column per clock ring adjacent to the influenced region), so a result
// is exact for the infinite system whenever the observed sites lie strictly
// between the two fronts.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "growth/randkit.hpp"

namespace growth::exclusion {

struct AsymmetryParams {
    double p = 1.0;  // rate of down jumps (particle moves right)
    double q = 0.0;  // rate of up jumps (particle moves left)

    static AsymmetryParams tasep() { return {1.0, 0.0}; }
    // ArgumentError unless p + q = 1, p > q >= 0.
    void validate() const;
    double drift() const { return p - q; }
};

// Macroscopic flux (p - q) rho (1 - rho) and characteristic speed
// (p - q)(1 - 2 rho) for K = 1.
double flux(double rho, const AsymmetryParams& params = AsymmetryParams::tasep());
double characteristic_speed(double rho, const AsymmetryParams& params = AsymmetryParams::tasep());

class HeightState {
public:
    HeightState(int K, std::int64_t lo, std::vector<std::int64_t> heights, double time = 0.0);

    int K() const { return K_; }
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(h_.size()) - 1; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    std::int64_t at(std::int64_t i) const { return h_[static_cast<std::size_t>(i - lo_)]; }
    std::int64_t& at(std::int64_t i) { return h_[static_cast<std::size_t>(i - lo_)]; }
    // eta_i = h_i - h_{i-1}, lo < i <= hi.
    std::int64_t increment(std::int64_t i) const { return at(i) - at(i - 1); }

    std::span<const std::int64_t> heights() const { return h_; }
    std::span<std::int64_t> heights() { return h_; }

    // 0 <= h_i - h_{i-1} <= K across the window.
    bool valid() const;

    friend bool operator==(const HeightState&, const HeightState&) = default;

private:
    int K_;
    std::int64_t lo_;
    std::vector<std::int64_t> h_;
    double time_;
};

// h_i = i for i <= -1, 0 for i >= 0, on [-W, W].
HeightState init_wedge(std::int64_t W);
// Wedge with apex at column k and height `apex`: apex + (i - k) for i < k, apex for i >= k.
HeightState init_shifted_wedge(std::int64_t lo, std::int64_t hi, std::int64_t k, std::int64_t apex);
// IID Bernoulli(rho) increments on [-W, W] (or [lo, hi], lo <= 0 <= hi) with h_0 = 0.
HeightState init_bernoulli(std::int64_t W, double rho, randkit::Stream& stream);
HeightState init_bernoulli(std::int64_t lo, std::int64_t hi, double rho, randkit::Stream& stream);
// Heights from increments eta_{lo+1..hi} with h at column `anchor` fixed to `anchor_height`.
HeightState init_from_increments(int K, std::int64_t lo, std::span<const std::int64_t> increments,
                                 std::int64_t anchor, std::int64_t anchor_height);

// Half-width W >= |site| + 4 (p + q) horizon (+4 columns of slack).
std::int64_t required_half_width(std::int64_t max_abs_site, const AsymmetryParams& params, double horizon);
// Columns of slack that the boundary influence front exceeds with
// probability below 1e-9: it advances by one at each ring of the adjacent
// column, i.e. like a Poisson process of rate p + q.
std::int64_t influence_margin(const AsymmetryParams& params, double horizon);

// One shared clock for all non-frozen columns: exponential race of total
// rate N (p + q); the ringing column is uniform and the direction is down
// with probability p.
class ClockRace {
public:
    ClockRace(std::int64_t lo, std::int64_t hi, const AsymmetryParams& params, const randkit::SeedSpec& seed);

    struct Tick {
        std::int64_t column;
        int delta;  // -1 down, +1 up
    };
    Tick tick() {
        const auto col = first_ + static_cast<std::int64_t>(stream_.below(count_));
        const int delta = (q_ == 0.0 || stream_.uniform() < p_) ? -1 : +1;
        return {col, delta};
    }
    double gap() { return randkit::sample_exponential(total_rate_, stream_); }
    std::int64_t ticks_in(double dt) { return randkit::sample_poisson(total_rate_ * dt, stream_); }
    double total_rate() const { return total_rate_; }

private:
    randkit::Stream stream_;
    std::int64_t first_;
    std::uint64_t count_;
    double p_, q_, total_rate_;
};

// Applies one attempt; returns true when the jump was executed.
inline bool try_jump(std::span<std::int64_t> h, std::int64_t lo, std::int64_t column, int delta, int K) {
    auto* c = h.data() + (column - lo);
    if (delta < 0) {
        if (c[-1] <= c[0] - 1 && c[1] - (c[0] - 1) <= K) {
            --c[0];
            return true;
        }
        return false;
    }
    if (c[0] + 1 - c[-1] <= K && c[1] >= c[0] + 1) {
        ++c[0];
        return true;
    }
    return false;
}

// Spread of frozen-boundary influence.
struct InfluenceFronts {
    std::int64_t left;
    std::int64_t right;
    void on_tick(std::int64_t column) {
        if (column == left + 1) left = column;
        if (column == right - 1) right = column;
    }
    bool exact(std::int64_t site) const { return site > left && site < right; }
};

struct JumpEvent {
    double time = 0.0;
    std::int64_t column = 0;
    int delta = 0;
};

struct EvolveOptions {
    bool record_events = false;               // executed jumps with exact times
    std::vector<double> snapshot_times;       // increasing, within (start, horizon]
    std::vector<std::int64_t> observe_sites;  // recorded at snapshots; checked for boundary influence
};

struct Snapshot {
    double time = 0.0;
    std::vector<std::int64_t> values;  // heights at observe_sites
};

struct Trajectory {
    HeightState initial;
    HeightState final_state;
    std::vector<JumpEvent> events;
    std::vector<Snapshot> snapshots;
    InfluenceFronts fronts{};
    bool boundary_influenced = false;  // warning: an observed site felt the frozen boundary
    std::uint64_t attempts = 0;
};

// Runs the dynamics from `state` to time state.time() + horizon.
Trajectory evolve(const HeightState& state, const AsymmetryParams& params, double horizon,
                  const randkit::SeedSpec& seed, const EvolveOptions& options = {});

// T(i,j) = inf{t : w_i(t) <= j} for j_min <= j <= 0, j_min <= i <= i_max.
// Entries never reached within the trajectory are empty.
class StoppingTimes {
public:
    StoppingTimes(std::int64_t i_lo, std::int64_t i_hi, std::int64_t j_lo, std::int64_t j_hi);
    std::int64_t i_lo() const { return i_lo_; }
    std::int64_t i_hi() const { return i_hi_; }
    std::int64_t j_lo() const { return j_lo_; }
    std::int64_t j_hi() const { return j_hi_; }
    std::optional<double> at(std::int64_t i, std::int64_t j) const;
    void set(std::int64_t i, std::int64_t j, double t);
    bool contains(std::int64_t i, std::int64_t j) const { return i >= i_lo_ && i <= i_hi_ && j >= j_lo_ && j <= j_hi_; }

private:
    std::size_t index(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>((j - j_lo_) * (i_hi_ - i_lo_ + 1) + (i - i_lo_));
    }
    std::int64_t i_lo_, i_hi_, j_lo_, j_hi_;
    std::vector<double> values_;  // NaN = unreached
};

// Needs a trajectory with recorded events.
StoppingTimes stopping_times(const Trajectory& wedge, std::int64_t i_max, std::int64_t j_min);

// h_i(0) - h_i(t): net particle current across the edge (i, i+1) up to time t.
std::int64_t current(const Trajectory& trajectory, std::int64_t i, double t);

// Stationary runs: Bernoulli(rho) increments, h_0(0) = 0, heights observed at
// sites floor(v t) for every (v, t) pair. samples[rep][v][t].
struct StationarySamples {
    std::vector<double> velocities;
    std::vector<double> times;
    std::vector<std::vector<std::vector<double>>> samples;
    std::size_t boundary_flags = 0;
    std::int64_t half_width = 0;
};
StationarySamples stationary_heights(double rho, const AsymmetryParams& params, std::span<const double> velocities,
                                     std::span<const double> times, std::size_t reps, std::uint64_t seed,
                                     unsigned threads = 0);

struct SecondClassRun {
    std::vector<std::pair<double, std::int64_t>> path;  // (time, Q) at requested times
    std::int64_t final_position = 0;
    bool discarded = false;                             // Q reached the boundary-influenced region
    std::uint64_t invariant_violations = 0;             // events after which the discrepancy count != 1
    std::uint64_t events = 0;
};

// Coupled pair eta <= zeta differing only at the origin at time 0, evolved by
// shared clocks up to `horizon`.
SecondClassRun second_class_run(double rho, const AsymmetryParams& params, double horizon, const randkit::SeedSpec& seed,
                                std::span<const double> record_times = {}, bool check_invariant = false);

struct DriftEstimate {
    double mean = 0.0;  // of Q(t)/t
    double std_error = 0.0;
    std::size_t used = 0;
    std::size_t discarded = 0;
    std::vector<double> positions;  // Q(t) per kept replicate
};
DriftEstimate second_class_drift(double rho, const AsymmetryParams& params, double t, std::size_t reps,
                                 std::uint64_t seed, unsigned threads = 0);

struct VarianceIdentity {
    double lhs = 0.0, lhs_se = 0.0;  // Var h_[vt](t)
    double rhs = 0.0, rhs_se = 0.0;  // rho(1-rho) E|Q(t) - [vt]|
    double ratio = 0.0, ratio_se = 0.0;
};
VarianceIdentity variance_identity_check(double rho, const AsymmetryParams& params, double v, double t,
                                         std::size_t reps, std::uint64_t seed, unsigned threads = 0);

struct ExponentFit {
    double velocity = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;  // grouped jackknife over replicates
    std::vector<double> times;
    std::vector<double> variances;
    double first_half_slope = 0.0;
    double second_half_slope = 0.0;
    double half_difference_se = 0.0;
};
// Least-squares slope of log Var h_[vt](t) against log t for each velocity
// (default: the characteristic speed). The grid needs >= 4 points spanning
// >= 1.5 decades.
std::vector<ExponentFit> characteristic_variance_exponent(double rho, const AsymmetryParams& params,
                                                          std::span<const double> t_grid,
                                                          std::span<const double> velocities, std::size_t reps,
                                                          std::uint64_t seed, unsigned threads = 0);

struct EnvelopeReport {
    std::uint64_t events = 0;
    std::uint64_t checks = 0;
    std::uint64_t mismatches = 0;
    double first_mismatch_time = -1.0;
    bool equal() const { return mismatches == 0; }
};
// Evolves h and every translated wedge h_k(0) + w^(k) (one per column of the
// window) and compares h_i(t) with sup_k of the wedges after every event.
// With shared_clocks = false the wedges follow an independent clock stream.
EnvelopeReport envelope_coupled_run(const HeightState& initial, double horizon, const randkit::SeedSpec& seed,
                                    bool shared_clocks = true);

struct FluxEstimate {
    double flux = 0.0;
    double std_error = 0.0;
    std::int64_t mass = 0;
    std::uint64_t jumps = 0;
};
// Totally asymmetric K-exclusion on a ring of L sites holding rho L units.
// Time-averaged current per site after discarding the first `burn_fraction`
// of the horizon; the error comes from batch means.
FluxEstimate k_exclusion_flux_estimate(int K, double rho, std::int64_t L, double horizon, const randkit::SeedSpec& seed,
                                       double burn_fraction = 0.2, int batches = 20);

struct HeightRow {
    double t = 0;
    std::int64_t site = 0;
    double value = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
};
void write_height_csv(std::ostream& out, std::span<const HeightRow> rows);

struct SecondClassRow {
    double t = 0;
    std::int64_t Q = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
};
void write_second_class_csv(std::ostream& out, std::span<const SecondClassRow> rows);

}  // namespace growth::exclusion

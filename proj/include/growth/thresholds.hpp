#pragma once

// Run sizes, seeds and pass intervals of the acceptance suite. Every
// tolerance change goes through this file and bumps kThresholdsVersion.

#include <cstdint>
#include <vector>

namespace growth {

inline constexpr const char* kThresholdsVersion = "1";

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct Thresholds {
    // 1. corner growth shape G(n,n)/n
    double shape_n = 1000;
    std::uint64_t shape_reps = 200, shape_seed = 1001;
    Interval shape{3.90, 4.02};
    double shape_minutes = 5;

    // 2. wedge TASEP w_0(t)/t
    double wedge_t = 1000;
    std::uint64_t wedge_reps = 100, wedge_seed = 1002;
    Interval wedge{-0.27, -0.23};
    double wedge_minutes = 5;

    // 3. stationary current h_0(t)/t
    double current_rho = 0.5, current_t = 200;
    std::uint64_t current_reps = 500, current_seed = 1003;
    Interval current{-0.26, -0.24};
    double current_minutes = 2;

    // 4. second-class drift Q(t)/t
    double drift_rho = 0.3, drift_t = 200;
    std::uint64_t drift_reps = 2000, drift_seed = 1004;
    Interval drift{0.38, 0.42};
    double drift_minutes = 5;

    // 5. variance-coupling identity lhs/rhs
    double identity_rho = 0.5, identity_v = 0.0, identity_t = 100;
    std::uint64_t identity_reps = 10000, identity_seed = 1005;
    Interval identity{0.9, 1.1};
    double identity_minutes = 15;

    // 6. t^{2/3} exponent along the characteristic, slope 1 off it
    double kpz_rho = 0.5;
    std::vector<double> kpz_times{128, 256, 512, 1024, 2048, 4096};
    double kpz_control_velocity = 0.5;
    std::uint64_t kpz_reps = 400, kpz_seed = 1006;
    Interval kpz{0.55, 0.80};
    Interval kpz_control{0.9, 1.1};
    double kpz_minutes = 60;

    // 7. Ulam constant L_n/n
    double ulam_n = 1000;
    std::uint64_t ulam_reps = 50, ulam_seed = 1007;
    Interval ulam{1.90, 2.00};
    double ulam_minutes = 10;

    // 8. exact-equality oracles
    std::uint64_t exact_seed = 1008;
    int exact_brute_max = 7;
    std::uint64_t exact_superadditive = 200, exact_hammersley = 50, exact_rap = 50, exact_lis = 50,
                  exact_envelope = 10, exact_bijection = 5;
    double exact_rap_tol = 1e-10;
    double exact_minutes = 2;

    // 9. analytic evaluators
    double duality_tol = 1e-8;
    double rate_tol = 1e-9;
    double legendre_tol = 1e-6;
    double derivative_tol = 1e-6;
    double analytic_minutes = 1;

    // 10. Monte Carlo tails
    std::vector<double> lower_tail_ns{1, 2, 3};
    std::vector<double> lower_tail_reps{20000, 20000, 1000000};
    double lower_tail_sigmas = 4;  // |estimate + 1| within this many standard errors
    double upper_tail_x = 2.5;
    std::vector<double> upper_tail_ns{4, 8, 12};
    std::vector<double> upper_tail_reps{200000, 1000000, 2000000};
    Interval upper_tail_last{0.15, 0.47};
    std::uint64_t tail_seed = 1010;
    double tail_minutes = 10;

    // 11. hydrodynamic limit of the wedge
    double hydro_n = 500, hydro_coarse_n = 125, hydro_t = 1;
    std::vector<double> hydro_grid{-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
    std::uint64_t hydro_reps = 20, hydro_seed = 1011;
    double hydro_max_error = 0.05;
    double hydro_minutes = 10;

    // 12. random average process n^{1/4} fluctuations
    std::vector<double> rap_ns{64, 128, 256, 512, 1024, 2048, 4096};
    double rap_alpha = 1, rap_beta = 1, rap_rho = 1, rap_variance = 1;
    std::uint64_t rap_reps = 400, rap_seed = 1012;
    Interval rap{0.35, 0.65};
    double rap_minutes = 30;
};

}  // namespace growth

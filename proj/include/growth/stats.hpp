#pragma once

// Small statistics toolkit shared by the simulators: compensated sums,
// replicate summaries, least-squares slopes with jackknife errors and the
// two-sample Kolmogorov-Smirnov test.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace growth::stats {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double sum(std::span<const double> xs);
double mean(std::span<const double> xs);
// Unbiased sample variance (n-1 denominator); 0 for fewer than two samples.
double sample_variance(std::span<const double> xs);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};
MeanEstimate mean_with_stderr(std::span<const double> xs);

struct VarianceEstimate {
    double variance = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};
// Sample variance with a fourth-moment standard error.
VarianceEstimate variance_with_stderr(std::span<const double> xs);

double pearson(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

// Delete-one-group jackknife. `estimator` receives the replicate indices to
// use; returns the standard error of the full-sample estimate.
double grouped_jackknife_stderr(std::size_t n_items, std::size_t n_groups,
                                const std::function<double(std::span<const std::size_t>)>& estimator);

// Two-sample KS statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);
// Asymptotic critical value c(alpha) * sqrt((n+m)/(n m)).
double ks_critical(std::size_t n, std::size_t m, double alpha);

}  // namespace growth::stats

#include "growth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "growth/errors.hpp"

namespace growth::stats {

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

double sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    CompensatedSum acc;
    for (double x : xs) acc.add((x - m) * (x - m));
    return acc.value() / static_cast<double>(xs.size() - 1);
}

MeanEstimate mean_with_stderr(std::span<const double> xs) {
    MeanEstimate out;
    out.count = xs.size();
    out.mean = mean(xs);
    if (xs.size() >= 2) out.std_error = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
    return out;
}

VarianceEstimate variance_with_stderr(std::span<const double> xs) {
    VarianceEstimate out;
    out.count = xs.size();
    if (xs.size() < 4) {
        out.variance = sample_variance(xs);
        return out;
    }
    const double n = static_cast<double>(xs.size());
    const double m = mean(xs);
    CompensatedSum m2, m4;
    for (double x : xs) {
        const double d2 = (x - m) * (x - m);
        m2.add(d2);
        m4.add(d2 * d2);
    }
    const double mu2 = m2.value() / n;
    const double mu4 = m4.value() / n;
    out.variance = m2.value() / (n - 1.0);
    const double var_of_var = (mu4 - (n - 3.0) / (n - 1.0) * mu2 * mu2) / n;
    out.std_error = std::sqrt(std::max(var_of_var, 0.0));
    return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ArgumentError("pearson: need two equal-length samples");
    const double mx = mean(xs), my = mean(ys);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mx, dy = ys[k] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    const double denom = std::sqrt(sxx.value() * syy.value());
    return denom > 0.0 ? sxy.value() / denom : 0.0;
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ArgumentError("least_squares: need two equal-length samples");
    const double mx = mean(xs), my = mean(ys);
    CompensatedSum sxy, sxx;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy.add((xs[k] - mx) * (ys[k] - my));
        sxx.add((xs[k] - mx) * (xs[k] - mx));
    }
    if (sxx.value() == 0.0) throw ArgumentError("least_squares: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double grouped_jackknife_stderr(std::size_t n_items, std::size_t n_groups,
                                const std::function<double(std::span<const std::size_t>)>& estimator) {
    n_groups = std::min(n_groups, n_items);
    if (n_groups < 2) return 0.0;
    std::vector<double> leave_out(n_groups);
    std::vector<std::size_t> keep;
    keep.reserve(n_items);
    for (std::size_t g = 0; g < n_groups; ++g) {
        keep.clear();
        for (std::size_t k = 0; k < n_items; ++k) {
            if (k % n_groups != g) keep.push_back(k);
        }
        leave_out[g] = estimator(keep);
    }
    const double m = mean(leave_out);
    CompensatedSum acc;
    for (double v : leave_out) acc.add((v - m) * (v - m));
    const double g = static_cast<double>(n_groups);
    return std::sqrt((g - 1.0) / g * acc.value());
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ArgumentError("ks_statistic: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("ks_critical: bad arguments");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace growth::stats

#pragma once

// One-dimensional optimization and quadrature used by the variational
// evaluators.

#include <functional>

namespace growth::numerics {

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search on [lo, hi]; stops when the bracket is below `xtol`.
// Exact for unimodal objectives; the best endpoint is also considered so a
// boundary optimum is never lost.
Extremum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-9);
Extremum golden_minimize(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-9);

// Adaptive Simpson quadrature with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                        int max_depth = 50);

}  // namespace growth::numerics

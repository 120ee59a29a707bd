#include "growth/numerics.hpp"

#include <cmath>

#include "growth/errors.hpp"

namespace growth::numerics {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Extremum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    if (!(hi >= lo)) throw ArgumentError("golden_maximize: empty bracket");
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    Extremum best{fc >= fd ? c : d, fc >= fd ? fc : fd};
    for (double edge : {lo, hi}) {
        const double fe = f(edge);
        if (fe > best.value) best = {edge, fe};
    }
    return best;
}

Extremum golden_minimize(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const Extremum r = golden_maximize([&](double x) { return -f(x); }, lo, hi, xtol);
    return {r.x, -r.value};
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace growth::numerics

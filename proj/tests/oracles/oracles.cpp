#include "oracles.hpp"

#include <algorithm>
#include <vector>

namespace oracles {

double lpp_brute_force(const std::function<double(std::int64_t, std::int64_t)>& y, std::int64_t k0, std::int64_t l0,
                       std::int64_t m, std::int64_t n) {
    double best = -1.0;
    std::function<void(std::int64_t, std::int64_t, double)> walk = [&](std::int64_t i, std::int64_t j, double acc) {
        acc += y(i, j);
        if (i == m && j == n) {
            best = std::max(best, acc);
            return;
        }
        if (i < m) walk(i + 1, j, acc);
        if (j < n) walk(i, j + 1, acc);
    };
    walk(k0, l0, 0.0);
    return best;
}

std::int64_t lis_quadratic(std::span<const growth::randkit::PlanarPoint> points) {
    std::vector<growth::randkit::PlanarPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    std::vector<std::int64_t> best(pts.size(), 1);
    std::int64_t overall = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (pts[j].x < pts[i].x && pts[j].time < pts[i].time) best[i] = std::max(best[i], best[j] + 1);
        }
        overall = std::max(overall, best[i]);
    }
    return overall;
}

}  // namespace oracles

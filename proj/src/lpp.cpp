#include "growth/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"
#include "growth/stats.hpp"

namespace growth::lpp {

using randkit::Orientation;
using randkit::WeightField;

PassageGrid::PassageGrid(GridKind kind, std::int64_t k_lo, std::int64_t k_hi, std::int64_t l_lo, std::int64_t l_hi)
    : kind_(kind), k_lo_(k_lo), k_hi_(k_hi), l_lo_(l_lo), l_hi_(l_hi) {
    if (k_hi < k_lo || l_hi < l_lo) throw ArgumentError("PassageGrid: empty box");
    values_.assign(static_cast<std::size_t>((k_hi - k_lo + 1) * (l_hi - l_lo + 1)), 0.0);
}

bool PassageGrid::in_support(std::int64_t k, std::int64_t l) const {
    if (kind_ == GridKind::G) return k >= 1 && l >= 1;
    return l < 0 && l < k;
}

double PassageGrid::at(std::int64_t k, std::int64_t l) const {
    if (!in_support(k, l)) return 0.0;
    if (!contains(k, l)) {
        throw DomainError("cell (" + std::to_string(k) + "," + std::to_string(l) + ") is outside the grid");
    }
    return values_[index(k, l)];
}

PassageGrid passage_times_G(const WeightField& field, std::int64_t K, std::int64_t L) {
    if (field.orientation() != Orientation::Quadrant) throw ArgumentError("passage_times_G: need a quadrant field");
    return passage_times_G([&field](std::int64_t i, std::int64_t j) { return field.quadrant_unchecked(i, j); }, K, L);
}

PassageGrid passage_times_G(const WeightFn& weight, std::int64_t K, std::int64_t L) {
    if (K < 1 || L < 1) throw ArgumentError("passage_times_G: extents must be positive");
    PassageGrid grid(GridKind::G, 1, K, 1, L);
    for (std::int64_t l = 1; l <= L; ++l) {
        for (std::int64_t k = 1; k <= K; ++k) {
            const double left = k > 1 ? grid.at(k - 1, l) : 0.0;
            const double below = l > 1 ? grid.at(k, l - 1) : 0.0;
            grid.set(k, l, std::max(left, below) + weight(k, l));
        }
    }
    return grid;
}

double passage_time_G(const WeightField& field, std::int64_t K, std::int64_t L) {
    if (K < 1 || L < 1) throw ArgumentError("passage_time_G: extents must be positive");
    if (field.orientation() != Orientation::Quadrant) throw ArgumentError("passage_time_G: need a quadrant field");
    // Sweep lines of the longer direction; the buffer spans the shorter one.
    const bool transpose = K > L;
    const std::int64_t width = transpose ? L : K;
    const std::int64_t depth = transpose ? K : L;
    std::vector<double> line(static_cast<std::size_t>(width), 0.0);
    for (std::int64_t d = 1; d <= depth; ++d) {
        double prev = 0.0;
        for (std::int64_t w = 1; w <= width; ++w) {
            double& cell = line[static_cast<std::size_t>(w - 1)];
            const double y = transpose ? field.quadrant_unchecked(d, w) : field.quadrant_unchecked(w, d);
            cell = std::max(prev, cell) + y;
            prev = cell;
        }
    }
    return line.back();
}

double passage_between(const WeightField& field, Site from, Site to) {
    if (field.orientation() != Orientation::Quadrant) throw ArgumentError("passage_between: need a quadrant field");
    const std::int64_t k0 = std::max<std::int64_t>(from.i, 0) + 1;
    const std::int64_t l0 = std::max<std::int64_t>(from.j, 0) + 1;
    if (to.i < k0 || to.j < l0) return 0.0;
    const std::int64_t K = to.i - k0 + 1, L = to.j - l0 + 1;
    std::vector<double> line(static_cast<std::size_t>(K), 0.0);
    for (std::int64_t l = 0; l < L; ++l) {
        double prev = 0.0;
        for (std::int64_t k = 0; k < K; ++k) {
            double& cell = line[static_cast<std::size_t>(k)];
            cell = std::max(prev, cell) + field.quadrant_unchecked(k0 + k, l0 + l);
            prev = cell;
        }
    }
    return line.back();
}

LatticePath argmax_path(const PassageGrid& grid, Site endpoint) {
    if (grid.kind() != GridKind::G) throw ArgumentError("argmax_path: need a G grid");
    if (endpoint.i < 1 || endpoint.j < 1 || !grid.contains(endpoint.i, endpoint.j)) {
        throw DomainError("argmax_path: endpoint outside the grid");
    }
    LatticePath path;
    Site cur = endpoint;
    path.push_back(cur);
    while (cur.i > 1 || cur.j > 1) {
        if (cur.i == 1) {
            --cur.j;
        } else if (cur.j == 1) {
            --cur.i;
        } else if (grid.at(cur.i - 1, cur.j) >= grid.at(cur.i, cur.j - 1)) {
            --cur.i;
        } else {
            --cur.j;
        }
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

bool is_up_right_path(const LatticePath& path) {
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto di = path[k].i - path[k - 1].i, dj = path[k].j - path[k - 1].j;
        if (!((di == 1 && dj == 0) || (di == 0 && dj == 1))) return false;
    }
    return true;
}

bool is_wedge_path(const LatticePath& path) {
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto di = path[k].i - path[k - 1].i, dj = path[k].j - path[k - 1].j;
        if (!((di == 1 && dj == 0) || (di == -1 && dj == -1))) return false;
    }
    return true;
}

PassageGrid passage_times_H(const WeightField& field, const HExtent& extent) {
    if (field.orientation() != Orientation::TasepWedge) throw ArgumentError("passage_times_H: need a wedge field");
    PassageGrid grid(GridKind::H, extent.k_lo, extent.k_hi, extent.l_lo, extent.l_hi);
    const std::int64_t bottom = extent.l_lo;
    if (bottom >= 0) return grid;
    // Row l is needed for k in (l, k_hi + (l - bottom)]; it reads row l+1 at k+1.
    std::vector<double> above;  // row l+1, index k - (l+2)
    std::vector<double> row;
    for (std::int64_t l = -1; l >= bottom; --l) {
        const std::int64_t first = l + 1;
        const std::int64_t last = extent.k_hi + (l - bottom);
        row.assign(static_cast<std::size_t>(std::max<std::int64_t>(last - first + 1, 0)), 0.0);
        for (std::int64_t k = first; k <= last; ++k) {
            const double left = k - 1 > l ? row[static_cast<std::size_t>(k - 1 - first)] : 0.0;
            double up = 0.0;
            if (l + 1 < 0) {
                const std::int64_t idx = (k + 1) - (l + 2);
                if (idx >= 0 && idx < static_cast<std::int64_t>(above.size())) up = above[static_cast<std::size_t>(idx)];
            }
            const double v = std::max(left, up) + field.quadrant_unchecked(k - l, -l);
            row[static_cast<std::size_t>(k - first)] = v;
            if (grid.contains(k, l)) grid.set(k, l, v);
        }
        above.swap(row);
    }
    return grid;
}

double gamma_oracle(double x, double y) {
    if (x < 0.0 || y < 0.0 || std::isnan(x) || std::isnan(y)) throw ArgumentError("gamma_oracle: negative input");
    const double r = std::sqrt(x) + std::sqrt(y);
    return r * r;
}

ShapeEstimate estimate_shape(const randkit::WeightLaw& law, double x, double y, double n, std::size_t replicates,
                             std::uint64_t seed, unsigned threads) {
    if (!(n >= 1.0)) throw ArgumentError("estimate_shape: n must be >= 1");
    if (replicates < 1) throw ArgumentError("estimate_shape: need at least one replicate");
    if (x < 0.0 || y < 0.0) throw ArgumentError("estimate_shape: direction must be nonnegative");
    const auto K = static_cast<std::int64_t>(std::floor(n * x));
    const auto L = static_cast<std::int64_t>(std::floor(n * y));
    ShapeEstimate est;
    est.replicates = replicates;
    est.samples = run_replicates(replicates, threads, [&](std::size_t rep) {
        if (K < 1 || L < 1) return 0.0;
        const WeightField field({seed, rep, randkit::purpose::kWeights}, law);
        return passage_time_G(field, K, L) / n;
    });
    const auto summary = stats::mean_with_stderr(est.samples);
    est.mean = summary.mean;
    est.std_error = summary.std_error;
    return est;
}

void write_shape_csv(std::ostream& out, const std::vector<ShapeRow>& rows) {
    out << "model,law,x,y,n,replicates,mean,stderr,seed\n";
    out.precision(12);
    for (const auto& r : rows) {
        out << r.model << ',' << r.law << ',' << r.x << ',' << r.y << ',' << r.n << ',' << r.replicates << ','
            << r.mean << ',' << r.std_error << ',' << r.seed << '\n';
    }
}

}  // namespace growth::lpp

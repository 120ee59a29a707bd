#pragma once

// Directed last-passage percolation: the corner-growth passage times G on the
// positive quadrant, their relabeled version H on the wedge region j < 0 ^ i,
// maximizing paths, superadditive point-to-point values and the exponential
// limit shape.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "growth/randkit.hpp"

namespace growth::lpp {

enum class GridKind { G, H };

struct Site {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const Site&, const Site&) = default;
};

// Passage times over the box [k_lo,k_hi] x [l_lo,l_hi]. Cells outside the
// model's support (outside the quadrant for G, l >= 0 ^ k for H) read 0.
class PassageGrid {
public:
    PassageGrid(GridKind kind, std::int64_t k_lo, std::int64_t k_hi, std::int64_t l_lo, std::int64_t l_hi);

    GridKind kind() const { return kind_; }
    std::int64_t k_lo() const { return k_lo_; }
    std::int64_t k_hi() const { return k_hi_; }
    std::int64_t l_lo() const { return l_lo_; }
    std::int64_t l_hi() const { return l_hi_; }

    bool contains(std::int64_t k, std::int64_t l) const {
        return k >= k_lo_ && k <= k_hi_ && l >= l_lo_ && l <= l_hi_;
    }
    // Boundary convention outside the support, stored value inside the box,
    // DomainError for support cells beyond the box.
    double at(std::int64_t k, std::int64_t l) const;
    void set(std::int64_t k, std::int64_t l, double v) { values_[index(k, l)] = v; }

private:
    std::size_t index(std::int64_t k, std::int64_t l) const {
        return static_cast<std::size_t>((l - l_lo_) * (k_hi_ - k_lo_ + 1) + (k - k_lo_));
    }
    bool in_support(std::int64_t k, std::int64_t l) const;

    GridKind kind_;
    std::int64_t k_lo_, k_hi_, l_lo_, l_hi_;
    std::vector<double> values_;
};

using LatticePath = std::vector<Site>;

// Explicit quadrant weights Y(i,j), for hand-built or perturbed instances.
using WeightFn = std::function<double(std::int64_t, std::int64_t)>;

// Full table G(k,l), 1 <= k <= K, 1 <= l <= L, from the max-plus recursion.
PassageGrid passage_times_G(const randkit::WeightField& field, std::int64_t K, std::int64_t L);
PassageGrid passage_times_G(const WeightFn& weight, std::int64_t K, std::int64_t L);

// G(K,L) alone, keeping one line of min(K,L) cells.
double passage_time_G(const randkit::WeightField& field, std::int64_t K, std::int64_t L);

// Max over up-right paths from (k+1,l+1) to (m,n); 0 when that family is empty.
double passage_between(const randkit::WeightField& field, Site from, Site to);

// Maximizing path from (1,1) to `endpoint`, recovered from the table; ties
// prefer the horizontal predecessor (k-1,l).
LatticePath argmax_path(const PassageGrid& grid, Site endpoint);

bool is_up_right_path(const LatticePath& path);
// Steps (1,0) or (-1,-1).
bool is_wedge_path(const LatticePath& path);

struct HExtent {
    std::int64_t k_lo = 0;
    std::int64_t k_hi = 0;
    std::int64_t l_lo = -1;
    std::int64_t l_hi = -1;
};

// H(k,l) = H(k-1,l) v H(k+1,l+1) + X(k,l) on l < 0 ^ k, zero elsewhere, over
// the requested box. The field must be in TasepWedge orientation.
PassageGrid passage_times_H(const randkit::WeightField& field, const HExtent& extent);

// (sqrt(x) + sqrt(y))^2; ArgumentError for negative input.
double gamma_oracle(double x, double y);

struct ShapeEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
    std::vector<double> samples;  // G([nx],[ny]) / n per replicate
};

// Replicate mean of G([nx],[ny])/n with independent weight fields
// (stream_id = replicate index).
ShapeEstimate estimate_shape(const randkit::WeightLaw& law, double x, double y, double n, std::size_t replicates,
                             std::uint64_t seed, unsigned threads = 0);

struct ShapeRow {
    std::string model;
    std::string law;
    double x = 0, y = 0, n = 0;
    std::size_t replicates = 0;
    double mean = 0, std_error = 0;
    std::uint64_t seed = 0;
};

void write_shape_csv(std::ostream& out, const std::vector<ShapeRow>& rows);

}  // namespace growth::lpp

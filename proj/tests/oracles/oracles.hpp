#pragma once

// Slow, independent reference computations used only to check the library.

#include <cstdint>
#include <functional>
#include <span>

#include "growth/randkit.hpp"

namespace oracles {

// Max over all up-right paths from (k0,l0) to (m,n), by exhaustive search.
double lpp_brute_force(const std::function<double(std::int64_t, std::int64_t)>& y, std::int64_t k0, std::int64_t l0,
                       std::int64_t m, std::int64_t n);

// O(P^2) longest chain strictly increasing in both coordinates.
std::int64_t lis_quadratic(std::span<const growth::randkit::PlanarPoint> points);

}  // namespace oracles

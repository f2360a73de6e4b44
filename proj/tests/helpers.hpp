#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "depthlab/cloud.hpp"
#include "depthlab/geom.hpp"
#include "depthlab/rng.hpp"

namespace depthlab::testing {

// Gaussian cloud; every few draws gets a twist: heavy tails or duplicated
// points, so degenerate configurations show up in property tests.
inline PointCloud random_cloud(std::uint64_t seed, int n, bool allow_degenerate = true) {
    Rng rng(seed);
    std::vector<double> data;
    data.reserve(2 * static_cast<std::size_t>(n));
    const int flavor = allow_degenerate ? static_cast<int>(seed % 4) : 0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(), y = rng.normal();
        if (flavor == 1) {  // heavy tails
            const double s = 1.0 / std::sqrt(rng.chi_square(2.1) / 2.1);
            x *= s;
            y *= s;
        } else if (flavor == 2 && i % 3 == 0 && i > 0) {  // duplicates
            x = data[2 * (i - 1)];
            y = data[2 * (i - 1) + 1];
        } else if (flavor == 3) {  // collinear
            y = 0.5 * x;
        }
        data.push_back(x);
        data.push_back(y);
    }
    return PointCloud(2, std::move(data));
}

// Equality up to tol as sets: every vertex of each region lies inside the
// other (within tol). For convex regions this bounds the Hausdorff
// distance; vertex lists may differ by sliver vertices at the tol scale.
inline bool region_close(const ConvexRegion& a, const ConvexRegion& b, double tol = 1e-9) {
    if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
    for (const Point2& p : a.vertices)
        if (!b.contains(p, tol)) return false;
    for (const Point2& p : b.vertices)
        if (!a.contains(p, tol)) return false;
    return true;
}

}  // namespace depthlab::testing

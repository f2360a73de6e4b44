#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "depthlab/cloud.hpp"
#include "depthlab/geom.hpp"

namespace depthlab {

// Exact rational depth value: count / n.
struct DepthValue {
    int count = 0;
    int n = 0;
    double value() const { return static_cast<double>(count) / static_cast<double>(n); }
};

struct DepthRegionResult {
    int level = 0;
    int n = 0;
    ConvexRegion region;
};

struct TukeyMedianResult {
    Point2 median;
    ConvexRegion set;
    int level = 0;  // k*
};

DepthValue depth_1d(const PointCloud& cloud, double z);

// Exact halfspace depth in the plane via an angular sweep over the
// critical directions (those orthogonal to some X_j - z) and the open
// arcs between them. Points coincident with z count in every halfplane.
DepthValue depth_exact_2d(const PointCloud& cloud, const Point2& z);

// Independent verification oracle (d <= 2, n <= 500): evaluates the
// closed count at explicitly rotated directions and angle bisectors by
// direct dot-product loops. Shares no code with the sweep.
DepthValue depth_oracle(const PointCloud& cloud, std::span<const double> z);

// Monte Carlo upper bound: min over n_dirs sampled directions augmented
// with the normalized X_j - z. Always >= the exact depth.
DepthValue depth_approx(const PointCloud& cloud, std::span<const double> z, int n_dirs,
                        std::uint64_t seed);

// Sweep engine for depth regions of a fixed 2-d cloud. Builds the sorted
// list of pairwise critical directions once; region queries for different
// levels reuse it.
class RegionSweep {
public:
    explicit RegionSweep(const PointCloud& cloud);

    // { z : n D_n(z) >= k } as the intersection of support halfplanes
    // over the critical directions.
    ConvexRegion region(int k) const;

    // Largest k with a nonempty region, by binary search over
    // [ceil(n/3), ceil(n/2)].
    int max_level() const;

    int sample_size() const { return n_; }

private:
    struct Event {
        double angle;
        std::int32_t i, j;
    };

    int n_ = 0;
    std::vector<Point2> pts_;
    std::vector<Event> events_;  // sorted by angle in [0, 2pi)
    double start_angle_ = 0.0;
    std::vector<std::int32_t> start_order_;  // descending projection at start_angle_
    bool all_coincident_ = false;
    mutable int cached_max_level_ = -1;
};

int max_depth(const PointCloud& cloud);
DepthRegionResult depth_region(const PointCloud& cloud, int k);

// Recompute-per-direction fallback; differential reference for the sweep.
DepthRegionResult depth_region_slow(const PointCloud& cloud, int k);

TukeyMedianResult tukey_median(const PointCloud& cloud);

std::vector<DepthRegionResult> depth_contours(const PointCloud& cloud,
                                              const std::vector<int>& levels);

// Approximate Stahel-Donoho location estimate. Outlyingness is maximized
// over sampled directions; weights are min(1, (c/O)^2) with c the median
// outlyingness. A surrogate, not the exact enumerated estimator.
std::vector<double> stahel_donoho_approx(const PointCloud& cloud, int n_dirs,
                                         std::uint64_t seed);

std::string region_result_to_json(const DepthRegionResult& r);

}  // namespace depthlab

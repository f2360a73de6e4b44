#include "depthlab/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "depthlab/rng.hpp"

namespace depthlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kAngleTol = 1e-12;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

void require_dim(const PointCloud& cloud, std::size_t d, const char* op) {
    if (cloud.dim() != d) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

}  // namespace

DepthValue depth_1d(const PointCloud& cloud, double z) {
    require_dim(cloud, 1, "depth_1d");
    int le = 0, ge = 0;
    const std::size_t n = cloud.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = cloud.at(i, 0);
        le += (x <= z);
        ge += (x >= z);
    }
    return {std::min(le, ge), static_cast<int>(n)};
}

DepthValue depth_exact_2d(const PointCloud& cloud, const Point2& z) {
    require_dim(cloud, 2, "depth_exact_2d");
    const std::size_t n = cloud.size();

    int coincident = 0;
    std::vector<double> theta;
    theta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = cloud.point2(i);
        if (p.x == z.x && p.y == z.y) {
            ++coincident;
        } else {
            theta.push_back(std::atan2(p.y - z.y, p.x - z.x));
        }
    }
    if (theta.empty()) return {static_cast<int>(n), static_cast<int>(n)};
    std::sort(theta.begin(), theta.end());

    // Unwrapped copy for circular interval counting.
    std::vector<double> ext(theta);
    ext.reserve(theta.size() * 2);
    for (double t : theta) ext.push_back(t + kTwoPi);

    // Closed count of directions within [a - pi/2, a + pi/2].
    auto closed_count = [&](double a) {
        double lo = a - M_PI / 2.0;
        while (lo < theta.front()) lo += kTwoPi;
        while (lo > theta.front() + kTwoPi) lo -= kTwoPi;
        const auto first = std::lower_bound(ext.begin(), ext.end(), lo - kAngleTol);
        const auto last = std::upper_bound(ext.begin(), ext.end(), lo + M_PI + kAngleTol);
        return static_cast<int>(last - first);
    };

    // Critical directions: orthogonal to some X_j - z, both orientations.
    std::vector<double> crit;
    crit.reserve(theta.size() * 2);
    for (double t : theta) {
        crit.push_back(wrap_angle(t + M_PI / 2.0));
        crit.push_back(wrap_angle(t - M_PI / 2.0));
    }
    std::sort(crit.begin(), crit.end());

    int best = static_cast<int>(n);
    for (std::size_t i = 0; i < crit.size(); ++i) {
        best = std::min(best, closed_count(crit[i]));
        // Interior of the arc up to the next critical direction.
        const double next = (i + 1 < crit.size()) ? crit[i + 1] : crit[0] + kTwoPi;
        if (next - crit[i] > kAngleTol) {
            best = std::min(best, closed_count((crit[i] + next) / 2.0));
        }
    }
    return {best + coincident, static_cast<int>(n)};
}

DepthValue depth_oracle(const PointCloud& cloud, std::span<const double> z) {
    if (cloud.dim() > 2) throw std::invalid_argument("depth_oracle: d <= 2 required");
    if (cloud.size() > 500) throw std::invalid_argument("depth_oracle: n <= 500 required");
    if (z.size() != cloud.dim()) throw std::invalid_argument("depth_oracle: dimension mismatch");
    const int n = static_cast<int>(cloud.size());

    if (cloud.dim() == 1) {
        int le = 0, ge = 0;
        for (int i = 0; i < n; ++i) {
            le += (cloud.at(i, 0) <= z[0]);
            ge += (cloud.at(i, 0) >= z[0]);
        }
        return {std::min(le, ge), n};
    }

    auto count_dir = [&](double ux, double uy) {
        int c = 0;
        for (int i = 0; i < n; ++i) {
            const double wx = cloud.at(i, 0) - z[0];
            const double wy = cloud.at(i, 1) - z[1];
            if (wx * ux + wy * uy >= 0.0) ++c;
        }
        return c;
    };

    // Critical normals: both rotations of every X_j - z by 90 degrees. The
    // count is constant on the open arcs between consecutive ones, so the
    // minimum over all normals is attained at a critical normal or an arc
    // midpoint.
    std::vector<double> normals;
    int best = n;
    for (int j = 0; j < n; ++j) {
        const double wx = cloud.at(j, 0) - z[0];
        const double wy = cloud.at(j, 1) - z[1];
        if (wx == 0.0 && wy == 0.0) continue;
        const double norm = std::hypot(wx, wy);
        best = std::min(best, count_dir(wy / norm, -wx / norm));
        best = std::min(best, count_dir(-wy / norm, wx / norm));
        const double a = std::atan2(wy, wx);
        normals.push_back(a + M_PI / 2.0);
        normals.push_back(a - M_PI / 2.0);
    }
    if (normals.empty()) return {n, n};

    for (double& a : normals) {
        a = std::fmod(a, kTwoPi);
        if (a < 0.0) a += kTwoPi;
    }
    std::sort(normals.begin(), normals.end());
    const std::size_t m = normals.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double a = normals[i];
        const double b = (i + 1 < m) ? normals[i + 1] : normals[0] + kTwoPi;
        const double mid = (a + b) / 2.0;
        best = std::min(best, count_dir(std::cos(mid), std::sin(mid)));
    }
    return {best, n};
}

DepthValue depth_approx(const PointCloud& cloud, std::span<const double> z, int n_dirs,
                        std::uint64_t seed) {
    if (n_dirs < 1) throw std::invalid_argument("depth_approx: n_dirs >= 1 required");
    if (z.size() != cloud.dim()) throw std::invalid_argument("depth_approx: dimension mismatch");
    const std::size_t d = cloud.dim();
    const std::size_t n = cloud.size();

    std::vector<std::vector<double>> dirs;
    dirs.reserve(static_cast<std::size_t>(n_dirs) + n);
    Rng rng(seed);
    for (int k = 0; k < n_dirs; ++k) dirs.push_back(rng.sphere(d));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> w(d);
        double norm2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            w[c] = cloud.at(j, c) - z[c];
            norm2 += w[c] * w[c];
        }
        if (norm2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : w) c *= inv;
        dirs.push_back(std::move(w));
    }

    int best = static_cast<int>(n);
    for (const auto& u : dirs) {
        int c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += (cloud.at(j, k) - z[k]) * u[k];
            c += (s >= 0.0);
        }
        best = std::min(best, c);
    }
    return {best, static_cast<int>(n)};
}

RegionSweep::RegionSweep(const PointCloud& cloud) {
    require_dim(cloud, 2, "RegionSweep");
    n_ = static_cast<int>(cloud.size());
    pts_.reserve(n_);
    for (int i = 0; i < n_; ++i) pts_.push_back(cloud.point2(i));

    for (std::int32_t i = 0; i < n_; ++i) {
        for (std::int32_t j = i + 1; j < n_; ++j) {
            const double vx = pts_[i].x - pts_[j].x;
            const double vy = pts_[i].y - pts_[j].y;
            if (vx == 0.0 && vy == 0.0) continue;
            const double base = std::atan2(vy, vx);
            events_.push_back({wrap_angle(base + M_PI / 2.0), i, j});
            events_.push_back({wrap_angle(base - M_PI / 2.0), i, j});
        }
    }
    if (events_.empty()) {
        all_coincident_ = true;
        return;
    }
    std::sort(events_.begin(), events_.end(),
              [](const Event& a, const Event& b) { return a.angle < b.angle; });

    // Start in the middle of the widest critical-angle gap.
    double best_gap = events_.front().angle + kTwoPi - events_.back().angle;
    start_angle_ = events_.back().angle + best_gap / 2.0;
    for (std::size_t i = 0; i + 1 < events_.size(); ++i) {
        const double gap = events_[i + 1].angle - events_[i].angle;
        if (gap > best_gap) {
            best_gap = gap;
            start_angle_ = events_[i].angle + gap / 2.0;
        }
    }
    start_angle_ = wrap_angle(start_angle_);

    const double ux = std::cos(start_angle_), uy = std::sin(start_angle_);
    start_order_.resize(n_);
    std::iota(start_order_.begin(), start_order_.end(), 0);
    std::stable_sort(start_order_.begin(), start_order_.end(), [&](std::int32_t a, std::int32_t b) {
        return pts_[a].x * ux + pts_[a].y * uy > pts_[b].x * ux + pts_[b].y * uy;
    });
}

ConvexRegion RegionSweep::region(int k) const {
    if (k < 1 || k > n_) throw std::invalid_argument("depth_region: level out of range");
    if (all_coincident_) return ConvexRegion::make_point(pts_[0]);

    std::vector<std::int32_t> order(start_order_);
    std::vector<std::int32_t> pos(n_);
    for (int p = 0; p < n_; ++p) pos[order[p]] = p;

    // Start from a padded data bounding box: the region sits inside the
    // hull, and keeping the initial polygon at data scale keeps clipping
    // arithmetic accurate.
    Point2 lo = pts_[0], hi = pts_[0];
    for (const Point2& p : pts_) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    const double pad = 1.0 + 0.5 * std::max(hi.x - lo.x, hi.y - lo.y);
    HalfPlaneClipper clipper({lo.x - pad, lo.y - pad}, {hi.x + pad, hi.y + pad});
    const auto add_at = [&](double angle, const Point2& p) {
        const double ux = std::cos(angle), uy = std::sin(angle);
        clipper.add({Point2{ux, uy}, p.x * ux + p.y * uy});
    };
    // On an arc where the k-th ranked point p is fixed, every support line
    // passes through p, so the intersection over the arc reduces to its
    // endpoint halfplanes -- valid only while consecutive normals span
    // less than pi. Wide arcs get interior halfplanes.
    const auto subdivide = [&](double a0, double a1, const Point2& p) {
        const double gap = a1 - a0;
        if (gap <= M_PI / 2.0) return;
        const int sub = static_cast<int>(std::ceil(gap / (M_PI / 2.0)));
        for (int t = 1; t < sub; ++t) add_at(a0 + gap * t / sub, p);
    };

    const std::size_t m = events_.size();
    // The maintained order is exact at start_angle_, so the sweep must
    // begin with the first event past it (unwrapping the earlier ones).
    const std::size_t first =
        static_cast<std::size_t>(std::upper_bound(events_.begin(), events_.end(), start_angle_,
                                                  [](double a, const Event& e) {
                                                      return a < e.angle;
                                                  }) -
                                 events_.begin());
    const auto unwrapped = [&](std::size_t t) {  // t counts from the rotated start
        return events_[(first + t) % m].angle + (first + t >= m ? kTwoPi : 0.0);
    };

    std::int32_t cur = order[k - 1];
    double arc_start = start_angle_;
    double first_change = 0.0;
    bool any_change = false;

    std::size_t g = 0;
    while (g < m) {
        const double group_angle = unwrapped(g);
        std::size_t g_end = g + 1;
        while (g_end < m && unwrapped(g_end) - group_angle <= kAngleTol) ++g_end;
        const double next_angle = (g_end < m) ? unwrapped(g_end) : unwrapped(0) + kTwoPi;
        const double last_angle = unwrapped(g_end - 1);

        const Event& e0 = events_[(first + g) % m];
        if (g_end == g + 1 && std::abs(pos[e0.i] - pos[e0.j]) == 1) {
            // Generic case: a single crossing of adjacent elements.
            std::swap(order[pos[e0.i]], order[pos[e0.j]]);
            std::swap(pos[e0.i], pos[e0.j]);
        } else {
            // Simultaneous crossings: re-sort the affected span by the
            // projection just past the group.
            int lo = n_, hi = -1;
            for (std::size_t e = g; e < g_end; ++e) {
                const Event& ev = events_[(first + e) % m];
                lo = std::min({lo, pos[ev.i], pos[ev.j]});
                hi = std::max({hi, pos[ev.i], pos[ev.j]});
            }
            const double probe = (last_angle + next_angle) / 2.0;
            const double px = std::cos(probe), py = std::sin(probe);
            std::stable_sort(order.begin() + lo, order.begin() + hi + 1,
                             [&](std::int32_t a, std::int32_t b) {
                                 return pts_[a].x * px + pts_[a].y * py >
                                        pts_[b].x * px + pts_[b].y * py;
                             });
            for (int p = lo; p <= hi; ++p) pos[order[p]] = p;
        }

        const std::int32_t next_kth = order[k - 1];
        if (next_kth != cur) {
            // The two ranked points tie at the crossing angle, so both
            // support lines are emitted there.
            if (any_change) {
                subdivide(arc_start, group_angle, pts_[cur]);
            } else {
                any_change = true;
                first_change = group_angle;  // head arc merges with the tail arc
            }
            add_at(group_angle, pts_[cur]);
            add_at(group_angle, pts_[next_kth]);
            if (clipper.empty()) return ConvexRegion::make_empty();
            arc_start = group_angle;
            cur = next_kth;
        }
        g = g_end;
    }

    if (any_change) {
        // Tail arc wraps around to the head arc; cur is back to the
        // starting k-th point.
        subdivide(arc_start, first_change + kTwoPi, pts_[cur]);
    } else {
        // Constant k-th point over the whole circle: the region is that
        // point, pinned by four orthogonal support lines.
        add_at(start_angle_, pts_[cur]);
        subdivide(start_angle_, start_angle_ + kTwoPi, pts_[cur]);
    }
    if (clipper.empty()) return ConvexRegion::make_empty();
    return clipper.finish();
}

int RegionSweep::max_level() const {
    if (cached_max_level_ >= 0) return cached_max_level_;
    if (all_coincident_) return cached_max_level_ = n_;

    const int hi_bound = (n_ + 1) / 2;
    int lo = (n_ + 2) / 3;  // ceil(n/3)

    // Improve the lower bound with the depth of the coordinatewise median.
    {
        std::vector<double> xs(n_), ys(n_);
        for (int i = 0; i < n_; ++i) {
            xs[i] = pts_[i].x;
            ys[i] = pts_[i].y;
        }
        std::nth_element(xs.begin(), xs.begin() + n_ / 2, xs.end());
        std::nth_element(ys.begin(), ys.begin() + n_ / 2, ys.end());
        PointCloud cloud = PointCloud::from_points_2d(pts_);
        const int at_median = depth_exact_2d(cloud, {xs[n_ / 2], ys[n_ / 2]}).count;
        lo = std::max(lo, at_median);
    }
    lo = std::min(lo, hi_bound);
    while (lo > 1 && region(lo).is_empty()) --lo;

    int hi = hi_bound;
    while (lo < hi) {
        const int mid = lo + (hi - lo + 1) / 2;
        if (region(mid).is_empty()) {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    return cached_max_level_ = lo;
}

int max_depth(const PointCloud& cloud) {
    return RegionSweep(cloud).max_level();
}

DepthRegionResult depth_region(const PointCloud& cloud, int k) {
    RegionSweep sweep(cloud);
    return {k, sweep.sample_size(), sweep.region(k)};
}

DepthRegionResult depth_region_slow(const PointCloud& cloud, int k) {
    require_dim(cloud, 2, "depth_region_slow");
    const int n = static_cast<int>(cloud.size());
    if (k < 1 || k > n) throw std::invalid_argument("depth_region_slow: level out of range");

    std::vector<double> angles;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double vx = cloud.at(i, 0) - cloud.at(j, 0);
            const double vy = cloud.at(i, 1) - cloud.at(j, 1);
            if (vx == 0.0 && vy == 0.0) continue;
            const double base = std::atan2(vy, vx);
            angles.push_back(wrap_angle(base + M_PI / 2.0));
            angles.push_back(wrap_angle(base - M_PI / 2.0));
        }
    }
    if (angles.empty()) return {k, n, ConvexRegion::make_point(cloud.point2(0))};
    std::sort(angles.begin(), angles.end());

    std::vector<double> proj(n);
    Point2 lo = cloud.point2(0), hi = cloud.point2(0);
    for (int t = 0; t < n; ++t) {
        const Point2 p = cloud.point2(static_cast<std::size_t>(t));
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    const double pad = 1.0 + 0.5 * std::max(hi.x - lo.x, hi.y - lo.y);
    HalfPlaneClipper clipper({lo.x - pad, lo.y - pad}, {hi.x + pad, hi.y + pad});
    auto add_dir = [&](double angle) {
        const double ux = std::cos(angle), uy = std::sin(angle);
        for (int t = 0; t < n; ++t) proj[t] = cloud.at(t, 0) * ux + cloud.at(t, 1) * uy;
        std::nth_element(proj.begin(), proj.begin() + (k - 1), proj.end(),
                         std::greater<double>());
        clipper.add({Point2{ux, uy}, proj[k - 1]});
    };

    std::size_t g = 0;
    const std::size_t m = angles.size();
    while (g < m) {
        const double group_angle = angles[g];
        std::size_t g_end = g + 1;
        while (g_end < m && angles[g_end] - group_angle <= kAngleTol) ++g_end;
        const double next_angle = (g_end < m) ? angles[g_end] : angles.front() + kTwoPi;

        add_dir(group_angle);
        const double gap = next_angle - group_angle;
        if (gap > M_PI / 2.0) {
            const int subdivisions = static_cast<int>(std::ceil(gap / (M_PI / 2.0)));
            for (int t = 1; t < subdivisions; ++t) {
                add_dir(group_angle + gap * t / subdivisions);
            }
        }
        g = g_end;
    }
    return {k, n, clipper.finish()};
}

TukeyMedianResult tukey_median(const PointCloud& cloud) {
    RegionSweep sweep(cloud);
    const int k_star = sweep.max_level();
    ConvexRegion set = sweep.region(k_star);
    return {region_barycenter(set), std::move(set), k_star};
}

std::vector<DepthRegionResult> depth_contours(const PointCloud& cloud,
                                              const std::vector<int>& levels) {
    RegionSweep sweep(cloud);
    const int k_star = sweep.max_level();
    std::vector<DepthRegionResult> out;
    int prev = 0;
    for (int k : levels) {
        if (k < 1 || k > k_star) throw std::invalid_argument("depth_contours: level out of range");
        if (k < prev) throw std::invalid_argument("depth_contours: levels must ascend");
        prev = k;
        out.push_back({k, sweep.sample_size(), sweep.region(k)});
    }
    return out;
}

std::vector<double> stahel_donoho_approx(const PointCloud& cloud, int n_dirs,
                                         std::uint64_t seed) {
    if (cloud.size() < 2) throw std::invalid_argument("stahel_donoho_approx: n >= 2 required");
    if (n_dirs < 1) throw std::invalid_argument("stahel_donoho_approx: n_dirs >= 1 required");
    const std::size_t n = cloud.size();
    const std::size_t d = cloud.dim();

    auto median_of = [](std::vector<double> v) {
        const std::size_t m = v.size();
        std::nth_element(v.begin(), v.begin() + m / 2, v.end());
        double hi = v[m / 2];
        if (m % 2 == 0) {
            std::nth_element(v.begin(), v.begin() + m / 2 - 1, v.begin() + m / 2);
            return (hi + v[m / 2 - 1]) / 2.0;
        }
        return hi;
    };

    Rng rng(seed);
    std::vector<double> outlying(n, 0.0);
    std::vector<double> proj(n), dev(n);
    int used_dirs = 0;
    for (int it = 0; it < n_dirs; ++it) {
        const std::vector<double> u = rng.sphere(d);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += cloud.at(i, c) * u[c];
            proj[i] = s;
        }
        const double med = median_of(proj);
        for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(proj[i] - med);
        const double mad = median_of(dev);
        if (mad == 0.0) continue;  // degenerate direction
        ++used_dirs;
        for (std::size_t i = 0; i < n; ++i) {
            outlying[i] = std::max(outlying[i], dev[i] / mad);
        }
    }
    if (used_dirs == 0)
        throw std::runtime_error("stahel_donoho_approx: all sampled directions degenerate");

    const double c = median_of(outlying);
    std::vector<double> est(d, 0.0);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            (outlying[i] == 0.0) ? 1.0 : std::min(1.0, (c / outlying[i]) * (c / outlying[i]));
        wsum += w;
        for (std::size_t k = 0; k < d; ++k) est[k] += w * cloud.at(i, k);
    }
    for (double& v : est) v /= wsum;
    return est;
}

std::string region_result_to_json(const DepthRegionResult& r) {
    return "{\"level\":" + std::to_string(r.level) + ",\"n\":" + std::to_string(r.n) +
           ",\"region\":" + region_to_json(r.region) + "}";
}

}  // namespace depthlab

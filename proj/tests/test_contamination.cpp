#include <cmath>
#include <vector>

#include "doctest.h"

#include "depthlab/contamination.hpp"
#include "depthlab/depth.hpp"
#include "depthlab/models.hpp"
#include "depthlab/rng.hpp"
#include "helpers.hpp"

using namespace depthlab;
using depthlab::testing::random_cloud;

namespace {

int changed_count(const PointCloud& a, const PointCloud& b) {
    int changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool same = true;
        for (std::size_t j = 0; j < a.dim(); ++j) same &= a.at(i, j) == b.at(i, j);
        changed += !same;
    }
    return changed;
}

ContaminationPlan far_plan(double eps, double radius) {
    ContaminationPlan plan;
    plan.epsilon = eps;
    plan.strategy = ContaminationStrategy::far_cluster;
    plan.direction = {1.0, 0.0};
    plan.radius = radius;
    return plan;
}

}  // namespace

TEST_CASE("epsilon zero is the identity") {
    const PointCloud cloud = random_cloud(1, 40);
    const PointCloud out = contaminate(cloud, far_plan(0.0, 100.0), 5);
    CHECK(out.data() == cloud.data());
}

TEST_CASE("exactly floor(eps*n) points are replaced") {
    const PointCloud cloud = random_cloud(2, 100, false);
    CHECK(changed_count(cloud, contaminate(cloud, far_plan(0.1, 1e6), 9)) == 10);
    CHECK(changed_count(cloud, contaminate(cloud, far_plan(0.099, 1e6), 9)) == 9);
    const PointCloud small = random_cloud(3, 7, false);
    CHECK(changed_count(small, contaminate(small, far_plan(0.4, 1e6), 1)) == 2);
}

TEST_CASE("far cluster shifts the mean by about eps*radius") {
    const PointCloud cloud = random_cloud(4, 400, false);
    const double radius = 1000.0;
    const PointCloud dirty = contaminate(cloud, far_plan(0.1, radius), 11);
    const std::vector<double> m0 = cloud.mean();
    const std::vector<double> m1 = dirty.mean();
    CHECK(std::abs((m1[0] - m0[0]) - 0.1 * radius) < 0.15 * radius * 0.1 + 5.0);
    CHECK(std::abs(m1[1] - m0[1]) < 5.0);
}

TEST_CASE("untouched points keep their order") {
    const PointCloud cloud = random_cloud(5, 50, false);
    const PointCloud dirty = contaminate(cloud, far_plan(0.2, 1e3), 13);
    std::vector<std::size_t> kept_src, kept_dst;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (cloud.at(i, 0) == dirty.at(i, 0) && cloud.at(i, 1) == dirty.at(i, 1)) {
            kept_src.push_back(i);
        }
    }
    CHECK(kept_src.size() == 40);  // positions are preserved, not permuted
}

TEST_CASE("smear stays inside the stated radius") {
    ContaminationPlan plan;
    plan.epsilon = 0.3;
    plan.strategy = ContaminationStrategy::smear;
    plan.radius = 2.0;
    const PointCloud cloud = random_cloud(6, 60, false);
    const PointCloud dirty = contaminate(cloud, plan, 17);
    const std::vector<double> c = cloud.mean();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const bool changed = cloud.at(i, 0) != dirty.at(i, 0) || cloud.at(i, 1) != dirty.at(i, 1);
        if (changed) {
            const double r = std::hypot(dirty.at(i, 0) - c[0], dirty.at(i, 1) - c[1]);
            CHECK(r <= plan.radius + 1e-12);
        }
    }
}

TEST_CASE("replay substitutes the supplied points") {
    ContaminationPlan plan;
    plan.epsilon = 0.25;
    plan.strategy = ContaminationStrategy::replay;
    plan.points = PointCloud(2, {9, 9, 8, 8});
    const PointCloud cloud = random_cloud(7, 8, false);
    const PointCloud dirty = contaminate(cloud, plan, 23);
    int found = 0;
    for (std::size_t i = 0; i < dirty.size(); ++i)
        found += (dirty.at(i, 0) == 9 && dirty.at(i, 1) == 9) ||
                 (dirty.at(i, 0) == 8 && dirty.at(i, 1) == 8);
    CHECK(found == 2);
}

TEST_CASE("epsilon out of range throws") {
    const PointCloud cloud = random_cloud(8, 10, false);
    CHECK_THROWS(contaminate(cloud, far_plan(0.5, 1.0), 1));
    CHECK_THROWS(contaminate(cloud, far_plan(-0.1, 1.0), 1));
}

TEST_CASE("contaminated median stays in the clean deep set") {
    // 50 instances here; the full 200-instance sweep runs in the
    // acceptance suite.
    Rng rng(2025);
    int checked = 0;
    for (int trial = 0; checked < 50; ++trial) {
        const int n = 20 + static_cast<int>(rng.uniform() * 80);
        const double eps = 0.02 + rng.uniform() * 0.10;
        const PointCloud clean = random_cloud(10000 + trial, n, false);
        const PointCloud dirty =
            contaminate(clean, far_plan(eps, 10.0 + rng.uniform() * 1e4),
                        static_cast<std::uint64_t>(trial));
        const int m = static_cast<int>(eps * n);
        const RegionSweep sweep(clean);
        const int level = sweep.max_level() - 2 * m;
        if (level < 1) continue;
        const Point2 med = tukey_median(dirty).median;
        CHECK(depth_exact_2d(clean, med).count >= level);
        CHECK(sweep.region(level).contains(med, 1e-9));
        ++checked;
    }
}

TEST_CASE("contamination moves pointwise depth by at most floor(eps*n)/n") {
    Rng rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 10 + static_cast<int>(rng.uniform() * 90);
        const double eps = rng.uniform() * 0.3;
        const PointCloud clean = random_cloud(20000 + trial, n);
        const PointCloud dirty = contaminate(clean, far_plan(eps, 500.0),
                                             static_cast<std::uint64_t>(trial));
        const int m = static_cast<int>(eps * n);
        for (int q = 0; q < 20; ++q) {
            const Point2 z{3.0 * rng.normal(), 3.0 * rng.normal()};
            const int dc = depth_exact_2d(clean, z).count;
            const int dd = depth_exact_2d(dirty, z).count;
            CHECK(std::abs(dc - dd) <= m);
        }
    }
}

TEST_CASE("plan JSON round trip") {
    const ContaminationPlan p1 = far_plan(0.15, 42.0);
    const ContaminationPlan b1 = plan_from_json(plan_to_json(p1));
    CHECK(b1.epsilon == p1.epsilon);
    CHECK(b1.strategy == p1.strategy);
    CHECK(b1.direction == p1.direction);
    CHECK(b1.radius == p1.radius);

    ContaminationPlan p2;
    p2.epsilon = 0.2;
    p2.strategy = ContaminationStrategy::replay;
    p2.points = PointCloud(2, {1, 2, 3, 4});
    const ContaminationPlan b2 = plan_from_json(plan_to_json(p2));
    CHECK(b2.points.has_value());
    CHECK(b2.points->data() == p2.points->data());
}

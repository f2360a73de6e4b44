#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthlab/cloud.hpp"

namespace depthlab {

enum class ContaminationStrategy { far_cluster, smear, replay };

// Adversarial replacement of floor(epsilon * n) sample points.
struct ContaminationPlan {
    double epsilon = 0.0;  // in [0, 0.5)
    ContaminationStrategy strategy = ContaminationStrategy::far_cluster;

    // far_cluster
    std::vector<double> direction;  // unit vector
    double radius = 0.0;            // also used by smear

    // replay
    std::optional<PointCloud> points;
};

// Replaces exactly floor(epsilon * n) points, chosen uniformly at random
// by seed; the rest are untouched and keep their order.
PointCloud contaminate(const PointCloud& cloud, const ContaminationPlan& plan,
                       std::uint64_t seed);

std::string plan_to_json(const ContaminationPlan& plan);
ContaminationPlan plan_from_json(const std::string& text);

}  // namespace depthlab

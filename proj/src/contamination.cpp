#include "depthlab/contamination.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "depthlab/rng.hpp"

namespace depthlab {

PointCloud contaminate(const PointCloud& cloud, const ContaminationPlan& plan,
                       std::uint64_t seed) {
    if (plan.epsilon < 0.0 || plan.epsilon >= 0.5)
        throw std::invalid_argument("contaminate: epsilon must be in [0, 0.5)");
    const std::size_t n = cloud.size();
    const std::size_t d = cloud.dim();
    const std::size_t m = static_cast<std::size_t>(plan.epsilon * static_cast<double>(n));
    PointCloud out = cloud;
    if (m == 0) return out;

    if (plan.strategy == ContaminationStrategy::far_cluster) {
        if (plan.direction.size() != d)
            throw std::invalid_argument("contaminate: direction dimension mismatch");
    }
    if (plan.strategy == ContaminationStrategy::replay) {
        if (!plan.points || plan.points->dim() != d || plan.points->size() < m)
            throw std::invalid_argument("contaminate: replay needs >= floor(eps n) points");
    }

    Rng rng(seed);

    // Seeded partial Fisher-Yates pick of m indices without replacement.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t pick = t + static_cast<std::size_t>(rng.below(n - t));
        std::swap(idx[t], idx[pick]);
    }

    const std::vector<double> centroid = cloud.mean();
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t i = idx[t];
        switch (plan.strategy) {
            case ContaminationStrategy::far_cluster:
                for (std::size_t c = 0; c < d; ++c)
                    out.at(i, c) = centroid[c] + plan.radius * plan.direction[c];
                break;
            case ContaminationStrategy::smear: {
                // Uniform in the d-ball of the given radius.
                const std::vector<double> u = rng.sphere(d);
                const double r =
                    plan.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
                for (std::size_t c = 0; c < d; ++c) out.at(i, c) = centroid[c] + r * u[c];
                break;
            }
            case ContaminationStrategy::replay:
                for (std::size_t c = 0; c < d; ++c) out.at(i, c) = plan.points->at(t, c);
                break;
        }
    }
    return out;
}

std::string plan_to_json(const ContaminationPlan& plan) {
    nlohmann::json j;
    j["epsilon"] = plan.epsilon;
    nlohmann::json s;
    switch (plan.strategy) {
        case ContaminationStrategy::far_cluster:
            s["kind"] = "far_cluster";
            s["direction"] = plan.direction;
            s["radius"] = plan.radius;
            break;
        case ContaminationStrategy::smear:
            s["kind"] = "smear";
            s["radius"] = plan.radius;
            break;
        case ContaminationStrategy::replay: {
            s["kind"] = "replay";
            auto pts = nlohmann::json::array();
            if (plan.points) {
                const auto& pc = *plan.points;
                for (std::size_t i = 0; i < pc.size(); ++i) {
                    auto row = nlohmann::json::array();
                    for (std::size_t c = 0; c < pc.dim(); ++c) row.push_back(pc.at(i, c));
                    pts.push_back(row);
                }
            }
            s["points"] = pts;
            break;
        }
    }
    j["strategy"] = s;
    return j.dump();
}

ContaminationPlan plan_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ContaminationPlan plan;
    plan.epsilon = j.at("epsilon").get<double>();
    const auto& s = j.at("strategy");
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "far_cluster") {
        plan.strategy = ContaminationStrategy::far_cluster;
        plan.direction = s.at("direction").get<std::vector<double>>();
        plan.radius = s.at("radius").get<double>();
    } else if (kind == "smear") {
        plan.strategy = ContaminationStrategy::smear;
        plan.radius = s.at("radius").get<double>();
    } else if (kind == "replay") {
        plan.strategy = ContaminationStrategy::replay;
        const auto& pts = s.at("points");
        if (!pts.empty()) {
            const std::size_t d = pts.front().size();
            std::vector<double> data;
            for (const auto& row : pts)
                for (const auto& v : row) data.push_back(v.get<double>());
            plan.points = PointCloud(d, std::move(data));
        }
    } else {
        throw std::invalid_argument("plan: unknown strategy kind " + kind);
    }
    return plan;
}

}  // namespace depthlab

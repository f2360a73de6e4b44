#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "depthlab/cloud.hpp"
#include "depthlab/contamination.hpp"
#include "depthlab/depth.hpp"
#include "depthlab/experiments.hpp"
#include "depthlab/limit_process.hpp"
#include "depthlab/models.hpp"

namespace py = pybind11;
using namespace depthlab;

namespace {

PointCloud cloud_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty point list");
    const std::size_t d = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * d);
    for (const auto& row : rows) {
        if (row.size() != d) throw std::invalid_argument("ragged point list");
        data.insert(data.end(), row.begin(), row.end());
    }
    return PointCloud(d, std::move(data));
}

std::vector<std::vector<double>> cloud_to_rows(const PointCloud& cloud) {
    std::vector<std::vector<double>> rows(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        rows[i].assign(p.begin(), p.end());
    }
    return rows;
}

py::dict region_to_dict(const ConvexRegion& region) {
    py::dict d;
    switch (region.kind) {
        case RegionKind::empty: d["kind"] = "empty"; break;
        case RegionKind::point: d["kind"] = "point"; break;
        case RegionKind::segment: d["kind"] = "segment"; break;
        case RegionKind::polygon: d["kind"] = "polygon"; break;
    }
    py::list verts;
    for (const Point2& v : region.vertices) {
        py::list pt;
        pt.append(v.x);
        pt.append(v.y);
        verts.append(pt);
    }
    d["vertices"] = verts;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "halfspace depth core";

    m.def(
        "depth",
        [](const std::vector<std::vector<double>>& points, const std::vector<double>& z,
           int dirs, std::uint64_t seed) {
            const PointCloud cloud = cloud_from_rows(points);
            if (z.size() != cloud.dim()) throw std::invalid_argument("dimension mismatch");
            DepthValue d;
            if (cloud.dim() == 1)
                d = depth_1d(cloud, z[0]);
            else if (cloud.dim() == 2)
                d = depth_exact_2d(cloud, {z[0], z[1]});
            else
                d = depth_approx(cloud, z, dirs, seed);
            py::dict out;
            out["count"] = d.count;
            out["n"] = d.n;
            out["depth"] = d.value();
            return out;
        },
        py::arg("points"), py::arg("z"), py::arg("dirs") = 1024, py::arg("seed") = 0,
        "Halfspace depth of z: exact for d<=2, sampled-direction bound otherwise.");

    m.def(
        "max_depth",
        [](const std::vector<std::vector<double>>& points) {
            return max_depth(cloud_from_rows(points));
        },
        py::arg("points"));

    m.def(
        "tukey_median",
        [](const std::vector<std::vector<double>>& points) {
            const TukeyMedianResult r = tukey_median(cloud_from_rows(points));
            py::dict out;
            py::list med;
            med.append(r.median.x);
            med.append(r.median.y);
            out["median"] = med;
            out["set"] = region_to_dict(r.set);
            out["level"] = r.level;
            return out;
        },
        py::arg("points"));

    m.def(
        "depth_region",
        [](const std::vector<std::vector<double>>& points, int level) {
            const DepthRegionResult r = depth_region(cloud_from_rows(points), level);
            py::dict out;
            out["level"] = r.level;
            out["n"] = r.n;
            out["region"] = region_to_dict(r.region);
            return out;
        },
        py::arg("points"), py::arg("level"));

    m.def(
        "depth_contours",
        [](const std::vector<std::vector<double>>& points, const std::vector<int>& levels) {
            py::list out;
            for (const DepthRegionResult& r : depth_contours(cloud_from_rows(points), levels)) {
                py::dict o;
                o["level"] = r.level;
                o["n"] = r.n;
                o["region"] = region_to_dict(r.region);
                out.append(o);
            }
            return out;
        },
        py::arg("points"), py::arg("levels"));

    m.def(
        "sample",
        [](const std::string& model_json, int n, std::uint64_t seed) {
            if (n < 1) throw std::invalid_argument("n must be >= 1");
            return cloud_to_rows(
                sample_elliptical(model_from_json(model_json), static_cast<std::size_t>(n), seed));
        },
        py::arg("model_json"), py::arg("n"), py::arg("seed") = 0,
        "Draw n points from an elliptical model given as JSON.");

    m.def(
        "contaminate",
        [](const std::vector<std::vector<double>>& points, const std::string& plan_json,
           std::uint64_t seed) {
            return cloud_to_rows(
                contaminate(cloud_from_rows(points), plan_from_json(plan_json), seed));
        },
        py::arg("points"), py::arg("plan_json"), py::arg("seed") = 0);

    m.def(
        "simulate_limit",
        [](int grid_m, double radius, int side, std::uint64_t seed) {
            const DirectionGrid grid = DirectionGrid::uniform(grid_m);
            const LimitField field = evaluate_w(grid, simulate_bridge(grid, seed), radius, side);
            py::dict out;
            py::list am;
            am.append(field.argmax.x);
            am.append(field.argmax.y);
            out["argmax"] = am;
            out["w_max"] = field.w_max;
            out["minimizer_angles"] = field.minimizer_angles;
            return out;
        },
        py::arg("grid_m") = 512, py::arg("radius") = 8.0, py::arg("side") = 161,
        py::arg("seed") = 0);

    m.def(
        "run_experiment",
        [](const std::string& config_json) { return run_experiment(config_from_json(config_json)); },
        py::arg("config_json"), "Run an experiment from a JSON config; returns the result CSV.");
}

#include "depthlab/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depthlab/cloud.hpp"
#include "depthlab/contamination.hpp"
#include "depthlab/depth.hpp"
#include "depthlab/experiments.hpp"
#include "depthlab/limit_process.hpp"
#include "depthlab/models.hpp"

namespace depthlab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> coords;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::runtime_error("malformed coordinate: " + tok);
        coords.push_back(v);
    }
    if (coords.empty()) throw std::runtime_error("empty --point");
    return coords;
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) levels.push_back(std::stoi(tok));
    if (levels.empty()) throw std::runtime_error("empty --levels");
    return levels;
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + out_path);
}

ContaminationStrategy strategy_from_name(const std::string& name) {
    if (name == "far_cluster") return ContaminationStrategy::far_cluster;
    if (name == "smear") return ContaminationStrategy::smear;
    if (name == "replay") return ContaminationStrategy::replay;
    throw std::runtime_error("unknown strategy: " + name);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"halfspace depth toolkit"};
    app.require_subcommand(1);

    std::string input, out_path, point_text, levels_text, model_path, plan_path, strategy;
    std::string config_path, direction_text;
    int level = 0, n = 0, dirs = 1024, threads = 1, grid_m = 512, side = 161;
    double epsilon = -1.0, radius = 0.0, budget = 0.0, lattice_radius = 8.0;
    std::uint64_t seed = 0;

    std::string result;  // produced by the subcommand callbacks

    auto* c_depth = app.add_subcommand("depth", "halfspace depth of a query point");
    c_depth->add_option("--input", input, "point cloud CSV")->required();
    c_depth->add_option("--point", point_text, "query point \"x1,...,xd\"")->required();
    c_depth->add_option("--dirs", dirs, "sampled directions for d >= 3");
    c_depth->add_option("--seed", seed, "seed for sampled directions");
    c_depth->add_option("--out", out_path, "output path");
    c_depth->callback([&] {
        const PointCloud cloud = load_cloud_csv(input);
        const std::vector<double> z = parse_point(point_text);
        if (z.size() != cloud.dim()) throw std::runtime_error("dimension mismatch");
        DepthValue d;
        if (cloud.dim() == 1)
            d = depth_1d(cloud, z[0]);
        else if (cloud.dim() == 2)
            d = depth_exact_2d(cloud, {z[0], z[1]});
        else
            d = depth_approx(cloud, z, dirs, seed);
        result = "{\"count\":" + std::to_string(d.count) + ",\"n\":" + std::to_string(d.n) +
                 ",\"depth\":" + fmt(d.value()) + "}";
    });

    auto* c_median = app.add_subcommand("median", "Tukey median set and barycenter");
    c_median->add_option("--input", input, "point cloud CSV")->required();
    c_median->add_option("--out", out_path, "output path");
    c_median->callback([&] {
        const PointCloud cloud = load_cloud_csv(input);
        const TukeyMedianResult tm = tukey_median(cloud);
        result = "{\"median\":[" + fmt(tm.median.x) + ',' + fmt(tm.median.y) +
                 "],\"set\":" + region_to_json(tm.set) +
                 ",\"level\":" + std::to_string(tm.level) + "}";
    });

    auto* c_region = app.add_subcommand("region", "depth region at a level");
    c_region->add_option("--input", input, "point cloud CSV")->required();
    c_region->add_option("--level", level, "depth level k")->required();
    c_region->add_option("--out", out_path, "output path");
    c_region->callback([&] {
        const PointCloud cloud = load_cloud_csv(input);
        result = region_result_to_json(depth_region(cloud, level));
    });

    auto* c_contour = app.add_subcommand("contour", "depth contours at several levels");
    c_contour->add_option("--input", input, "point cloud CSV")->required();
    c_contour->add_option("--levels", levels_text, "ascending levels \"k1,k2,...\"")->required();
    c_contour->add_option("--out", out_path, "output path");
    c_contour->callback([&] {
        const PointCloud cloud = load_cloud_csv(input);
        const std::vector<int> levels = parse_levels(levels_text);
        std::string lines;
        for (const DepthRegionResult& r : depth_contours(cloud, levels))
            lines += region_to_json(r.region) + "\n";
        result = lines;
    });

    auto* c_sample = app.add_subcommand("sample", "draw from an elliptical model");
    c_sample->add_option("--model", model_path, "model JSON")->required();
    c_sample->add_option("--n", n, "sample size")->required();
    c_sample->add_option("--seed", seed, "RNG seed");
    c_sample->add_option("--out", out_path, "output path");
    c_sample->callback([&] {
        if (n < 1) throw std::runtime_error("--n must be >= 1");
        const EllipticalModel model = load_model_json(model_path);
        result = cloud_to_csv(sample_elliptical(model, static_cast<std::size_t>(n), seed));
    });

    auto* c_cont = app.add_subcommand("contaminate", "adversarially replace sample points");
    c_cont->add_option("--input", input, "point cloud CSV")->required();
    c_cont->add_option("--plan", plan_path, "contamination plan JSON");
    c_cont->add_option("--epsilon", epsilon, "contamination fraction override");
    c_cont->add_option("--strategy", strategy, "strategy override");
    c_cont->add_option("--direction", direction_text, "attack direction \"x,y\"");
    c_cont->add_option("--radius", radius, "attack radius");
    c_cont->add_option("--seed", seed, "RNG seed");
    c_cont->add_option("--out", out_path, "output path");
    c_cont->callback([&] {
        const PointCloud cloud = load_cloud_csv(input);
        ContaminationPlan plan;
        if (!plan_path.empty()) {
            std::ifstream f(plan_path);
            if (!f) throw std::runtime_error("cannot open plan file: " + plan_path);
            std::ostringstream ss;
            ss << f.rdbuf();
            plan = plan_from_json(ss.str());
        }
        if (epsilon >= 0.0) plan.epsilon = epsilon;
        if (!strategy.empty()) plan.strategy = strategy_from_name(strategy);
        if (!direction_text.empty()) plan.direction = parse_point(direction_text);
        if (radius > 0.0) plan.radius = radius;
        result = cloud_to_csv(contaminate(cloud, plan, seed));
    });

    auto* c_limit = app.add_subcommand("limit", "simulate the limiting depth process");
    c_limit->add_option("--grid", grid_m, "direction grid size (even)");
    c_limit->add_option("--radius", lattice_radius, "lattice half-width");
    c_limit->add_option("--side", side, "lattice points per axis");
    c_limit->add_option("--seed", seed, "RNG seed");
    c_limit->add_option("--out", out_path, "output path (.csv field, else summary JSON)");
    c_limit->callback([&] {
        const DirectionGrid grid = DirectionGrid::uniform(grid_m);
        const std::vector<double> bridge = simulate_bridge(grid, seed);
        const LimitField field = evaluate_w(grid, bridge, lattice_radius, side);
        const bool csv = out_path.size() >= 4 &&
                         out_path.compare(out_path.size() - 4, 4, ".csv") == 0;
        result = csv ? field_to_csv(field) : field_summary_json(field);
    });

    auto* c_exp = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    c_exp->add_option("--input", config_path, "experiment config JSON")->required();
    auto* opt_seed = c_exp->add_option("--seed", seed, "seed override");
    auto* opt_threads = c_exp->add_option("--threads", threads, "worker threads");
    auto* opt_budget = c_exp->add_option("--budget-seconds", budget, "wall-clock budget");
    c_exp->add_option("--out", out_path, "output path");
    c_exp->callback([&] {
        ExperimentConfig cfg = load_config_json(config_path);
        if (opt_seed->count() > 0) cfg.seed = seed;
        if (opt_threads->count() > 0) cfg.threads = threads;
        if (opt_budget->count() > 0) cfg.budget_seconds = budget;
        result = run_experiment(cfg);
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("depthlab");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        write_output(result, out_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace depthlab

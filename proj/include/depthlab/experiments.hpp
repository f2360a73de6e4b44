#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthlab/contamination.hpp"
#include "depthlab/models.hpp"

namespace depthlab {

// Configuration shared by all experiment kinds. Everything an experiment
// produces is a pure function of this struct; per-replication RNG streams
// are derived from (seed, replication index) only, so results do not
// depend on the thread count.
struct ExperimentConfig {
    std::string kind;
    std::vector<int> n_grid;
    int reps = 1;
    EllipticalModel model;
    std::optional<ContaminationPlan> plan;
    double t = 2.0;  // confidence knob: selects reported quantiles
    std::uint64_t seed = 0;
    int threads = 1;
    double budget_seconds = 0.0;  // 0 = unlimited

    // Kind-specific knobs.
    double epsilon_exponent = 0.0;     // diameter_scaling: eps_n = n^{-expo}; 0 targets R_n(0)
    std::vector<double> epsilon_grid;  // lower_bound
    std::vector<double> delta_grid;    // depth_modulus
    int pairs_per_delta = 200;
    double lambda = 0.01;  // effective_rank: second shape is diag(1, lambda)
    int bins = 12;         // direction_uniformity
    int grid_m = 512;      // weak_convergence bridge grid
    double lattice_radius = 8.0;
    int lattice_side = 161;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_json(const std::string& path);

struct ScalingRow {
    int n = 0;
    double mean_diameter = 0.0;
    double std_error = 0.0;
};

struct ScalingResult {
    std::vector<ScalingRow> table;
    double slope = 0.0;
    double slope_lo = 0.0;  // 95% CI
    double slope_hi = 0.0;
    double r_squared = 0.0;
    std::string csv;
};

// Median-set / level-set diameter against n, with a log-log OLS fit.
ScalingResult run_diameter_scaling(const ExperimentConfig& cfg);

// Univariate analogue: diameter of the median interval for even n.
ScalingResult run_diameter_scaling_1d(const ExperimentConfig& cfg);

struct LowerBoundRow {
    double epsilon = 0.0;
    double mean_diameter = 0.0;
    double mean_ratio = 0.0;  // diameter / epsilon
    int excluded = 0;         // replications where the level fell below 1
};

struct LowerBoundResult {
    std::vector<LowerBoundRow> rows;
    bool diameters_monotone = false;     // nondecreasing in eps, every instance
    double frac_min_ratio_ok = 0.0;      // fraction of instances with min ratio >= 0.1
    double median_minkowski_c = 0.0;     // largest dyadic c with R(0)+B(0,c*eps) inside R(eps)
    std::string csv;
};

LowerBoundResult run_lower_bound_check(const ExperimentConfig& cfg);

struct ContaminationErrorResult {
    double median_tukey_error = 0.0;
    double median_mean_error = 0.0;
    double quantile_tukey_error = 0.0;  // level 1 - e^{-t}
    std::string csv;
};

ContaminationErrorResult run_contamination_error(const ExperimentConfig& cfg);

struct DirectionUniformityResult {
    std::vector<int> bin_counts;
    double chi_square = 0.0;
    double p_value = 0.0;
    double mean_shaped_norm = 0.0;  // mean of ||Sigma^{1/2} U||
    int excluded_zero = 0;
    std::string csv;
};

DirectionUniformityResult run_direction_uniformity(const ExperimentConfig& cfg);

struct EffectiveRankResult {
    double rms_isotropic = 0.0;
    double rms_anisotropic = 0.0;
    double ratio = 0.0;  // isotropic / anisotropic
    std::string csv;
};

EffectiveRankResult run_effective_rank_ratio(const ExperimentConfig& cfg);

struct ModulusRow {
    double delta = 0.0;
    double mean_sup = 0.0;
    double gaussian_term = 0.0;  // delta / sqrt(2 pi)
};

struct ModulusResult {
    std::vector<ModulusRow> rows;
    std::string csv;
};

ModulusResult run_depth_modulus(const ExperimentConfig& cfg);

struct WeakConvergenceResult {
    double ks_distance = 0.0;
    std::vector<double> empirical_arm;  // sqrt(n) (d_hat - 1/2)
    std::vector<double> limit_arm;      // lattice max of W
    std::string csv;
};

WeakConvergenceResult run_weak_convergence(const ExperimentConfig& cfg);

// Dispatch on cfg.kind; returns the result CSV.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace depthlab

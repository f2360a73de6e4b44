#include "depthlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "depthlab/depth.hpp"
#include "depthlab/limit_process.hpp"
#include "depthlab/rng.hpp"
#include "depthlab/stats.hpp"

namespace depthlab {

namespace {

using nlohmann::json;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["kind"] = cfg.kind;
    j["n_grid"] = cfg.n_grid;
    j["reps"] = cfg.reps;
    j["model"] = json::parse(model_to_json(cfg.model));
    if (cfg.plan) j["plan"] = json::parse(plan_to_json(*cfg.plan));
    j["t"] = cfg.t;
    j["seed"] = cfg.seed;
    j["epsilon_exponent"] = cfg.epsilon_exponent;
    j["epsilon_grid"] = cfg.epsilon_grid;
    j["delta_grid"] = cfg.delta_grid;
    j["pairs_per_delta"] = cfg.pairs_per_delta;
    j["lambda"] = cfg.lambda;
    j["bins"] = cfg.bins;
    j["grid_m"] = cfg.grid_m;
    j["lattice_radius"] = cfg.lattice_radius;
    j["lattice_side"] = cfg.lattice_side;
    return j;
}

// Hash covers everything that determines the numbers; threads and the
// time budget deliberately excluded.
std::string csv_header(const ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a(config_json(cfg).dump());
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# depthlab v1, config-hash=%016llx, seed=%llu\n",
                  static_cast<unsigned long long>(h),
                  static_cast<unsigned long long>(cfg.seed));
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Runs fn(0..count-1); splitting across threads never changes where each
// index writes, so output is identical for any thread count.
void run_each(const ExperimentConfig& cfg, int count, const std::function<void(int)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    const auto over = [&] {
        if (cfg.budget_seconds <= 0.0) return false;
        const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        return el.count() > cfg.budget_seconds;
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (int i = 0; i < count; ++i) {
            if (over()) throw std::runtime_error("time budget exceeded");
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> budget_hit{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            if (over()) {
                budget_hit.store(true);
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    if (budget_hit.load()) throw std::runtime_error("time budget exceeded");
}

double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double quantile_of(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

// Two-sided 97.5% Student-t quantiles for small residual dof.
double t975(int dof) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                   2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                   2.131,  2.120, 2.110, 2.101, 2.093, 2.086};
    if (dof <= 0) return 12.706;
    if (dof <= 20) return table[dof - 1];
    return 1.96;
}

int level_at(int kstar, double eps, int n) {
    return kstar - static_cast<int>(std::floor(eps * static_cast<double>(n)));
}

double norm2d(double x, double y) { return std::sqrt(x * x + y * y); }

// Largest dyadic c in [0, 1] with inner + B(0, c * eps) inside outer.
double largest_minkowski_c(const ConvexRegion& inner, const ConvexRegion& outer, double eps) {
    if (outer.kind != RegionKind::polygon || inner.is_empty()) return 0.0;
    const std::size_t m = outer.vertices.size();
    double best = 0.0;
    for (double c = 1.0; c >= 1.0 / 4096.0; c *= 0.5) {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            const Point2 a = outer.vertices[i];
            const Point2 b = outer.vertices[(i + 1) % m];
            const double len = distance(a, b);
            if (len == 0.0) continue;
            const Point2 nrm{(b.y - a.y) / len, -(b.x - a.x) / len};  // outward for CCW
            const double offset = dot(nrm, a);
            for (const Point2& v : inner.vertices) {
                if (dot(nrm, v) + c * eps > offset + 1e-12) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            best = c;
            break;
        }
    }
    return best;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    require(j.is_object(), "experiment config must be a JSON object");
    ExperimentConfig cfg;
    cfg.kind = j.at("kind").get<std::string>();
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    require(!cfg.n_grid.empty(), "n_grid must be nonempty");
    for (int n : cfg.n_grid) require(n >= 1, "n_grid entries must be >= 1");
    cfg.reps = j.value("reps", 1);
    require(cfg.reps >= 1, "reps must be >= 1");
    cfg.model = model_from_json(j.at("model").dump());
    if (j.contains("plan")) cfg.plan = plan_from_json(j["plan"].dump());
    cfg.t = j.value("t", 2.0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.epsilon_exponent = j.value("epsilon_exponent", 0.0);
    cfg.epsilon_grid = j.value("epsilon_grid", std::vector<double>{});
    cfg.delta_grid = j.value("delta_grid", std::vector<double>{});
    cfg.pairs_per_delta = j.value("pairs_per_delta", 200);
    cfg.lambda = j.value("lambda", 0.01);
    cfg.bins = j.value("bins", 12);
    cfg.grid_m = j.value("grid_m", 512);
    cfg.lattice_radius = j.value("lattice_radius", 8.0);
    cfg.lattice_side = j.value("lattice_side", 161);
    return cfg;
}

ExperimentConfig load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

ScalingResult run_diameter_scaling(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "diameter_scaling needs a 2-d model");
    const int nn = static_cast<int>(cfg.n_grid.size());
    std::vector<double> diam(static_cast<std::size_t>(nn) * cfg.reps, 0.0);
    run_each(cfg, nn * cfg.reps, [&](int idx) {
        const int ni = idx / cfg.reps;
        const int n = cfg.n_grid[static_cast<std::size_t>(ni)];
        const PointCloud cloud =
            sample_elliptical(cfg.model, static_cast<std::size_t>(n),
                              mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        const RegionSweep sweep(cloud);
        int k = sweep.max_level();
        if (cfg.epsilon_exponent > 0.0) {
            const double eps = std::pow(static_cast<double>(n), -cfg.epsilon_exponent);
            k = std::max(1, level_at(k, eps, n));
        }
        diam[static_cast<std::size_t>(idx)] = region_diameter(sweep.region(k));
    });

    ScalingResult out;
    std::vector<double> lx, ly;
    for (int ni = 0; ni < nn; ++ni) {
        double s = 0.0, s2 = 0.0;
        for (int r = 0; r < cfg.reps; ++r) {
            const double v = diam[static_cast<std::size_t>(ni * cfg.reps + r)];
            s += v;
            s2 += v * v;
        }
        const double mean = s / cfg.reps;
        const double var = cfg.reps > 1 ? std::max(0.0, (s2 - cfg.reps * mean * mean) / (cfg.reps - 1)) : 0.0;
        out.table.push_back({cfg.n_grid[static_cast<std::size_t>(ni)], mean,
                             std::sqrt(var / cfg.reps)});
        lx.push_back(std::log(static_cast<double>(cfg.n_grid[static_cast<std::size_t>(ni)])));
        ly.push_back(std::log(std::max(mean, 1e-300)));
    }
    if (nn >= 2) {
        const LineFit fit = fit_line(lx, ly);
        const double tq = t975(nn - 2);
        out.slope = fit.slope;
        out.slope_lo = fit.slope - tq * fit.slope_stderr;
        out.slope_hi = fit.slope + tq * fit.slope_stderr;
        out.r_squared = fit.r_squared;
    }

    std::ostringstream csv;
    csv << csv_header(cfg) << "n,mean_diameter,std_error\n";
    for (const auto& row : out.table)
        csv << row.n << ',' << fmt(row.mean_diameter) << ',' << fmt(row.std_error) << '\n';
    csv << "# slope=" << fmt(out.slope) << ", ci=[" << fmt(out.slope_lo) << ','
        << fmt(out.slope_hi) << "], r2=" << fmt(out.r_squared) << '\n';
    out.csv = csv.str();
    return out;
}

ScalingResult run_diameter_scaling_1d(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 1, "diameter_scaling_1d needs a 1-d model");
    const int nn = static_cast<int>(cfg.n_grid.size());
    std::vector<double> diam(static_cast<std::size_t>(nn) * cfg.reps, 0.0);
    run_each(cfg, nn * cfg.reps, [&](int idx) {
        const int ni = idx / cfg.reps;
        const int n = cfg.n_grid[static_cast<std::size_t>(ni)];
        const PointCloud cloud =
            sample_elliptical(cfg.model, static_cast<std::size_t>(n),
                              mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        std::vector<double> x(cloud.data());
        std::sort(x.begin(), x.end());
        // Max level of min(#{<= z}, #{>= z}); ties only help, so scan data points.
        int kstar = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto le = std::upper_bound(x.begin(), x.end(), x[i]) - x.begin();
            const auto ge = x.end() - std::lower_bound(x.begin(), x.end(), x[i]);
            kstar = std::max(kstar, static_cast<int>(std::min<std::ptrdiff_t>(le, ge)));
        }
        int k = kstar;
        if (cfg.epsilon_exponent > 0.0) {
            const double eps = std::pow(static_cast<double>(n), -cfg.epsilon_exponent);
            k = std::max(1, level_at(k, eps, n));
        }
        // { z : #{<= z} >= k and #{>= z} >= k } = [x_(k), x_(n-k+1)].
        diam[static_cast<std::size_t>(idx)] =
            std::max(0.0, x[static_cast<std::size_t>(n - k)] - x[static_cast<std::size_t>(k - 1)]);
    });

    ScalingResult out;
    std::vector<double> lx, ly;
    for (int ni = 0; ni < nn; ++ni) {
        double s = 0.0, s2 = 0.0;
        for (int r = 0; r < cfg.reps; ++r) {
            const double v = diam[static_cast<std::size_t>(ni * cfg.reps + r)];
            s += v;
            s2 += v * v;
        }
        const double mean = s / cfg.reps;
        const double var = cfg.reps > 1 ? std::max(0.0, (s2 - cfg.reps * mean * mean) / (cfg.reps - 1)) : 0.0;
        out.table.push_back({cfg.n_grid[static_cast<std::size_t>(ni)], mean,
                             std::sqrt(var / cfg.reps)});
        lx.push_back(std::log(static_cast<double>(cfg.n_grid[static_cast<std::size_t>(ni)])));
        ly.push_back(std::log(std::max(mean, 1e-300)));
    }
    if (nn >= 2) {
        const LineFit fit = fit_line(lx, ly);
        const double tq = t975(nn - 2);
        out.slope = fit.slope;
        out.slope_lo = fit.slope - tq * fit.slope_stderr;
        out.slope_hi = fit.slope + tq * fit.slope_stderr;
        out.r_squared = fit.r_squared;
    }

    std::ostringstream csv;
    csv << csv_header(cfg) << "n,mean_diameter,std_error\n";
    for (const auto& row : out.table)
        csv << row.n << ',' << fmt(row.mean_diameter) << ',' << fmt(row.std_error) << '\n';
    csv << "# slope=" << fmt(out.slope) << ", ci=[" << fmt(out.slope_lo) << ','
        << fmt(out.slope_hi) << "], r2=" << fmt(out.r_squared) << '\n';
    out.csv = csv.str();
    return out;
}

LowerBoundResult run_lower_bound_check(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "lower_bound needs a 2-d model");
    require(!cfg.epsilon_grid.empty(), "lower_bound needs epsilon_grid");
    std::vector<double> eps(cfg.epsilon_grid);
    std::sort(eps.begin(), eps.end());
    for (double e : eps) require(e > 0.0, "epsilons must be positive");
    const int n = cfg.n_grid.front();
    const int ne = static_cast<int>(eps.size());

    const double kNaN = std::nan("");
    std::vector<double> diam(static_cast<std::size_t>(cfg.reps) * ne, kNaN);
    std::vector<double> minkc(static_cast<std::size_t>(cfg.reps) * ne, kNaN);
    std::vector<char> monotone(static_cast<std::size_t>(cfg.reps), 1);
    std::vector<double> min_ratio(static_cast<std::size_t>(cfg.reps),
                                  std::numeric_limits<double>::infinity());

    run_each(cfg, cfg.reps, [&](int r) {
        const PointCloud cloud =
            sample_elliptical(cfg.model, static_cast<std::size_t>(n),
                              mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        const RegionSweep sweep(cloud);
        const int kstar = sweep.max_level();
        const ConvexRegion inner = sweep.region(kstar);
        double prev = -1.0;
        for (int e = 0; e < ne; ++e) {
            const int k = level_at(kstar, eps[static_cast<std::size_t>(e)], n);
            if (k < 1) continue;  // level fell off the depth scale, exclude
            const ConvexRegion reg = sweep.region(k);
            const double dd = region_diameter(reg);
            const std::size_t slot = static_cast<std::size_t>(r) * ne + e;
            diam[slot] = dd;
            if (dd < prev - 1e-12) monotone[static_cast<std::size_t>(r)] = 0;
            prev = std::max(prev, dd);
            min_ratio[static_cast<std::size_t>(r)] =
                std::min(min_ratio[static_cast<std::size_t>(r)],
                         dd / eps[static_cast<std::size_t>(e)]);
            minkc[slot] = largest_minkowski_c(inner, reg, eps[static_cast<std::size_t>(e)]);
        }
    });

    LowerBoundResult out;
    std::vector<double> all_c;
    for (int e = 0; e < ne; ++e) {
        LowerBoundRow row;
        row.epsilon = eps[static_cast<std::size_t>(e)];
        double s = 0.0, sr = 0.0;
        int cnt = 0;
        for (int r = 0; r < cfg.reps; ++r) {
            const double dd = diam[static_cast<std::size_t>(r) * ne + e];
            if (std::isnan(dd)) {
                ++row.excluded;
                continue;
            }
            s += dd;
            sr += dd / row.epsilon;
            ++cnt;
            all_c.push_back(minkc[static_cast<std::size_t>(r) * ne + e]);
        }
        if (cnt > 0) {
            row.mean_diameter = s / cnt;
            row.mean_ratio = sr / cnt;
        }
        out.rows.push_back(row);
    }
    out.diameters_monotone =
        std::all_of(monotone.begin(), monotone.end(), [](char c) { return c != 0; });
    int ok = 0;
    for (double mr : min_ratio)
        if (std::isfinite(mr) && mr >= 0.1) ++ok;
    out.frac_min_ratio_ok = static_cast<double>(ok) / cfg.reps;
    out.median_minkowski_c = all_c.empty() ? 0.0 : median_of(all_c);

    std::ostringstream csv;
    csv << csv_header(cfg) << "epsilon,mean_diameter,mean_ratio,excluded\n";
    for (const auto& row : out.rows)
        csv << fmt(row.epsilon) << ',' << fmt(row.mean_diameter) << ',' << fmt(row.mean_ratio)
            << ',' << row.excluded << '\n';
    csv << "# monotone=" << (out.diameters_monotone ? 1 : 0)
        << ", frac_min_ratio_ok=" << fmt(out.frac_min_ratio_ok)
        << ", median_minkowski_c=" << fmt(out.median_minkowski_c) << '\n';
    out.csv = csv.str();
    return out;
}

ContaminationErrorResult run_contamination_error(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "contamination_error needs a 2-d model");
    require(cfg.plan.has_value(), "contamination_error needs a plan");
    const int n = cfg.n_grid.front();
    std::vector<double> err_tukey(static_cast<std::size_t>(cfg.reps));
    std::vector<double> err_mean(static_cast<std::size_t>(cfg.reps));
    const Point2 mu{cfg.model.mu[0], cfg.model.mu[1]};

    run_each(cfg, cfg.reps, [&](int r) {
        const std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
        const PointCloud clean = sample_elliptical(cfg.model, static_cast<std::size_t>(n), s);
        const PointCloud dirty = contaminate(clean, *cfg.plan, mix_seed(s, 0xC0FFEEULL));
        const TukeyMedianResult tm = tukey_median(dirty);
        err_tukey[static_cast<std::size_t>(r)] =
            norm2d(tm.median.x - mu.x, tm.median.y - mu.y);
        const std::vector<double> m = dirty.mean();
        err_mean[static_cast<std::size_t>(r)] = norm2d(m[0] - mu.x, m[1] - mu.y);
    });

    ContaminationErrorResult out;
    out.median_tukey_error = median_of(err_tukey);
    out.median_mean_error = median_of(err_mean);
    out.quantile_tukey_error = quantile_of(err_tukey, 1.0 - std::exp(-cfg.t));

    std::ostringstream csv;
    csv << csv_header(cfg) << "rep,tukey_error,mean_error\n";
    for (int r = 0; r < cfg.reps; ++r)
        csv << r << ',' << fmt(err_tukey[static_cast<std::size_t>(r)]) << ','
            << fmt(err_mean[static_cast<std::size_t>(r)]) << '\n';
    csv << "# median_tukey_error=" << fmt(out.median_tukey_error)
        << ", median_mean_error=" << fmt(out.median_mean_error)
        << ", quantile_tukey_error=" << fmt(out.quantile_tukey_error) << '\n';
    out.csv = csv.str();
    return out;
}

DirectionUniformityResult run_direction_uniformity(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "direction_uniformity needs a 2-d model");
    require(cfg.bins >= 2, "need at least 2 bins");
    const int n = cfg.n_grid.front();
    const std::vector<double> sq = matrix_sqrt_spd(cfg.model.shape, 2);
    const double det = sq[0] * sq[3] - sq[1] * sq[2];
    require(std::abs(det) > 1e-300, "shape square root is singular");
    // inverse of the 2x2 square root
    const double i00 = sq[3] / det, i01 = -sq[1] / det, i10 = -sq[2] / det, i11 = sq[0] / det;
    const Point2 mu{cfg.model.mu[0], cfg.model.mu[1]};

    std::vector<int> bin_of(static_cast<std::size_t>(cfg.reps), -1);
    std::vector<double> shaped_norm(static_cast<std::size_t>(cfg.reps), 0.0);

    run_each(cfg, cfg.reps, [&](int r) {
        const PointCloud cloud =
            sample_elliptical(cfg.model, static_cast<std::size_t>(n),
                              mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        const TukeyMedianResult tm = tukey_median(cloud);
        const double ex = tm.median.x - mu.x, ey = tm.median.y - mu.y;
        const double wx = i00 * ex + i01 * ey;
        const double wy = i10 * ex + i11 * ey;
        const double wn = norm2d(wx, wy);
        if (wn < 1e-12) return;  // leave excluded
        const double ang = std::atan2(wy, wx);  // (-pi, pi]
        int b = static_cast<int>(std::floor((ang + M_PI) / (2.0 * M_PI) * cfg.bins));
        b = std::clamp(b, 0, cfg.bins - 1);
        bin_of[static_cast<std::size_t>(r)] = b;
        const double ux = wx / wn, uy = wy / wn;
        shaped_norm[static_cast<std::size_t>(r)] =
            norm2d(sq[0] * ux + sq[1] * uy, sq[2] * ux + sq[3] * uy);
    });

    DirectionUniformityResult out;
    out.bin_counts.assign(static_cast<std::size_t>(cfg.bins), 0);
    double norm_sum = 0.0;
    int used = 0;
    for (int r = 0; r < cfg.reps; ++r) {
        const int b = bin_of[static_cast<std::size_t>(r)];
        if (b < 0) {
            ++out.excluded_zero;
            continue;
        }
        ++out.bin_counts[static_cast<std::size_t>(b)];
        norm_sum += shaped_norm[static_cast<std::size_t>(r)];
        ++used;
    }
    require(used > 0, "all replications excluded");
    out.mean_shaped_norm = norm_sum / used;
    const double expected = static_cast<double>(used) / cfg.bins;
    for (int b = 0; b < cfg.bins; ++b) {
        const double d = out.bin_counts[static_cast<std::size_t>(b)] - expected;
        out.chi_square += d * d / expected;
    }
    out.p_value = chi_square_pvalue(out.chi_square, cfg.bins - 1);

    std::ostringstream csv;
    csv << csv_header(cfg) << "bin,count\n";
    for (int b = 0; b < cfg.bins; ++b)
        csv << b << ',' << out.bin_counts[static_cast<std::size_t>(b)] << '\n';
    csv << "# chi_square=" << fmt(out.chi_square) << ", p_value=" << fmt(out.p_value)
        << ", mean_shaped_norm=" << fmt(out.mean_shaped_norm)
        << ", excluded=" << out.excluded_zero << '\n';
    out.csv = csv.str();
    return out;
}

EffectiveRankResult run_effective_rank_ratio(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "effective_rank needs a 2-d model");
    require(cfg.lambda > 0.0, "lambda must be positive");
    const int n = cfg.n_grid.front();
    EllipticalModel iso = cfg.model;
    iso.shape = {1.0, 0.0, 0.0, 1.0};
    EllipticalModel aniso = cfg.model;
    aniso.shape = {1.0, 0.0, 0.0, cfg.lambda};
    const Point2 mu{cfg.model.mu[0], cfg.model.mu[1]};

    std::vector<double> sq_err(static_cast<std::size_t>(2 * cfg.reps), 0.0);
    run_each(cfg, 2 * cfg.reps, [&](int idx) {
        const EllipticalModel& model = idx < cfg.reps ? iso : aniso;
        const PointCloud cloud =
            sample_elliptical(model, static_cast<std::size_t>(n),
                              mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        const TukeyMedianResult tm = tukey_median(cloud);
        const double ex = tm.median.x - mu.x, ey = tm.median.y - mu.y;
        sq_err[static_cast<std::size_t>(idx)] = ex * ex + ey * ey;
    });

    EffectiveRankResult out;
    double s_iso = 0.0, s_an = 0.0;
    for (int r = 0; r < cfg.reps; ++r) {
        s_iso += sq_err[static_cast<std::size_t>(r)];
        s_an += sq_err[static_cast<std::size_t>(cfg.reps + r)];
    }
    out.rms_isotropic = std::sqrt(s_iso / cfg.reps);
    out.rms_anisotropic = std::sqrt(s_an / cfg.reps);
    out.ratio = out.rms_isotropic / out.rms_anisotropic;

    std::ostringstream csv;
    csv << csv_header(cfg) << "arm,rms_error\n";
    csv << "isotropic," << fmt(out.rms_isotropic) << '\n';
    csv << "anisotropic," << fmt(out.rms_anisotropic) << '\n';
    csv << "# ratio=" << fmt(out.ratio) << ", lambda=" << fmt(cfg.lambda) << '\n';
    out.csv = csv.str();
    return out;
}

ModulusResult run_depth_modulus(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "depth_modulus needs a 2-d model");
    require(!cfg.delta_grid.empty(), "depth_modulus needs delta_grid");
    require(cfg.pairs_per_delta >= 1, "pairs_per_delta must be >= 1");
    std::vector<double> deltas(cfg.delta_grid);
    std::sort(deltas.begin(), deltas.end());
    const int n = cfg.n_grid.front();
    const int nd = static_cast<int>(deltas.size());
    const double dmax = deltas.back();

    std::vector<double> sup(static_cast<std::size_t>(cfg.reps) * nd, 0.0);
    run_each(cfg, cfg.reps, [&](int r) {
        const std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
        const PointCloud cloud = sample_elliptical(cfg.model, static_cast<std::size_t>(n), s);
        const RegionSweep sweep(cloud);
        const ConvexRegion inner = sweep.region(sweep.max_level());
        double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
        if (!inner.vertices.empty()) {
            lo_x = hi_x = inner.vertices.front().x;
            lo_y = hi_y = inner.vertices.front().y;
            for (const Point2& v : inner.vertices) {
                lo_x = std::min(lo_x, v.x);
                hi_x = std::max(hi_x, v.x);
                lo_y = std::min(lo_y, v.y);
                hi_y = std::max(hi_y, v.y);
            }
        }
        Rng rng(mix_seed(s, 0x9a1eULL));
        // Pair sets are nested across the ascending deltas (each step adds
        // pairs in the new distance band), so the sup is monotone by
        // construction.
        double worst = 0.0;
        double prev_delta = 0.0;
        for (int e = 0; e < nd; ++e) {
            const double delta = deltas[static_cast<std::size_t>(e)];
            for (int p = 0; p < cfg.pairs_per_delta; ++p) {
                const double zx = lo_x - dmax + rng.uniform() * (hi_x - lo_x + 2.0 * dmax);
                const double zy = lo_y - dmax + rng.uniform() * (hi_y - lo_y + 2.0 * dmax);
                const double ang = 2.0 * M_PI * rng.uniform();
                const double dist = prev_delta + (delta - prev_delta) * rng.uniform();
                const Point2 z1{zx, zy};
                const Point2 z2{zx + dist * std::cos(ang), zy + dist * std::sin(ang)};
                const double d1 = depth_exact_2d(cloud, z1).value();
                const double d2 = depth_exact_2d(cloud, z2).value();
                worst = std::max(worst, std::abs(d1 - d2));
            }
            sup[static_cast<std::size_t>(r) * nd + e] = worst;
            prev_delta = delta;
        }
    });

    ModulusResult out;
    for (int e = 0; e < nd; ++e) {
        ModulusRow row;
        row.delta = deltas[static_cast<std::size_t>(e)];
        double s = 0.0;
        for (int r = 0; r < cfg.reps; ++r) s += sup[static_cast<std::size_t>(r) * nd + e];
        row.mean_sup = s / cfg.reps;
        row.gaussian_term = row.delta * kDriftCoefficient;
        out.rows.push_back(row);
    }

    std::ostringstream csv;
    csv << csv_header(cfg) << "delta,mean_sup,gaussian_term\n";
    for (const auto& row : out.rows)
        csv << fmt(row.delta) << ',' << fmt(row.mean_sup) << ',' << fmt(row.gaussian_term)
            << '\n';
    out.csv = csv.str();
    return out;
}

WeakConvergenceResult run_weak_convergence(const ExperimentConfig& cfg) {
    require(cfg.model.dim() == 2, "weak_convergence needs a 2-d model");
    const int n = cfg.n_grid.front();
    const DirectionGrid grid = DirectionGrid::uniform(cfg.grid_m);
    const BridgeSimulator sim(grid);

    WeakConvergenceResult out;
    out.empirical_arm.assign(static_cast<std::size_t>(cfg.reps), 0.0);
    out.limit_arm.assign(static_cast<std::size_t>(cfg.reps), 0.0);

    run_each(cfg, 2 * cfg.reps, [&](int idx) {
        if (idx < cfg.reps) {
            const PointCloud cloud =
                sample_elliptical(cfg.model, static_cast<std::size_t>(n),
                                  mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
            const RegionSweep sweep(cloud);
            out.empirical_arm[static_cast<std::size_t>(idx)] =
                std::sqrt(static_cast<double>(n)) *
                (static_cast<double>(sweep.max_level()) / n - 0.5);
        } else {
            const int r = idx - cfg.reps;
            const std::vector<double> bridge =
                sim.draw(mix_seed(cfg.seed, 0x100000ULL + static_cast<std::uint64_t>(r)));
            const LimitField field =
                evaluate_w(grid, bridge, cfg.lattice_radius, cfg.lattice_side);
            out.limit_arm[static_cast<std::size_t>(r)] = field.w_max;
        }
    });
    out.ks_distance = ks_distance(out.empirical_arm, out.limit_arm);

    std::ostringstream csv;
    csv << csv_header(cfg) << "rep,empirical,limit\n";
    for (int r = 0; r < cfg.reps; ++r)
        csv << r << ',' << fmt(out.empirical_arm[static_cast<std::size_t>(r)]) << ','
            << fmt(out.limit_arm[static_cast<std::size_t>(r)]) << '\n';
    csv << "# ks=" << fmt(out.ks_distance) << '\n';
    out.csv = csv.str();
    return out;
}

std::string run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "diameter_scaling") return run_diameter_scaling(cfg).csv;
    if (cfg.kind == "diameter_scaling_1d") return run_diameter_scaling_1d(cfg).csv;
    if (cfg.kind == "lower_bound") return run_lower_bound_check(cfg).csv;
    if (cfg.kind == "contamination_error") return run_contamination_error(cfg).csv;
    if (cfg.kind == "direction_uniformity") return run_direction_uniformity(cfg).csv;
    if (cfg.kind == "effective_rank") return run_effective_rank_ratio(cfg).csv;
    if (cfg.kind == "depth_modulus") return run_depth_modulus(cfg).csv;
    if (cfg.kind == "weak_convergence") return run_weak_convergence(cfg).csv;
    throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
}

}  // namespace depthlab

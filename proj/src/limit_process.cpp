#include "depthlab/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>

#include "depthlab/rng.hpp"

namespace depthlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Monotone chain hull; used for level-set diameters.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    auto turn = [](const Point2& o, const Point2& a, const Point2& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

DirectionGrid DirectionGrid::uniform(int m) {
    if (m < 8 || m % 2 != 0)
        throw std::invalid_argument("DirectionGrid: m must be even and >= 8");
    DirectionGrid g;
    g.m = m;
    g.angles.resize(m);
    for (int i = 0; i < m; ++i) g.angles[i] = kTwoPi * static_cast<double>(i) / m;
    return g;
}

double bridge_covariance(double theta) {
    if (theta < 0.0 || theta > M_PI + 1e-12)
        throw std::invalid_argument("bridge_covariance: theta must be in [0, pi]");
    return (M_PI - theta) / kTwoPi - 0.25;
}

BridgeSimulator::BridgeSimulator(const DirectionGrid& grid) : grid_(grid) {
    const int h = grid.m / 2;
    Eigen::MatrixXd cov(h, h);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < h; ++j) {
            double diff = std::abs(grid.angles[i] - grid.angles[j]);
            if (diff > M_PI) diff = kTwoPi - diff;
            cov(i, j) = bridge_covariance(diff);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("BridgeSimulator: factorization failed, smallest eigenvalue " +
                                 std::to_string(es.eigenvalues().size() > 0
                                                    ? es.eigenvalues().minCoeff()
                                                    : 0.0));
    }
    // The grid covariance is PSD up to roundoff; clip at zero.
    Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd f = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
    factor_.resize(static_cast<std::size_t>(h) * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) factor_[static_cast<std::size_t>(i) * h + j] = f(i, j);
}

std::vector<double> BridgeSimulator::draw(std::uint64_t seed) const {
    const int h = grid_.m / 2;
    Rng rng(seed);
    std::vector<double> xi(h);
    for (double& v : xi) v = rng.normal();
    std::vector<double> g(grid_.m);
    for (int i = 0; i < h; ++i) {
        double s = 0.0;
        const double* row = factor_.data() + static_cast<std::size_t>(i) * h;
        for (int j = 0; j < h; ++j) s += row[j] * xi[j];
        g[i] = s;
        g[i + h] = -s;  // antisymmetry by construction
    }
    return g;
}

std::vector<double> simulate_bridge(const DirectionGrid& grid, std::uint64_t seed) {
    return BridgeSimulator(grid).draw(seed);
}

LimitField evaluate_w(const DirectionGrid& grid, const std::vector<double>& bridge,
                      double radius, int side, double drift) {
    if (static_cast<int>(bridge.size()) != grid.m)
        throw std::invalid_argument("evaluate_w: bridge size mismatch");
    if (side < 2) throw std::invalid_argument("evaluate_w: side >= 2 required");

    LimitField field;
    field.grid = grid;
    field.bridge = bridge;
    field.radius = radius;
    field.side = side;
    field.w.resize(static_cast<std::size_t>(side) * side);

    std::vector<double> cx(grid.m), cy(grid.m);
    for (int i = 0; i < grid.m; ++i) {
        cx[i] = drift * std::cos(grid.angles[i]);
        cy[i] = drift * std::sin(grid.angles[i]);
    }

    double best = -1e300;
    int best_ix = 0, best_iy = 0;
    for (int iy = 0; iy < side; ++iy) {
        const double zy = field.coord(iy);
        for (int ix = 0; ix < side; ++ix) {
            const double zx = field.coord(ix);
            double w = 1e300;
            for (int i = 0; i < grid.m; ++i) {
                w = std::min(w, bridge[i] - zx * cx[i] - zy * cy[i]);
            }
            field.w[static_cast<std::size_t>(iy) * side + ix] = w;
            if (w > best) {
                best = w;
                best_ix = ix;
                best_iy = iy;
            }
        }
    }
    field.w_max = best;
    field.argmax = {field.coord(best_ix), field.coord(best_iy)};
    for (int i = 0; i < grid.m; ++i) {
        const double v = bridge[i] - field.argmax.x * cx[i] - field.argmax.y * cy[i];
        if (v <= best + 1e-9) field.minimizer_angles.push_back(grid.angles[i]);
    }
    return field;
}

double limit_region_diameter(const LimitField& field, double beta) {
    if (beta < 0.0) throw std::invalid_argument("limit_region_diameter: beta >= 0 required");
    std::vector<Point2> pts;
    for (int iy = 0; iy < field.side; ++iy) {
        for (int ix = 0; ix < field.side; ++ix) {
            if (field.w[static_cast<std::size_t>(iy) * field.side + ix] >= field.w_max - beta) {
                pts.push_back({field.coord(ix), field.coord(iy)});
            }
        }
    }
    const std::vector<Point2> hull = convex_hull(std::move(pts));
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, distance(hull[i], hull[j]));
    return best;
}

std::string field_to_csv(const LimitField& field) {
    std::string out = "z_x,z_y,w\n";
    char buf[128];
    for (int iy = 0; iy < field.side; ++iy) {
        for (int ix = 0; ix < field.side; ++ix) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", field.coord(ix),
                          field.coord(iy),
                          field.w[static_cast<std::size_t>(iy) * field.side + ix]);
            out += buf;
        }
    }
    return out;
}

std::string field_summary_json(const LimitField& field) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "{\"argmax\":[%.17g,%.17g],\"w_max\":%.17g,\"spacing\":%.17g",
                  field.argmax.x, field.argmax.y, field.w_max, field.spacing());
    std::string out = buf;
    out += ",\"minimizer_angles\":[";
    for (std::size_t i = 0; i < field.minimizer_angles.size(); ++i) {
        if (i) out += ',';
        std::snprintf(buf, sizeof(buf), "%.17g", field.minimizer_angles[i]);
        out += buf;
    }
    out += "]}";
    return out;
}

}  // namespace depthlab

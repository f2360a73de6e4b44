#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depthlab/geom.hpp"

namespace depthlab {

// phi(0) for the standard normal: drift coefficient of the limit process.
inline constexpr double kDriftCoefficient = 0.3989422804014327;  // 1/sqrt(2*pi)

// Equispaced, antipodally closed direction grid on the circle.
struct DirectionGrid {
    int m = 0;
    std::vector<double> angles;

    static DirectionGrid uniform(int m);
};

// Covariance of halfspace indicators through the origin under the
// standard Gaussian, as a function of the angle between the normals.
double bridge_covariance(double theta);

// Draws of the bridge G(v, 0) on a direction grid. The covariance factor
// is computed once (symmetric eigendecomposition of the half-grid
// covariance, eigenvalues clipped at zero); antisymmetry G(-v) = -G(v)
// holds exactly by reflection.
class BridgeSimulator {
public:
    explicit BridgeSimulator(const DirectionGrid& grid);
    std::vector<double> draw(std::uint64_t seed) const;
    const DirectionGrid& grid() const { return grid_; }

private:
    DirectionGrid grid_;
    std::vector<double> factor_;  // (m/2) x (m/2), row-major
};

std::vector<double> simulate_bridge(const DirectionGrid& grid, std::uint64_t seed);

// Evaluated limit depth process on a square lattice.
struct LimitField {
    DirectionGrid grid;
    std::vector<double> bridge;  // G(v_i, 0)
    double radius = 8.0;         // lattice covers [-radius, radius]^2
    int side = 161;              // lattice points per axis
    std::vector<double> w;       // row-major, w[iy * side + ix]
    Point2 argmax;
    double w_max = 0.0;
    std::vector<double> minimizer_angles;  // directions attaining the min at argmax

    double spacing() const { return 2.0 * radius / static_cast<double>(side - 1); }
    double coord(int i) const { return -radius + spacing() * static_cast<double>(i); }
};

// W(z) = min_i [ G(v_i) - drift * <z, v_i> ] over the lattice; records the
// lattice argmax and the set of minimizing directions there (within 1e-9).
LimitField evaluate_w(const DirectionGrid& grid, const std::vector<double>& bridge,
                      double radius = 8.0, int side = 161,
                      double drift = kDriftCoefficient);

// Diameter of the lattice level set { z : W(z) >= max W - beta }.
double limit_region_diameter(const LimitField& field, double beta);

std::string field_to_csv(const LimitField& field);
std::string field_summary_json(const LimitField& field);

}  // namespace depthlab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depthlab/cloud.hpp"

namespace depthlab {

enum class RadialLaw { gaussian, student_t, unit_radius };

// Elliptically symmetric model: X = mu + eta * B * U with B B^T = Sigma
// and U uniform on the sphere. The gaussian radial law is normalized so
// that X ~ N(mu, Sigma) exactly.
struct EllipticalModel {
    std::vector<double> mu;
    std::vector<double> shape;  // row-major d x d, symmetric positive-definite
    RadialLaw radial = RadialLaw::gaussian;
    double nu = 0.0;  // degrees of freedom for student_t

    std::size_t dim() const { return mu.size(); }
};

struct ShapeSummary {
    double trace = 0.0;
    double spectral_norm = 0.0;
    double effective_rank = 0.0;
};

// Symmetric positive-definite square root, row-major. Diagonal matrices
// take an exact elementwise path; general ones go through an
// eigendecomposition. Throws on asymmetry (tol 1e-12) or a non-positive
// eigenvalue.
std::vector<double> matrix_sqrt_spd(const std::vector<double>& shape, std::size_t d);

PointCloud sample_elliptical(const EllipticalModel& model, std::size_t n, std::uint64_t seed);

ShapeSummary shape_summary(const std::vector<double>& shape, std::size_t d);

std::string model_to_json(const EllipticalModel& model);
EllipticalModel model_from_json(const std::string& text);
EllipticalModel load_model_json(const std::string& path);

}  // namespace depthlab

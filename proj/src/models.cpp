#include "depthlab/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

#include "depthlab/rng.hpp"

namespace depthlab {

namespace {

void check_shape(const std::vector<double>& shape, std::size_t d) {
    if (shape.size() != d * d) throw std::invalid_argument("shape: wrong size");
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (std::abs(shape[i * d + j] - shape[j * d + i]) > 1e-12)
                throw std::invalid_argument("shape: not symmetric");
        }
    }
}

bool is_diagonal(const std::vector<double>& shape, std::size_t d) {
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && shape[i * d + j] != 0.0) return false;
    return true;
}

}  // namespace

std::vector<double> matrix_sqrt_spd(const std::vector<double>& shape, std::size_t d) {
    check_shape(shape, d);
    std::vector<double> root(d * d, 0.0);
    if (is_diagonal(shape, d)) {
        for (std::size_t i = 0; i < d; ++i) {
            const double v = shape[i * d + i];
            if (v <= 0.0) throw std::invalid_argument("shape: not positive-definite");
            root[i * d + i] = std::sqrt(v);
        }
        return root;
    }
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = shape[i * d + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("shape: eigendecomposition failed");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("shape: not positive-definite");
    const Eigen::MatrixXd r =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) root[i * d + j] = r(i, j);
    return root;
}

PointCloud sample_elliptical(const EllipticalModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_elliptical: n >= 1 required");
    const std::size_t d = model.dim();
    if (model.radial == RadialLaw::student_t && model.nu <= 0.0)
        throw std::invalid_argument("sample_elliptical: student_t needs nu > 0");
    const std::vector<double> root = matrix_sqrt_spd(model.shape, d);

    Rng rng(seed);
    std::vector<double> data(n * d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) z[c] = rng.normal();
        switch (model.radial) {
            case RadialLaw::gaussian:
                break;  // X = mu + Sigma^{1/2} Z
            case RadialLaw::student_t: {
                const double w = rng.chi_square(model.nu);
                const double s = 1.0 / std::sqrt(w / model.nu);
                for (double& c : z) c *= s;
                break;
            }
            case RadialLaw::unit_radius: {
                double norm2 = 0.0;
                for (double c : z) norm2 += c * c;
                const double s = 1.0 / std::sqrt(norm2);
                for (double& c : z) c *= s;
                break;
            }
        }
        for (std::size_t r = 0; r < d; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += root[r * d + c] * z[c];
            data[i * d + r] = model.mu[r] + s;
        }
    }
    return PointCloud(d, std::move(data));
}

ShapeSummary shape_summary(const std::vector<double>& shape, std::size_t d) {
    check_shape(shape, d);
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += shape[i * d + i];

    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = shape[i * d + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("shape: eigendecomposition failed");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("shape: not positive-definite");
    const double norm = es.eigenvalues().maxCoeff();
    return {trace, norm, trace / norm};
}

std::string model_to_json(const EllipticalModel& model) {
    nlohmann::json j;
    j["mu"] = model.mu;
    const std::size_t d = model.dim();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < d; ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < d; ++c) row.push_back(model.shape[i * d + c]);
        rows.push_back(row);
    }
    j["shape"] = rows;
    switch (model.radial) {
        case RadialLaw::gaussian: j["radial"] = {{"kind", "gaussian"}}; break;
        case RadialLaw::student_t: j["radial"] = {{"kind", "student_t"}, {"nu", model.nu}}; break;
        case RadialLaw::unit_radius: j["radial"] = {{"kind", "unit_radius"}}; break;
    }
    return j.dump();
}

EllipticalModel model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EllipticalModel m;
    m.mu = j.at("mu").get<std::vector<double>>();
    const std::size_t d = m.mu.size();
    const auto& rows = j.at("shape");
    if (rows.size() != d) throw std::invalid_argument("model: shape/mu size mismatch");
    for (const auto& row : rows) {
        if (row.size() != d) throw std::invalid_argument("model: shape not square");
        for (const auto& v : row) m.shape.push_back(v.get<double>());
    }
    const std::string kind = j.at("radial").at("kind").get<std::string>();
    if (kind == "gaussian") {
        m.radial = RadialLaw::gaussian;
    } else if (kind == "student_t") {
        m.radial = RadialLaw::student_t;
        m.nu = j.at("radial").at("nu").get<double>();
    } else if (kind == "unit_radius") {
        m.radial = RadialLaw::unit_radius;
    } else {
        throw std::invalid_argument("model: unknown radial kind " + kind);
    }
    return m;
}

EllipticalModel load_model_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace depthlab

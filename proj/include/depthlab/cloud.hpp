#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "depthlab/geom.hpp"

namespace depthlab {

// Ordered sample of n points in R^d, stored row-major.
class PointCloud {
public:
    PointCloud(std::size_t dim, std::vector<double> data);
    static PointCloud from_points_2d(const std::vector<Point2>& pts);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return data_.size() / dim_; }

    std::span<const double> point(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    Point2 point2(std::size_t i) const {
        return {data_[i * dim_], data_[i * dim_ + 1]};
    }
    double& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    std::vector<double> mean() const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

// CSV dialect: comma separator, '.' decimal point, '\n' line endings,
// mandatory header "x1,...,xd", coordinates at 17 significant digits.
std::string cloud_to_csv(const PointCloud& cloud);
PointCloud cloud_from_csv(const std::string& text);
PointCloud load_cloud_csv(const std::string& path);
void save_cloud_csv(const PointCloud& cloud, const std::string& path);

}  // namespace depthlab

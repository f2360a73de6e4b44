#include "depthlab/cloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace depthlab {

PointCloud::PointCloud(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) throw std::invalid_argument("PointCloud: dim must be positive");
    if (data_.empty() || data_.size() % dim_ != 0)
        throw std::invalid_argument("PointCloud: data size must be a positive multiple of dim");
    for (double v : data_) {
        if (!std::isfinite(v)) throw std::invalid_argument("PointCloud: non-finite coordinate");
    }
}

PointCloud PointCloud::from_points_2d(const std::vector<Point2>& pts) {
    std::vector<double> data;
    data.reserve(pts.size() * 2);
    for (const Point2& p : pts) {
        data.push_back(p.x);
        data.push_back(p.y);
    }
    return PointCloud(2, std::move(data));
}

std::vector<double> PointCloud::mean() const {
    std::vector<double> m(dim_, 0.0);
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m[j] += at(i, j);
    for (double& v : m) v /= static_cast<double>(n);
    return m;
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::string out;
    char buf[40];
    for (std::size_t j = 0; j < cloud.dim(); ++j) {
        if (j) out += ',';
        out += 'x';
        out += std::to_string(j + 1);
    }
    out += '\n';
    const std::size_t n = cloud.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < cloud.dim(); ++j) {
            if (j) out += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", cloud.at(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

PointCloud cloud_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV: missing header");
    std::size_t dim = 1;
    for (char c : line) dim += (c == ',');

    std::vector<double> data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = 0, count = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string field = line.substr(pos, comma - pos);
            try {
                std::size_t used = 0;
                data.push_back(std::stod(field, &used));
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw std::runtime_error("CSV: malformed value at line " +
                                         std::to_string(line_no));
            }
            ++count;
            pos = comma + 1;
            if (comma == line.size()) break;
        }
        if (count != dim)
            throw std::runtime_error("CSV: wrong field count at line " + std::to_string(line_no));
    }
    if (data.empty()) throw std::runtime_error("CSV: no data rows");
    return PointCloud(dim, std::move(data));
}

PointCloud load_cloud_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return cloud_from_csv(ss.str());
}

void save_cloud_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << cloud_to_csv(cloud);
}

}  // namespace depthlab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace depthlab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
double distance(const Point2& a, const Point2& b);

// Halfplane in support-function form: { z : <z, normal> <= offset }.
// The normal must be a unit vector (within 1e-12).
struct HalfPlane {
    Point2 normal;
    double offset = 0.0;

    HalfPlane() = default;
    HalfPlane(Point2 n, double c) : normal(n), offset(c) {}

    bool contains(const Point2& z, double tol = 0.0) const {
        return dot(z, normal) <= offset + tol;
    }
};

enum class RegionKind { empty, point, segment, polygon };

// Possibly degenerate convex set in the plane. Polygon vertices are
// stored counterclockwise with the lexicographically smallest vertex
// first, so equality is testable after rounding.
struct ConvexRegion {
    RegionKind kind = RegionKind::empty;
    std::vector<Point2> vertices;

    static ConvexRegion make_empty() { return {}; }
    static ConvexRegion make_point(Point2 p);
    static ConvexRegion make_segment(Point2 a, Point2 b);

    bool is_empty() const { return kind == RegionKind::empty; }
    bool contains(const Point2& z, double tol = 1e-9) const;
};

// Streaming intersection of halfplanes. Starts from a large axis-aligned
// box (side kBoxSide) and clips it one halfplane at a time; call finish()
// to classify the result into the four region kinds.
class HalfPlaneClipper {
public:
    static constexpr double kBoxSide = 1e6;

    HalfPlaneClipper();
    // Start from a custom box; exact when the intersection is known to
    // lie inside it, and keeps intersection arithmetic near the data scale.
    HalfPlaneClipper(const Point2& lo, const Point2& hi);
    void add(const HalfPlane& h);
    bool empty() const { return poly_.empty(); }
    ConvexRegion finish() const;

private:
    std::vector<Point2> poly_;
    std::vector<Point2> scratch_;
};

ConvexRegion intersect_halfplanes(const std::vector<HalfPlane>& halfplanes);

// Max pairwise Euclidean distance between points of the region;
// zero for point and empty regions.
double region_diameter(const ConvexRegion& region);

// Area centroid for polygons, midpoint for segments, the point itself
// for points. Throws std::invalid_argument on empty regions.
Point2 region_barycenter(const ConvexRegion& region);

// Canonicalizes a raw convex vertex chain: collapses vertices coincident
// within tol, prunes collinear vertices, detects point/segment degeneracy
// and rotates the list so the lexicographically smallest vertex is first.
ConvexRegion classify_convex_chain(const std::vector<Point2>& chain, double tol = 1e-9);

std::string region_to_json(const ConvexRegion& region);
ConvexRegion region_from_json(const std::string& text);

}  // namespace depthlab

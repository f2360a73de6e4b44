#include "depthlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace depthlab {

namespace {

constexpr double kInsideTol = 1e-9;

bool lex_less(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

double point_segment_distance(const Point2& z, const Point2& a, const Point2& b) {
    const Point2 d{b.x - a.x, b.y - a.y};
    const double len2 = dot(d, d);
    if (len2 == 0.0) return distance(z, a);
    double t = ((z.x - a.x) * d.x + (z.y - a.y) * d.y) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(z, Point2{a.x + t * d.x, a.y + t * d.y});
}

void format_coord(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

ConvexRegion ConvexRegion::make_point(Point2 p) {
    ConvexRegion r;
    r.kind = RegionKind::point;
    r.vertices = {p};
    return r;
}

ConvexRegion ConvexRegion::make_segment(Point2 a, Point2 b) {
    ConvexRegion r;
    r.kind = RegionKind::segment;
    if (lex_less(b, a)) std::swap(a, b);
    r.vertices = {a, b};
    return r;
}

bool ConvexRegion::contains(const Point2& z, double tol) const {
    switch (kind) {
        case RegionKind::empty:
            return false;
        case RegionKind::point:
            return distance(z, vertices[0]) <= tol;
        case RegionKind::segment:
            return point_segment_distance(z, vertices[0], vertices[1]) <= tol;
        case RegionKind::polygon: {
            const size_t m = vertices.size();
            for (size_t i = 0; i < m; ++i) {
                const Point2& a = vertices[i];
                const Point2& b = vertices[(i + 1) % m];
                const Point2 e{b.x - a.x, b.y - a.y};
                const double len = std::hypot(e.x, e.y);
                if (cross(e, Point2{z.x - a.x, z.y - a.y}) < -tol * len) return false;
            }
            return true;
        }
    }
    return false;
}

HalfPlaneClipper::HalfPlaneClipper() {
    const double s = kBoxSide / 2.0;
    poly_ = {{-s, -s}, {s, -s}, {s, s}, {-s, s}};
}

HalfPlaneClipper::HalfPlaneClipper(const Point2& lo, const Point2& hi) {
    poly_ = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
}

void HalfPlaneClipper::add(const HalfPlane& h) {
    if (poly_.empty()) return;

    // Fast path: nothing to cut.
    double worst = -1e300;
    for (const Point2& p : poly_) worst = std::max(worst, dot(p, h.normal) - h.offset);
    if (worst <= kInsideTol) return;

    scratch_.clear();
    const size_t m = poly_.size();
    double d_prev = dot(poly_[m - 1], h.normal) - h.offset;
    for (size_t i = 0; i < m; ++i) {
        const double d_cur = dot(poly_[i], h.normal) - h.offset;
        const bool in_prev = d_prev <= kInsideTol;
        const bool in_cur = d_cur <= kInsideTol;
        if (in_prev != in_cur) {
            const Point2& a = poly_[(i + m - 1) % m];
            const Point2& b = poly_[i];
            // Clamp: when both distances sit inside the tolerance band the
            // ratio is ill-conditioned and the crossing must not leave the
            // edge segment.
            const double t = std::clamp(d_prev / (d_prev - d_cur), 0.0, 1.0);
            scratch_.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
        if (in_cur) scratch_.push_back(poly_[i]);
        d_prev = d_cur;
    }
    poly_.swap(scratch_);
}

ConvexRegion HalfPlaneClipper::finish() const {
    return classify_convex_chain(poly_);
}

ConvexRegion classify_convex_chain(const std::vector<Point2>& chain, double tol) {
    if (chain.empty()) return ConvexRegion::make_empty();

    // Collapse consecutive coincident vertices (circularly).
    std::vector<Point2> v;
    v.reserve(chain.size());
    for (const Point2& p : chain) {
        if (v.empty() || distance(v.back(), p) > tol) v.push_back(p);
    }
    while (v.size() > 1 && distance(v.front(), v.back()) <= tol) v.pop_back();

    if (v.size() == 1) return ConvexRegion::make_point(v[0]);
    if (v.size() == 2) return ConvexRegion::make_segment(v[0], v[1]);

    // Flat chains collapse to a segment spanned by the extreme vertices.
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < v.size(); ++i) {
        if (lex_less(v[i], v[lo])) lo = i;
        if (lex_less(v[hi], v[i])) hi = i;
    }
    const Point2 axis{v[hi].x - v[lo].x, v[hi].y - v[lo].y};
    const double span = std::hypot(axis.x, axis.y);
    bool flat = true;
    for (const Point2& p : v) {
        if (std::abs(cross(axis, Point2{p.x - v[lo].x, p.y - v[lo].y})) > tol * std::max(span, 1.0)) {
            flat = false;
            break;
        }
    }
    if (flat) {
        if (span <= tol) return ConvexRegion::make_point(v[lo]);
        return ConvexRegion::make_segment(v[lo], v[hi]);
    }

    // Rebuild a strictly convex polygon with a monotone-chain hull. Chains
    // coming out of tolerance-based clipping carry sliver vertices and can
    // be locally non-convex at the tolerance scale; the hull of the vertex
    // set is the intended region and is insensitive to the input order.
    std::sort(v.begin(), v.end(), [](const Point2& a, const Point2& b) { return lex_less(a, b); });
    const auto turn_ok = [&](const Point2& a, const Point2& b, const Point2& c) {
        const double turn = cross(Point2{b.x - a.x, b.y - a.y}, Point2{c.x - b.x, c.y - b.y});
        const double scale = std::max({1.0, distance(a, b), distance(b, c)});
        return turn > tol * scale;  // strict left turn
    };
    std::vector<Point2> pruned;
    for (const Point2& p : v) {  // lower hull
        while (pruned.size() >= 2 &&
               !turn_ok(pruned[pruned.size() - 2], pruned.back(), p))
            pruned.pop_back();
        pruned.push_back(p);
    }
    const size_t lower_size = pruned.size();
    for (size_t i = v.size() - 1; i-- > 0;) {  // upper hull
        const Point2& p = v[i];
        while (pruned.size() > lower_size &&
               !turn_ok(pruned[pruned.size() - 2], pruned.back(), p))
            pruned.pop_back();
        pruned.push_back(p);
    }
    pruned.pop_back();  // last vertex repeats the first
    if (pruned.size() < 3) {
        // The hull collapsed: flat at a coarser scale than the span test.
        return classify_convex_chain(pruned, tol);
    }

    // Canonical start: lexicographically smallest vertex first.
    size_t first = 0;
    for (size_t i = 1; i < pruned.size(); ++i) {
        if (lex_less(pruned[i], pruned[first])) first = i;
    }
    std::rotate(pruned.begin(), pruned.begin() + static_cast<long>(first), pruned.end());

    ConvexRegion r;
    r.kind = RegionKind::polygon;
    r.vertices = std::move(pruned);
    return r;
}

ConvexRegion intersect_halfplanes(const std::vector<HalfPlane>& halfplanes) {
    if (halfplanes.empty()) throw std::invalid_argument("intersect_halfplanes: empty input");
    HalfPlaneClipper clipper;
    for (const HalfPlane& h : halfplanes) {
        clipper.add(h);
        if (clipper.empty()) break;
    }
    return clipper.finish();
}

double region_diameter(const ConvexRegion& region) {
    switch (region.kind) {
        case RegionKind::empty:
        case RegionKind::point:
            return 0.0;
        case RegionKind::segment:
            return distance(region.vertices[0], region.vertices[1]);
        case RegionKind::polygon:
            break;
    }
    const auto& v = region.vertices;
    const size_t m = v.size();
    if (m <= 64) {
        double best = 0.0;
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j) best = std::max(best, distance(v[i], v[j]));
        return best;
    }
    // Rotating calipers over the strictly convex CCW chain.
    auto area2 = [&](size_t i, size_t j, size_t k) {
        return std::abs(cross(Point2{v[j].x - v[i].x, v[j].y - v[i].y},
                              Point2{v[k].x - v[i].x, v[k].y - v[i].y}));
    };
    double best = 0.0;
    size_t j = 1;
    for (size_t i = 0; i < m; ++i) {
        const size_t next = (i + 1) % m;
        while (area2(i, next, (j + 1) % m) > area2(i, next, j)) j = (j + 1) % m;
        best = std::max({best, distance(v[i], v[j]), distance(v[next], v[j])});
    }
    return best;
}

Point2 region_barycenter(const ConvexRegion& region) {
    switch (region.kind) {
        case RegionKind::empty:
            throw std::invalid_argument("region_barycenter: empty region");
        case RegionKind::point:
            return region.vertices[0];
        case RegionKind::segment:
            return {(region.vertices[0].x + region.vertices[1].x) / 2.0,
                    (region.vertices[0].y + region.vertices[1].y) / 2.0};
        case RegionKind::polygon:
            break;
    }
    const auto& v = region.vertices;
    const size_t m = v.size();
    // Shoelace centroid, anchored at v[0] for numerical stability.
    double area2 = 0.0, cx = 0.0, cy = 0.0;
    for (size_t i = 1; i + 1 < m; ++i) {
        const double a = cross(Point2{v[i].x - v[0].x, v[i].y - v[0].y},
                               Point2{v[i + 1].x - v[0].x, v[i + 1].y - v[0].y});
        area2 += a;
        cx += a * (v[0].x + v[i].x + v[i + 1].x);
        cy += a * (v[0].y + v[i].y + v[i + 1].y);
    }
    if (area2 == 0.0) {
        // Numerically flat polygon: fall back to the vertex mean.
        double sx = 0.0, sy = 0.0;
        for (const Point2& p : v) sx += p.x, sy += p.y;
        return {sx / static_cast<double>(m), sy / static_cast<double>(m)};
    }
    return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

std::string region_to_json(const ConvexRegion& region) {
    std::string kind;
    switch (region.kind) {
        case RegionKind::empty: kind = "empty"; break;
        case RegionKind::point: kind = "point"; break;
        case RegionKind::segment: kind = "segment"; break;
        case RegionKind::polygon: kind = "polygon"; break;
    }
    std::string out = "{\"kind\":\"" + kind + "\",\"vertices\":[";
    for (size_t i = 0; i < region.vertices.size(); ++i) {
        if (i) out += ',';
        out += '[';
        format_coord(out, region.vertices[i].x);
        out += ',';
        format_coord(out, region.vertices[i].y);
        out += ']';
    }
    out += "]}";
    return out;
}

ConvexRegion region_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    ConvexRegion r;
    if (kind == "empty") r.kind = RegionKind::empty;
    else if (kind == "point") r.kind = RegionKind::point;
    else if (kind == "segment") r.kind = RegionKind::segment;
    else if (kind == "polygon") r.kind = RegionKind::polygon;
    else throw std::invalid_argument("region_from_json: unknown kind " + kind);
    for (const auto& v : j.at("vertices")) {
        r.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    return r;
}

}  // namespace depthlab

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "artpose/types.hpp"

namespace artpose {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
};

inline double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-aligned unless angle != 0. Angle is radians from the x-axis.
struct OrientedRect {
    Point center;
    double half_width = 0.0;
    double half_height = 0.0;
    double angle = 0.0;
};

inline constexpr double kCoincidentEps = 1e-9;

// Unsigned angle at vertex b between rays b->a and b->c, in degrees [0, 180].
// Uses atan2 of cross/dot rather than acos to stay accurate near 0 and 180.
inline double inner_angle(Point a, Point b, Point c) {
    const Point u = a - b;
    const Point v = c - b;
    if (std::hypot(u.x, u.y) <= kCoincidentEps || std::hypot(v.x, v.y) <= kCoincidentEps) {
        throw GeometryError("inner_angle: degenerate triplet, vertex coincides with an endpoint");
    }
    const double cross = u.x * v.y - u.y * v.x;
    const double dot = u.x * v.x + u.y * v.y;
    return std::atan2(std::fabs(cross), dot) * 180.0 / std::numbers::pi;
}

inline Point rotate_about(Point p, Point center, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Point d = p - center;
    return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

// Minimal axis-aligned rectangle containing all points (angle = 0).
inline OrientedRect tight_bbox(std::span<const Point> points) {
    if (points.empty()) {
        throw GeometryError("tight_bbox: empty point set");
    }
    double min_x = points[0].x, max_x = points[0].x;
    double min_y = points[0].y, max_y = points[0].y;
    for (const Point& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return {{0.5 * (min_x + max_x), 0.5 * (min_y + max_y)},
            0.5 * (max_x - min_x),
            0.5 * (max_y - min_y),
            0.0};
}

inline double polygon_signed_area(const SegmentPolygon& poly) {
    double acc = 0.0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& [x0, y0] = v[i];
        const auto& [x1, y1] = v[(i + 1) % v.size()];
        acc += x0 * y1 - x1 * y0;
    }
    return 0.5 * acc;
}

// Area centroid by the shoelace formula.
inline Point polygon_centroid(const SegmentPolygon& poly) {
    const double area = polygon_signed_area(poly);
    if (std::fabs(area) <= kCoincidentEps) {
        throw GeometryError("polygon_centroid: zero-area polygon");
    }
    double cx = 0.0, cy = 0.0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& [x0, y0] = v[i];
        const auto& [x1, y1] = v[(i + 1) % v.size()];
        const double w = x0 * y1 - x1 * y0;
        cx += (x0 + x1) * w;
        cy += (y0 + y1) * w;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

namespace detail {

// Proper segment intersection test for the self-intersection check below.
// Shared endpoints of adjacent edges do not count.
inline int orient(Point a, Point b, Point c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
}

inline bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace detail

// True when any two non-adjacent edges cross.
inline bool polygon_self_intersects(const SegmentPolygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 4) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t i2 = (i + 1) % n;
            const std::size_t j2 = (j + 1) % n;
            if (i2 == j || j2 == i) continue;  // adjacent edges share a vertex
            const Point a{v[i].first, v[i].second};
            const Point b{v[i2].first, v[i2].second};
            const Point c{v[j].first, v[j].second};
            const Point d{v[j2].first, v[j2].second};
            if (detail::segments_intersect(a, b, c, d)) return true;
        }
    }
    return false;
}

inline bool rects_overlap(const OrientedRect& a, const OrientedRect& b) {
    // Axis-aligned test; positive-area intersection only, edge contact does not count.
    return std::fabs(a.center.x - b.center.x) < a.half_width + b.half_width &&
           std::fabs(a.center.y - b.center.y) < a.half_height + b.half_height;
}

}  // namespace artpose

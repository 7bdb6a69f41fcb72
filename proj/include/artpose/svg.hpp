#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "artpose/anchors.hpp"
#include "artpose/cluster.hpp"
#include "artpose/reports.hpp"
#include "artpose/stats.hpp"

namespace artpose {

// All emitters draw elements in a fixed key order (keypoint name, part name,
// leaf index) so repeated runs are byte-identical.

namespace detail {

inline void svg_open(std::ostringstream& out, double width, double height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(width)
        << "\" height=\"" << fmt_num(height) << "\" viewBox=\"0 0 " << fmt_num(width)
        << ' ' << fmt_num(height) << "\">\n";
}

inline void svg_line(std::ostringstream& out, Point a, Point b, const char* stroke,
                     double width = 1.0) {
    out << "  <line x1=\"" << fmt_num(a.x) << "\" y1=\"" << fmt_num(a.y) << "\" x2=\""
        << fmt_num(b.x) << "\" y2=\"" << fmt_num(b.y) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << fmt_num(width) << "\"/>\n";
}

inline void svg_polyline(std::ostringstream& out, const std::vector<Point>& pts,
                         const char* stroke) {
    out << "  <polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out << ' ';
        out << fmt_num(pts[i].x) << ',' << fmt_num(pts[i].y);
    }
    out << "\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
}

// Skeleton bones drawn under the ellipses, keyed by keypoint pairs.
inline constexpr std::array<std::pair<KeypointName, KeypointName>, 14> kSkeletonBones = {{
    {KeypointName::Nose, KeypointName::Neck},
    {KeypointName::Neck, KeypointName::RShoulder},
    {KeypointName::RShoulder, KeypointName::RElbow},
    {KeypointName::RElbow, KeypointName::RWrist},
    {KeypointName::Neck, KeypointName::LShoulder},
    {KeypointName::LShoulder, KeypointName::LElbow},
    {KeypointName::LElbow, KeypointName::LWrist},
    {KeypointName::Neck, KeypointName::MidHip},
    {KeypointName::MidHip, KeypointName::RHip},
    {KeypointName::RHip, KeypointName::RKnee},
    {KeypointName::RKnee, KeypointName::RAnkle},
    {KeypointName::MidHip, KeypointName::LHip},
    {KeypointName::LHip, KeypointName::LKnee},
    {KeypointName::LKnee, KeypointName::LAnkle},
}};

}  // namespace detail

// Ellipses overlaid on a skeleton glyph built from the fitted means.
// Canonical coordinates (neck at origin) are shifted into the 624x624 viewport.
inline std::string ellipsoid_svg(const EllipsoidFit& fit, std::size_t steps = 64) {
    const double size = AnchorTable::kFrameSize;
    const Point offset{size / 2.0, size / 3.0};  // neck placed at (312, 208)
    std::ostringstream out;
    detail::svg_open(out, size, size);
    auto find = [&fit](KeypointName name) -> const KeypointStats* {
        for (const KeypointStats& st : fit.stats) {
            if (st.name == name) return &st;
        }
        return nullptr;
    };
    for (const auto& [a, b] : detail::kSkeletonBones) {
        const KeypointStats* sa = find(a);
        const KeypointStats* sb = find(b);
        if (!sa || !sb) continue;
        detail::svg_line(out, sa->mean + offset, sb->mean + offset, "#999999");
    }
    for (const KeypointStats& st : fit.stats) {
        std::vector<Point> outline = ellipse_outline(st, steps);
        for (Point& p : outline) p = p + offset;
        detail::svg_polyline(out, outline, "#1f77b4");
    }
    out << "</svg>\n";
    return out.str();
}

// Contour rectangles over the Vitruvian frame.
inline std::string contour_svg(const ContourModel& model) {
    const double size = AnchorTable::kFrameSize;
    std::ostringstream out;
    detail::svg_open(out, size, size);
    out << "  <rect x=\"0\" y=\"0\" width=\"" << fmt_num(size) << "\" height=\""
        << fmt_num(size) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    for (BodyPart part : kTPoseParts) {
        auto it = model.parts.find(part);
        if (it == model.parts.end() || it->second.n == 0) continue;
        const ContourPart& p = it->second;
        // The anchor pins the proximal edge for limbs/torso; the contour is a
        // summary, so the rectangle is drawn centered on the anchor for the
        // head and hung from the anchor along the part axis otherwise.
        out << "  <rect x=\"" << fmt_num(p.anchor.x - p.half_width) << "\" y=\""
            << fmt_num(p.anchor.y - p.half_height) << "\" width=\""
            << fmt_num(2.0 * p.half_width) << "\" height=\""
            << fmt_num(2.0 * p.half_height) << "\" fill=\"none\" stroke=\"#d62728\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Dendrogram: leaves on the x-axis in seriation order, merge height on y.
inline std::string dendrogram_svg(const Dendrogram& d) {
    const std::size_t n = d.leaves.size();
    const double width = 640.0, height = 480.0;
    const double margin = 40.0;
    const double leaf_gap = n > 1 ? (width - 2.0 * margin) / static_cast<double>(n - 1) : 0.0;

    // Seriation: leaf order from an in-order walk of the merge tree.
    std::vector<std::vector<std::size_t>> order(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) order[i] = {i};
    for (std::size_t step = 0; step < d.merges.size(); ++step) {
        const Merge& m = d.merges[step];
        std::vector<std::size_t> joined = order[m.a];
        joined.insert(joined.end(), order[m.b].begin(), order[m.b].end());
        order[n + step] = std::move(joined);
    }
    const std::vector<std::size_t>& seriation =
        d.merges.empty() ? order[0] : order[n + d.merges.size() - 1];
    std::vector<double> leaf_x(n);
    for (std::size_t pos = 0; pos < seriation.size(); ++pos) {
        leaf_x[seriation[pos]] = margin + leaf_gap * static_cast<double>(pos);
    }

    double max_h = 0.0;
    for (const Merge& m : d.merges) max_h = std::max(max_h, m.height);
    if (max_h <= 0.0) max_h = 1.0;
    const double baseline = height - margin;
    auto to_y = [&](double h) { return baseline - h / max_h * (height - 2.0 * margin); };

    std::vector<double> node_x(2 * n - 1, 0.0), node_y(2 * n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        node_x[i] = leaf_x[i];
        node_y[i] = baseline;
    }
    std::ostringstream out;
    detail::svg_open(out, width, height);
    for (std::size_t step = 0; step < d.merges.size(); ++step) {
        const Merge& m = d.merges[step];
        const double y = to_y(m.height);
        const double xa = node_x[m.a], xb = node_x[m.b];
        detail::svg_line(out, {xa, node_y[m.a]}, {xa, y}, "#333333");
        detail::svg_line(out, {xb, node_y[m.b]}, {xb, y}, "#333333");
        detail::svg_line(out, {xa, y}, {xb, y}, "#333333");
        node_x[n + step] = 0.5 * (xa + xb);
        node_y[n + step] = y;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << "  <text x=\"" << fmt_num(leaf_x[i]) << "\" y=\""
            << fmt_num(baseline + 14.0)
            << "\" font-size=\"9\" text-anchor=\"middle\">" << d.leaves[i]
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace artpose

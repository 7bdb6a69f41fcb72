#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "artpose/anchors.hpp"
#include "artpose/normalize.hpp"
#include "artpose/types.hpp"

namespace artpose {

struct KeypointStats {
    KeypointName name{};
    std::size_t n = 0;
    Point mean;
    double cov_xx = 0.0;
    double cov_xy = 0.0;
    double cov_yy = 0.0;
    double radius_x = 0.0;
    double radius_y = 0.0;
    double scale_x = 0.0;
    double scale_y = 0.0;
    bool degenerate = false;  // a variance vanished; correlation treated as 0
};

struct FitWarning {
    KeypointName name{};
    std::size_t n = 0;
    std::string message;
};

struct EllipsoidFit {
    std::vector<KeypointStats> stats;   // keypoint order of kAllKeypoints
    std::vector<FitWarning> warnings;   // keypoints with < 2 samples
};

// Per-keypoint sample mean and covariance (denominator n-1) over the poses
// where that keypoint is present, with the half-standard-deviation ellipse
// parameters derived from the correlation. Samples are accumulated in
// figure-id order so results do not depend on corpus order.
inline EllipsoidFit fit_ellipsoids(const std::vector<NormalizedPose>& corpus) {
    if (corpus.empty()) {
        throw DomainError("fit_ellipsoids: empty corpus");
    }
    std::vector<const NormalizedPose*> ordered;
    ordered.reserve(corpus.size());
    for (const auto& pose : corpus) ordered.push_back(&pose);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const NormalizedPose* a, const NormalizedPose* b) {
                         return a->figure_id < b->figure_id;
                     });

    EllipsoidFit fit;
    for (KeypointName name : kAllKeypoints) {
        std::vector<Point> samples;
        for (const NormalizedPose* pose : ordered) {
            const auto& kp = pose->keypoint(name);
            if (kp) samples.push_back({kp->x, kp->y});
        }
        if (samples.size() < 2) {
            fit.warnings.push_back({name, samples.size(),
                                    "fewer than 2 samples; statistics omitted"});
            continue;
        }
        KeypointStats st;
        st.name = name;
        st.n = samples.size();
        double sx = 0.0, sy = 0.0;
        for (const Point& p : samples) {
            sx += p.x;
            sy += p.y;
        }
        const double n = static_cast<double>(samples.size());
        st.mean = {sx / n, sy / n};
        double cxx = 0.0, cxy = 0.0, cyy = 0.0;
        for (const Point& p : samples) {
            const double dx = p.x - st.mean.x;
            const double dy = p.y - st.mean.y;
            cxx += dx * dx;
            cxy += dx * dy;
            cyy += dy * dy;
        }
        st.cov_xx = cxx / (n - 1.0);
        st.cov_xy = cxy / (n - 1.0);
        st.cov_yy = cyy / (n - 1.0);

        double rho = 0.0;
        if (st.cov_xx * st.cov_yy > 0.0) {
            rho = st.cov_xy / std::sqrt(st.cov_xx * st.cov_yy);
            rho = std::clamp(rho, -1.0, 1.0);
        } else {
            st.degenerate = true;
        }
        st.radius_x = std::sqrt(1.0 + rho);
        st.radius_y = std::sqrt(1.0 - rho);
        st.scale_x = std::sqrt(st.cov_xx) * 0.5;
        st.scale_y = std::sqrt(st.cov_yy) * 0.5;
        fit.stats.push_back(st);
    }
    return fit;
}

// Polyline of the half-standard-deviation ellipse: unit circle, axes scaled
// by (radius_x, radius_y), rotated by +45 degrees, scaled by (scale_x,
// scale_y), translated to the mean.
inline std::vector<Point> ellipse_outline(const KeypointStats& stats, std::size_t steps) {
    if (steps < 8) {
        throw DomainError("ellipse_outline: need at least 8 steps");
    }
    const double c45 = std::sqrt(0.5);
    std::vector<Point> out;
    out.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(steps);
        const double ux = stats.radius_x * std::cos(t);
        const double uy = stats.radius_y * std::sin(t);
        const double rx = c45 * ux - c45 * uy;
        const double ry = c45 * ux + c45 * uy;
        out.push_back({stats.mean.x + stats.scale_x * rx,
                       stats.mean.y + stats.scale_y * ry});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Average contours.

struct ContourPart {
    std::size_t n = 0;
    double half_width = 0.0;   // mean over contributing figures
    double half_height = 0.0;
    Point anchor;              // from the anchor table
};

struct ContourModel {
    Gender gender = Gender::Unknown;
    std::map<BodyPart, ContourPart> parts;  // only parts with n > 0 carry extents
};

// Mean rectangle extents per part over non-discarded figures of the given
// gender. Figures are aggregated in figure-id order for order independence.
inline ContourModel average_contour(const std::vector<VitruvianFigure>& figures,
                                    Gender gender, const AnchorTable& anchors) {
    std::vector<const VitruvianFigure*> ordered;
    for (const auto& fig : figures) {
        if (fig.gender == gender && !fig.discarded()) ordered.push_back(&fig);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const VitruvianFigure* a, const VitruvianFigure* b) {
                         return a->figure_id < b->figure_id;
                     });
    ContourModel model;
    model.gender = gender;
    for (BodyPart part : kTPoseParts) {
        double sw = 0.0, sh = 0.0;
        std::size_t n = 0;
        for (const VitruvianFigure* fig : ordered) {
            auto it = fig->segments.find(part);
            if (it == fig->segments.end()) continue;
            sw += it->second.half_width;
            sh += it->second.half_height;
            ++n;
        }
        if (n == 0) {
            model.parts[part] = {0, 0.0, 0.0, anchors.at(part).anchor};
        } else {
            const double dn = static_cast<double>(n);
            model.parts[part] = {n, sw / dn, sh / dn, anchors.at(part).anchor};
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// Contour comparison.

enum class ContourTag { Inflated, Similar, Slender };

inline std::string_view to_string(ContourTag tag) {
    switch (tag) {
        case ContourTag::Inflated: return "inflated";
        case ContourTag::Similar: return "similar";
        case ContourTag::Slender: return "slender";
    }
    throw DomainError("unknown contour tag");
}

struct ContourComparison {
    BodyPart part{};
    bool comparable = false;  // both sides have samples
    double width_ratio = 0.0;
    double height_ratio = 0.0;
    ContourTag width_tag = ContourTag::Similar;
    ContourTag height_tag = ContourTag::Similar;
};

inline ContourTag classify_ratio(double ratio, double inflated_above, double slender_below) {
    if (ratio > inflated_above) return ContourTag::Inflated;
    if (ratio < slender_below) return ContourTag::Slender;
    return ContourTag::Similar;
}

inline std::vector<ContourComparison> compare_contours(const ContourModel& a,
                                                       const ContourModel& b,
                                                       double inflated_above = 1.05,
                                                       double slender_below = 0.95) {
    std::vector<ContourComparison> out;
    for (BodyPart part : kTPoseParts) {
        ContourComparison cmp;
        cmp.part = part;
        auto ia = a.parts.find(part);
        auto ib = b.parts.find(part);
        if (ia == a.parts.end() || ib == b.parts.end() || ia->second.n == 0 ||
            ib->second.n == 0 || ib->second.half_width <= 0.0 ||
            ib->second.half_height <= 0.0) {
            out.push_back(cmp);  // skipped, noted by comparable = false
            continue;
        }
        cmp.comparable = true;
        cmp.width_ratio = ia->second.half_width / ib->second.half_width;
        cmp.height_ratio = ia->second.half_height / ib->second.half_height;
        cmp.width_tag = classify_ratio(cmp.width_ratio, inflated_above, slender_below);
        cmp.height_tag = classify_ratio(cmp.height_ratio, inflated_above, slender_below);
        out.push_back(cmp);
    }
    return out;
}

}  // namespace artpose

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "artpose/anchors.hpp"
#include "artpose/geometry.hpp"
#include "artpose/types.hpp"

namespace artpose {

// Canonical head size used by keypoint normalization (gender-agnostic).
inline constexpr double kCanonicalHeadSize = 60.0;
// Gendered head standards of the 624x624 reference frame.
inline constexpr double kMaleHeadSize = 62.0;
inline constexpr double kFemaleHeadSize = 58.0;

// Keypoints after spine-vertical rotation (and optional head-size scaling):
// neck at the origin, spine along +y.
struct NormalizedPose {
    std::string figure_id;
    std::array<std::optional<Keypoint>, kKeypointCount> keypoints{};

    const std::optional<Keypoint>& keypoint(KeypointName name) const {
        return keypoints[static_cast<std::size_t>(name)];
    }
    bool has(KeypointName name) const { return keypoint(name).has_value(); }

    Figure as_figure() const {
        Figure fig;
        fig.id = figure_id;
        fig.keypoints = keypoints;
        return fig;
    }
};

// Euclidean nose-neck distance.
inline double head_size(const Figure& pose) {
    const auto& nose = pose.keypoint(KeypointName::Nose);
    const auto& neck = pose.keypoint(KeypointName::Neck);
    if (!nose || !neck) {
        throw DomainError("head_size: missing nose or neck keypoint");
    }
    const double d = distance({nose->x, nose->y}, {neck->x, neck->y});
    if (d <= kCoincidentEps) {
        throw DomainError("head_size: nose and neck coincide");
    }
    return d;
}

inline double vitruvian_scale(double head_px, Gender gender) {
    if (head_px <= 0.0) {
        throw DomainError("vitruvian_scale: head size must be positive");
    }
    switch (gender) {
        case Gender::Male: return kMaleHeadSize / head_px;
        case Gender::Female: return kFemaleHeadSize / head_px;
        case Gender::Unknown: return kCanonicalHeadSize / head_px;
    }
    throw DomainError("vitruvian_scale: bad gender");
}

namespace detail {

// Rotation that takes the neck->midhip direction to +y (image y is down).
inline double spine_rotation(const Figure& pose) {
    const auto& neck = pose.keypoint(KeypointName::Neck);
    const auto& midhip = pose.keypoint(KeypointName::MidHip);
    const double dx = midhip->x - neck->x;
    const double dy = midhip->y - neck->y;
    if (std::hypot(dx, dy) <= kCoincidentEps) {
        throw DomainError("normalize: neck and midhip coincide");
    }
    return std::numbers::pi / 2.0 - std::atan2(dy, dx);
}

inline NormalizedPose rigid_normalize(const Figure& pose) {
    const auto& neck = pose.keypoint(KeypointName::Neck);
    const double theta = spine_rotation(pose);
    const Point origin{neck->x, neck->y};
    NormalizedPose out;
    out.figure_id = pose.id;
    for (KeypointName name : kAllKeypoints) {
        const auto& kp = pose.keypoint(name);
        if (!kp) continue;
        const Point p = rotate_about({kp->x, kp->y}, origin, theta) - origin;
        out.keypoints[static_cast<std::size_t>(name)] =
            Keypoint{name, p.x, p.y, kp->confidence};
    }
    return out;
}

}  // namespace detail

// Spine-vertical rotation about the neck, neck to origin, head size scaled to 60.
inline NormalizedPose normalize_keypoints(const Figure& pose) {
    std::string missing;
    for (KeypointName name : {KeypointName::Nose, KeypointName::Neck, KeypointName::MidHip}) {
        if (!pose.has(name)) missing += missing.empty() ? std::string(to_string(name))
                                                        : ", " + std::string(to_string(name));
    }
    if (!missing.empty()) {
        throw DomainError("normalize_keypoints: invalid pose, missing " + missing);
    }
    NormalizedPose out = detail::rigid_normalize(pose);
    const double s = kCanonicalHeadSize / head_size(pose);
    for (auto& kp : out.keypoints) {
        if (kp) {
            kp->x *= s;
            kp->y *= s;
        }
    }
    return out;
}

// Same rotation and translation, no scaling; inner angles are scale-invariant.
inline NormalizedPose normalize_for_clustering(const Figure& pose) {
    std::string missing;
    for (KeypointName name :
         {KeypointName::Neck, KeypointName::RShoulder, KeypointName::LShoulder,
          KeypointName::MidHip, KeypointName::RHip, KeypointName::LHip}) {
        if (!pose.has(name)) missing += missing.empty() ? std::string(to_string(name))
                                                        : ", " + std::string(to_string(name));
    }
    if (!missing.empty()) {
        throw DomainError("normalize_for_clustering: torso validity failed, missing " + missing);
    }
    return detail::rigid_normalize(pose);
}

// ---------------------------------------------------------------------------
// Vitruvian T-pose segment normalization.

struct VitruvianFigure {
    std::string figure_id;
    Gender gender = Gender::Unknown;
    std::map<BodyPart, OrientedRect> segments;       // axis-aligned, 624x624 frame
    std::vector<std::string> discard_flags;          // figure-level; nonempty = discarded
    std::map<BodyPart, std::string> omitted_parts;   // per-part omission reasons
    double scale = 0.0;

    bool discarded() const { return !discard_flags.empty(); }
};

namespace detail {

struct PartAxis {
    KeypointName proximal;
    KeypointName distal;
};

inline std::optional<PartAxis> part_axis(BodyPart part) {
    switch (part) {
        case BodyPart::Head: return PartAxis{KeypointName::Nose, KeypointName::Neck};
        case BodyPart::Torso: return PartAxis{KeypointName::Neck, KeypointName::MidHip};
        case BodyPart::RUpperArm: return PartAxis{KeypointName::RShoulder, KeypointName::RElbow};
        case BodyPart::RLowerArm: return PartAxis{KeypointName::RElbow, KeypointName::RWrist};
        case BodyPart::LUpperArm: return PartAxis{KeypointName::LShoulder, KeypointName::LElbow};
        case BodyPart::LLowerArm: return PartAxis{KeypointName::LElbow, KeypointName::LWrist};
        case BodyPart::RUpperLeg: return PartAxis{KeypointName::RHip, KeypointName::RKnee};
        case BodyPart::RLowerLeg: return PartAxis{KeypointName::RKnee, KeypointName::RAnkle};
        case BodyPart::LUpperLeg: return PartAxis{KeypointName::LHip, KeypointName::LKnee};
        case BodyPart::LLowerLeg: return PartAxis{KeypointName::LKnee, KeypointName::LAnkle};
        default: return std::nullopt;  // hands and feet are not T-pose parts
    }
}

inline double target_angle(PartOrientation o) {
    switch (o) {
        case PartOrientation::Vertical: return std::numbers::pi / 2.0;
        case PartOrientation::HorizontalLeft: return std::numbers::pi;
        case PartOrientation::HorizontalRight: return 0.0;
    }
    throw DomainError("bad orientation");
}

inline OrientedRect clamp_to_frame(OrientedRect r) {
    const double lo = 0.0, hi = AnchorTable::kFrameSize;
    double min_x = std::clamp(r.center.x - r.half_width, lo, hi);
    double max_x = std::clamp(r.center.x + r.half_width, lo, hi);
    double min_y = std::clamp(r.center.y - r.half_height, lo, hi);
    double max_y = std::clamp(r.center.y + r.half_height, lo, hi);
    return {{0.5 * (min_x + max_x), 0.5 * (min_y + max_y)},
            0.5 * (max_x - min_x), 0.5 * (max_y - min_y), 0.0};
}

}  // namespace detail

// Map one figure's segment polygons onto the T-pose frame: per part, rotate
// the polygon so its limb axis matches the T-pose orientation, take the tight
// axis-aligned box, scale by the gendered head factor, and pin the proximal
// joint (head: polygon centroid) to its canonical anchor.
inline VitruvianFigure normalize_figure(const Figure& pose,
                                        const std::vector<SegmentPolygon>& segments,
                                        Gender gender,
                                        const AnchorTable& anchors,
                                        const std::set<BodyPart>& overlapping_parts = {},
                                        double partial_torso_fraction = 0.8) {
    VitruvianFigure out;
    out.figure_id = pose.id;
    out.gender = gender;

    auto find_segment = [&segments](BodyPart part) -> const SegmentPolygon* {
        for (const auto& seg : segments) {
            if (seg.part == part) return &seg;
        }
        return nullptr;
    };

    if (find_segment(BodyPart::Torso) == nullptr) {
        out.discard_flags.push_back("missing-torso");
        return out;
    }
    if (!pose.has(KeypointName::Nose) || !pose.has(KeypointName::Neck)) {
        out.discard_flags.push_back("missing-head-size");
        return out;
    }
    const double s = vitruvian_scale(head_size(pose), gender);
    out.scale = s;

    for (BodyPart part : kTPoseParts) {
        const SegmentPolygon* poly = find_segment(part);
        if (poly == nullptr) {
            out.omitted_parts[part] = "missing-segment";
            continue;
        }
        if (overlapping_parts.count(part)) {
            out.omitted_parts[part] = "overlap";
            continue;
        }
        const auto axis = detail::part_axis(part);
        const auto& prox = pose.keypoint(axis->proximal);
        const auto& dist = pose.keypoint(axis->distal);
        if (!prox || !dist) {
            out.omitted_parts[part] = "missing-axis";
            continue;
        }
        const double dx = dist->x - prox->x;
        const double dy = dist->y - prox->y;
        if (std::hypot(dx, dy) <= kCoincidentEps) {
            out.omitted_parts[part] = "degenerate-axis";
            continue;
        }
        const PartAnchor& anchor = anchors.at(part);
        const double theta = detail::target_angle(anchor.orientation) - std::atan2(dy, dx);

        // Head rotates about its polygon centroid, limbs about the axis midpoint.
        Point pivot;
        if (part == BodyPart::Head) {
            pivot = polygon_centroid(*poly);
        } else {
            pivot = {0.5 * (prox->x + dist->x), 0.5 * (prox->y + dist->y)};
        }
        std::vector<Point> rotated;
        rotated.reserve(poly->vertices.size());
        for (const auto& [vx, vy] : poly->vertices) {
            rotated.push_back(rotate_about({vx, vy}, pivot, theta));
        }
        OrientedRect box = tight_bbox(rotated);
        box.center = s * box.center;
        box.half_width *= s;
        box.half_height *= s;

        // The point pinned to the anchor: head centroid, else the proximal joint.
        const Point pin = part == BodyPart::Head
                              ? s * pivot
                              : s * rotate_about({prox->x, prox->y}, pivot, theta);
        box.center = box.center + (anchor.anchor - pin);
        box = detail::clamp_to_frame(box);
        out.segments[part] = box;
    }

    auto torso_it = out.segments.find(BodyPart::Torso);
    const double torso_height =
        torso_it != out.segments.end() ? 2.0 * torso_it->second.half_height : 0.0;
    if (torso_height < partial_torso_fraction * anchors.torso_reference_height()) {
        out.discard_flags.push_back("partial-torso");
    }
    return out;
}

// Per-figure sets of parts whose raw image-space bounding boxes intersect a
// segment box of a different figure from the same source image.
inline std::map<std::string, std::set<BodyPart>> detect_overlaps(
    const std::map<std::string, std::vector<SegmentPolygon>>& segments_by_figure,
    const std::map<std::string, std::string>& source_image_by_figure) {
    struct Entry {
        std::string figure_id;
        BodyPart part;
        OrientedRect box;
    };
    std::map<std::string, std::vector<Entry>> by_image;
    for (const auto& [fid, segs] : segments_by_figure) {
        auto src = source_image_by_figure.find(fid);
        const std::string image = src != source_image_by_figure.end() ? src->second : fid;
        for (const auto& seg : segs) {
            std::vector<Point> pts;
            pts.reserve(seg.vertices.size());
            for (const auto& [x, y] : seg.vertices) pts.push_back({x, y});
            by_image[image].push_back({fid, seg.part, tight_bbox(pts)});
        }
    }
    std::map<std::string, std::set<BodyPart>> out;
    for (const auto& [image, entries] : by_image) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            for (std::size_t j = i + 1; j < entries.size(); ++j) {
                if (entries[i].figure_id == entries[j].figure_id) continue;
                if (rects_overlap(entries[i].box, entries[j].box)) {
                    out[entries[i].figure_id].insert(entries[i].part);
                    out[entries[j].figure_id].insert(entries[j].part);
                }
            }
        }
    }
    return out;
}

}  // namespace artpose

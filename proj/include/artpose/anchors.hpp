#pragma once

#include <map>
#include <sstream>
#include <string>

#include "artpose/geometry.hpp"
#include "artpose/types.hpp"

namespace artpose {

// Target orientation of a T-pose part. Vertical parts run proximal->distal
// along +y (image y is down); horizontal parts run along -x or +x.
enum class PartOrientation { Vertical, HorizontalLeft, HorizontalRight };

inline std::string_view to_string(PartOrientation o) {
    switch (o) {
        case PartOrientation::Vertical: return "vertical";
        case PartOrientation::HorizontalLeft: return "horizontal-left";
        case PartOrientation::HorizontalRight: return "horizontal-right";
    }
    throw DomainError("unknown orientation enum value");
}

inline std::optional<PartOrientation> orientation_from_string(std::string_view s) {
    if (s == "vertical") return PartOrientation::Vertical;
    if (s == "horizontal-left") return PartOrientation::HorizontalLeft;
    if (s == "horizontal-right") return PartOrientation::HorizontalRight;
    return std::nullopt;
}

struct PartAnchor {
    Point anchor;  // canonical position of the part's proximal joint
    PartOrientation orientation = PartOrientation::Vertical;
};

// Joint positions of the T-pose reference figure in the 624x624 frame,
// one row per participating part. The head anchor is the head centroid.
class AnchorTable {
public:
    static constexpr double kFrameSize = 624.0;

    const PartAnchor& at(BodyPart part) const {
        auto it = anchors_.find(part);
        if (it == anchors_.end()) {
            throw DomainError("anchor table: no entry for part '" +
                              std::string(to_string(part)) + "'");
        }
        return it->second;
    }

    bool contains(BodyPart part) const { return anchors_.count(part) != 0; }

    void set(BodyPart part, PartAnchor anchor) { anchors_[part] = anchor; }

    // Reference torso height: torso anchor (neck) down to the hip line,
    // taken as the midpoint of the upper-leg anchors.
    double torso_reference_height() const {
        const Point neck = at(BodyPart::Torso).anchor;
        const Point r_hip = at(BodyPart::RUpperLeg).anchor;
        const Point l_hip = at(BodyPart::LUpperLeg).anchor;
        return distance(neck, {0.5 * (r_hip.x + l_hip.x), 0.5 * (r_hip.y + l_hip.y)});
    }

    // CSV `part,anchor_x,anchor_y,orientation`.
    static AnchorTable parse(const std::string& doc) {
        AnchorTable table;
        std::istringstream in(doc);
        std::string line;
        bool first = true;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (first) {
                if (line != "part,anchor_x,anchor_y,orientation") {
                    throw ParseError("anchor table: unexpected header '" + line + "'");
                }
                first = false;
                continue;
            }
            std::istringstream ls(line);
            std::string part_s, x_s, y_s, orient_s;
            if (!std::getline(ls, part_s, ',') || !std::getline(ls, x_s, ',') ||
                !std::getline(ls, y_s, ',') || !std::getline(ls, orient_s)) {
                throw ParseError("anchor table line " + std::to_string(line_no) +
                                 ": expected 4 fields");
            }
            const auto part = body_part_from_string(part_s);
            if (!part) {
                throw ParseError("anchor table line " + std::to_string(line_no) +
                                 ": unknown part '" + part_s + "'");
            }
            const auto orient = orientation_from_string(orient_s);
            if (!orient) {
                throw ParseError("anchor table line " + std::to_string(line_no) +
                                 ": unknown orientation '" + orient_s + "'");
            }
            table.set(*part, {{std::stod(x_s), std::stod(y_s)}, *orient});
        }
        for (BodyPart part : kTPoseParts) {
            if (!table.contains(part)) {
                throw ParseError("anchor table: missing part '" +
                                 std::string(to_string(part)) + "'");
            }
        }
        return table;
    }

    std::string serialize() const {
        std::ostringstream out;
        out << "part,anchor_x,anchor_y,orientation\n";
        for (BodyPart part : kTPoseParts) {
            const PartAnchor& a = at(part);
            out << to_string(part) << ',' << a.anchor.x << ',' << a.anchor.y << ','
                << to_string(a.orientation) << '\n';
        }
        return out.str();
    }

    // Joint positions measured once from the reference drawing scaled to
    // 624x624; shipped as data/anchors.csv and mirrored here as the default.
    static AnchorTable defaults() {
        AnchorTable t;
        t.set(BodyPart::Head, {{312, 100}, PartOrientation::Vertical});
        t.set(BodyPart::Torso, {{312, 148}, PartOrientation::Vertical});
        t.set(BodyPart::RUpperArm, {{264, 160}, PartOrientation::HorizontalLeft});
        t.set(BodyPart::RLowerArm, {{170, 160}, PartOrientation::HorizontalLeft});
        t.set(BodyPart::LUpperArm, {{360, 160}, PartOrientation::HorizontalRight});
        t.set(BodyPart::LLowerArm, {{454, 160}, PartOrientation::HorizontalRight});
        t.set(BodyPart::RUpperLeg, {{282, 340}, PartOrientation::Vertical});
        t.set(BodyPart::RLowerLeg, {{282, 462}, PartOrientation::Vertical});
        t.set(BodyPart::LUpperLeg, {{342, 340}, PartOrientation::Vertical});
        t.set(BodyPart::LLowerLeg, {{342, 462}, PartOrientation::Vertical});
        return t;
    }

private:
    std::map<BodyPart, PartAnchor> anchors_;
};

}  // namespace artpose

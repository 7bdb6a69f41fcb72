#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artpose/geometry.hpp"
#include "artpose/types.hpp"

namespace artpose {

// BODY_25 slot -> canonical keypoint. Slots 15-24 (face/feet detail) are ignored.
inline constexpr std::array<KeypointName, 15> kBody25Map = {
    KeypointName::Nose,      KeypointName::Neck,   KeypointName::RShoulder,
    KeypointName::RElbow,    KeypointName::RWrist, KeypointName::LShoulder,
    KeypointName::LElbow,    KeypointName::LWrist, KeypointName::MidHip,
    KeypointName::RHip,      KeypointName::RKnee,  KeypointName::RAnkle,
    KeypointName::LHip,      KeypointName::LKnee,  KeypointName::LAnkle,
};

// Parse a BODY_25 keypoint document: {"people": [{"pose_keypoints_2d": [75 numbers]}]}.
inline std::vector<Figure> parse_openpose(const std::string& doc,
                                          double presence_threshold = kDefaultPresenceThreshold) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("openpose document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("people") || !j["people"].is_array()) {
        throw ParseError("openpose document: missing 'people' array");
    }
    std::vector<Figure> figures;
    std::size_t person_index = 0;
    for (const auto& person : j["people"]) {
        if (!person.contains("pose_keypoints_2d") || !person["pose_keypoints_2d"].is_array()) {
            throw ParseError("openpose person " + std::to_string(person_index) +
                             ": missing 'pose_keypoints_2d'");
        }
        const auto& raw = person["pose_keypoints_2d"];
        if (raw.size() != 75) {
            throw ParseError("openpose person " + std::to_string(person_index) +
                             ": expected 75 numbers, got " + std::to_string(raw.size()));
        }
        Figure fig;
        for (std::size_t slot = 0; slot < kBody25Map.size(); ++slot) {
            const double x = raw[3 * slot].get<double>();
            const double y = raw[3 * slot + 1].get<double>();
            const double c = raw[3 * slot + 2].get<double>();
            if (c > presence_threshold) {
                fig.set_keypoint({kBody25Map[slot], x, y, c});
            }
        }
        figures.push_back(std::move(fig));
        ++person_index;
    }
    return figures;
}

// COCO person-keypoint order (17 slots).
inline constexpr std::array<std::optional<KeypointName>, 17> kCoco17Map = {
    KeypointName::Nose,       // 0 nose
    std::nullopt,             // 1 left eye
    std::nullopt,             // 2 right eye
    std::nullopt,             // 3 left ear
    std::nullopt,             // 4 right ear
    KeypointName::LShoulder,  // 5
    KeypointName::RShoulder,  // 6
    KeypointName::LElbow,     // 7
    KeypointName::RElbow,     // 8
    KeypointName::LWrist,     // 9
    KeypointName::RWrist,     // 10
    KeypointName::LHip,       // 11
    KeypointName::RHip,       // 12
    KeypointName::LKnee,      // 13
    KeypointName::RKnee,      // 14
    KeypointName::LAnkle,     // 15
    KeypointName::RAnkle,     // 16
};

// Parse COCO-style 17-keypoint person annotations:
// {"images": [{"id", "file_name"}], "annotations": [{"id", "image_id", "keypoints": [51]}]}.
// Neck and midhip are synthesized as shoulder/hip midpoints when both parents
// are present; synthesized confidence is the min of the parents. The COCO
// visibility flag v in {0,1,2} maps to confidence 0/0.5/1; fractional values
// already in [0,1] are taken as confidences directly.
inline std::vector<Figure> parse_coco_persons(const std::string& doc,
                                              double presence_threshold = kDefaultPresenceThreshold) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("coco document: ") + e.what());
    }
    std::map<long long, std::string> image_names;
    if (j.contains("images")) {
        for (const auto& img : j["images"]) {
            image_names[img["id"].get<long long>()] =
                img.value("file_name", std::string());
        }
    }
    if (!j.contains("annotations") || !j["annotations"].is_array()) {
        throw ParseError("coco document: missing 'annotations' array");
    }
    std::vector<Figure> figures;
    for (const auto& ann : j["annotations"]) {
        if (!ann.contains("keypoints") || !ann["keypoints"].is_array()) {
            throw ParseError("coco annotation: missing keypoint array");
        }
        const auto& raw = ann["keypoints"];
        if (raw.size() != 51) {
            throw ParseError("coco annotation: expected 51 numbers, got " +
                             std::to_string(raw.size()));
        }
        Figure fig;
        if (ann.contains("id")) {
            fig.id = "coco_" + std::to_string(ann["id"].get<long long>());
        }
        if (ann.contains("image_id")) {
            const long long image_id = ann["image_id"].get<long long>();
            auto it = image_names.find(image_id);
            if (!image_names.empty() && it == image_names.end()) {
                throw ParseError("coco annotation " + fig.id +
                                 ": unknown image id " + std::to_string(image_id));
            }
            fig.source_image = it != image_names.end() ? it->second
                                                       : std::to_string(image_id);
        }
        for (std::size_t slot = 0; slot < kCoco17Map.size(); ++slot) {
            if (!kCoco17Map[slot]) continue;
            const double x = raw[3 * slot].get<double>();
            const double y = raw[3 * slot + 1].get<double>();
            const double v = raw[3 * slot + 2].get<double>();
            const double c = v > 1.0 ? std::min(v * 0.5, 1.0) : v;
            if (c > presence_threshold) {
                fig.set_keypoint({*kCoco17Map[slot], x, y, c});
            }
        }
        auto synthesize = [&fig](KeypointName out, KeypointName a, KeypointName b) {
            const auto& pa = fig.keypoint(a);
            const auto& pb = fig.keypoint(b);
            if (pa && pb) {
                fig.set_keypoint({out, 0.5 * (pa->x + pb->x), 0.5 * (pa->y + pb->y),
                                  std::min(pa->confidence, pb->confidence)});
            }
        };
        synthesize(KeypointName::Neck, KeypointName::LShoulder, KeypointName::RShoulder);
        synthesize(KeypointName::MidHip, KeypointName::LHip, KeypointName::RHip);
        figures.push_back(std::move(fig));
    }
    return figures;
}

// Segment document: [{"figure_id", "parts": [{"part", "polygon": [[x,y],...]}]}]
inline std::map<std::string, std::vector<SegmentPolygon>> parse_segments(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("segment document: ") + e.what());
    }
    if (!j.is_array()) {
        throw ParseError("segment document: expected a top-level list");
    }
    std::map<std::string, std::vector<SegmentPolygon>> out;
    for (const auto& entry : j) {
        const std::string fid = entry.at("figure_id").get<std::string>();
        std::vector<SegmentPolygon>& segs = out[fid];
        for (const auto& part : entry.at("parts")) {
            const std::string part_name = part.at("part").get<std::string>();
            const auto part_id = body_part_from_string(part_name);
            if (!part_id) {
                throw ParseError("figure " + fid + ": unknown part '" + part_name + "'");
            }
            for (const auto& existing : segs) {
                if (existing.part == *part_id) {
                    throw ParseError("figure " + fid + ": duplicate part '" + part_name + "'");
                }
            }
            SegmentPolygon poly;
            poly.part = *part_id;
            for (const auto& v : part.at("polygon")) {
                poly.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            }
            if (poly.vertices.size() < 3) {
                throw GeometryError("figure " + fid + ", part '" + part_name +
                                    "': polygon needs at least 3 vertices");
            }
            if (polygon_self_intersects(poly)) {
                throw GeometryError("figure " + fid + ", part '" + part_name +
                                    "': self-intersecting polygon");
            }
            segs.push_back(std::move(poly));
        }
    }
    return out;
}

// Ground-truth document:
// [{"figure_id", "keypoints": {name: [x,y]}, "visible_segments": [...], "correct_segments": [...]}]
inline std::vector<GroundTruthFigure> parse_ground_truth(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("ground-truth document: ") + e.what());
    }
    if (!j.is_array()) {
        throw ParseError("ground-truth document: expected a top-level list");
    }
    std::vector<GroundTruthFigure> out;
    for (const auto& entry : j) {
        GroundTruthFigure gt;
        gt.id = entry.at("figure_id").get<std::string>();
        for (const auto& [name, xy] : entry.at("keypoints").items()) {
            const auto kp = keypoint_from_string(name);
            if (!kp) {
                throw ParseError("figure " + gt.id + ": unknown keypoint '" + name + "'");
            }
            gt.keypoints[static_cast<std::size_t>(*kp)] =
                Keypoint{*kp, xy.at(0).get<double>(), xy.at(1).get<double>(), 1.0};
        }
        auto read_parts = [&gt](const nlohmann::json& list) {
            std::vector<BodyPart> parts;
            for (const auto& s : list) {
                const auto p = body_part_from_string(s.get<std::string>());
                if (!p) {
                    throw ParseError("figure " + gt.id + ": unknown part '" +
                                     s.get<std::string>() + "'");
                }
                parts.push_back(*p);
            }
            return parts;
        };
        gt.visible_segments = read_parts(entry.value("visible_segments", nlohmann::json::array()));
        gt.correct_segments = read_parts(entry.value("correct_segments", nlohmann::json::array()));
        for (BodyPart p : gt.correct_segments) {
            if (std::find(gt.visible_segments.begin(), gt.visible_segments.end(), p) ==
                gt.visible_segments.end()) {
                throw ParseError("figure " + gt.id + ": correct segment '" +
                                 std::string(to_string(p)) + "' is not listed visible");
            }
        }
        out.push_back(std::move(gt));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corpus manifest: CSV `figure_id,source_image,artist,gender`.

struct ManifestEntry {
    std::string figure_id;
    std::string source_image;
    std::string artist;
    Gender gender = Gender::Unknown;
};

inline std::vector<ManifestEntry> parse_manifest(const std::string& doc) {
    std::istringstream in(doc);
    std::string line;
    std::vector<ManifestEntry> entries;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (first) {
            if (line != "figure_id,source_image,artist,gender") {
                throw ParseError("manifest: unexpected header '" + line + "'");
            }
            first = false;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError("manifest line " + std::to_string(line_no) +
                             ": expected 4 fields, got " + std::to_string(fields.size()));
        }
        const auto g = gender_from_string(fields[3]);
        if (!g) {
            throw ParseError("manifest line " + std::to_string(line_no) +
                             ": unknown gender '" + fields[3] + "'");
        }
        entries.push_back({fields[0], fields[1], fields[2], *g});
    }
    return entries;
}

// Attach manifest metadata to parsed figures, in manifest order.
inline void apply_manifest(std::vector<Figure>& figures,
                           const std::vector<ManifestEntry>& manifest) {
    std::map<std::string, const ManifestEntry*> by_id;
    for (const auto& e : manifest) by_id[e.figure_id] = &e;
    for (auto& fig : figures) {
        auto it = by_id.find(fig.id);
        if (it == by_id.end()) continue;
        fig.source_image = it->second->source_image;
        fig.artist = it->second->artist;
        fig.gender = it->second->gender;
    }
}

// ---------------------------------------------------------------------------
// Canonical corpus format (round-trippable).

inline std::string serialize_corpus(const std::vector<Figure>& corpus) {
    nlohmann::json out = nlohmann::json::array();
    for (const Figure& fig : corpus) {
        nlohmann::json f;
        f["figure_id"] = fig.id;
        f["source_image"] = fig.source_image;
        f["artist"] = fig.artist;
        f["gender"] = std::string(to_string(fig.gender));
        nlohmann::json kps = nlohmann::json::object();
        for (KeypointName name : kAllKeypoints) {
            const auto& kp = fig.keypoint(name);
            if (kp) kps[std::string(to_string(name))] = {kp->x, kp->y, kp->confidence};
        }
        f["keypoints"] = kps;
        nlohmann::json parts = nlohmann::json::array();
        for (const SegmentPolygon& seg : fig.segments) {
            nlohmann::json p;
            p["part"] = std::string(to_string(seg.part));
            nlohmann::json verts = nlohmann::json::array();
            for (const auto& [x, y] : seg.vertices) verts.push_back({x, y});
            p["polygon"] = verts;
            parts.push_back(p);
        }
        f["segments"] = parts;
        out.push_back(f);
    }
    return out.dump(2);
}

inline std::vector<Figure> parse_corpus(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("corpus document: ") + e.what());
    }
    std::vector<Figure> corpus;
    for (const auto& f : j) {
        Figure fig;
        fig.id = f.at("figure_id").get<std::string>();
        fig.source_image = f.value("source_image", std::string());
        fig.artist = f.value("artist", std::string());
        fig.gender = gender_from_string(f.value("gender", "unknown")).value_or(Gender::Unknown);
        for (const auto& [name, arr] : f.at("keypoints").items()) {
            const auto kp = keypoint_from_string(name);
            if (!kp) throw ParseError("corpus figure " + fig.id + ": unknown keypoint '" + name + "'");
            fig.keypoints[static_cast<std::size_t>(*kp)] =
                Keypoint{*kp, arr.at(0).get<double>(), arr.at(1).get<double>(),
                         arr.at(2).get<double>()};
        }
        for (const auto& p : f.value("segments", nlohmann::json::array())) {
            SegmentPolygon seg;
            const std::string part_name = p.at("part").get<std::string>();
            const auto part = body_part_from_string(part_name);
            if (!part) throw ParseError("corpus figure " + fig.id + ": unknown part '" + part_name + "'");
            seg.part = *part;
            for (const auto& v : p.at("polygon")) {
                seg.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            }
            fig.segments.push_back(std::move(seg));
        }
        corpus.push_back(std::move(fig));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Validity filters. Both preserve input order and are idempotent.

inline bool valid_for_ellipsoids(const Figure& fig) {
    return fig.has(KeypointName::Nose) && fig.has(KeypointName::Neck) &&
           fig.has(KeypointName::MidHip);
}

inline bool valid_for_clustering(const Figure& fig) {
    return fig.has(KeypointName::Neck) && fig.has(KeypointName::RShoulder) &&
           fig.has(KeypointName::LShoulder) && fig.has(KeypointName::MidHip) &&
           fig.has(KeypointName::RHip) && fig.has(KeypointName::LHip);
}

inline std::vector<Figure> filter_valid_for_ellipsoids(const std::vector<Figure>& corpus) {
    std::vector<Figure> out;
    std::copy_if(corpus.begin(), corpus.end(), std::back_inserter(out), valid_for_ellipsoids);
    return out;
}

inline std::vector<Figure> filter_valid_for_clustering(const std::vector<Figure>& corpus) {
    std::vector<Figure> out;
    std::copy_if(corpus.begin(), corpus.end(), std::back_inserter(out), valid_for_clustering);
    return out;
}

}  // namespace artpose

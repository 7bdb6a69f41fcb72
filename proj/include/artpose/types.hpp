#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace artpose {

// ---------------------------------------------------------------------------
// Errors

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Keypoints

enum class KeypointName : int {
    Nose = 0,
    Neck,
    RShoulder,
    RElbow,
    RWrist,
    LShoulder,
    LElbow,
    LWrist,
    MidHip,
    RHip,
    RKnee,
    RAnkle,
    LHip,
    LKnee,
    LAnkle,
};

inline constexpr std::size_t kKeypointCount = 15;

inline constexpr std::array<KeypointName, kKeypointCount> kAllKeypoints = {
    KeypointName::Nose,   KeypointName::Neck,   KeypointName::RShoulder,
    KeypointName::RElbow, KeypointName::RWrist, KeypointName::LShoulder,
    KeypointName::LElbow, KeypointName::LWrist, KeypointName::MidHip,
    KeypointName::RHip,   KeypointName::RKnee,  KeypointName::RAnkle,
    KeypointName::LHip,   KeypointName::LKnee,  KeypointName::LAnkle,
};

inline std::string_view to_string(KeypointName name) {
    switch (name) {
        case KeypointName::Nose: return "nose";
        case KeypointName::Neck: return "neck";
        case KeypointName::RShoulder: return "r_shoulder";
        case KeypointName::RElbow: return "r_elbow";
        case KeypointName::RWrist: return "r_wrist";
        case KeypointName::LShoulder: return "l_shoulder";
        case KeypointName::LElbow: return "l_elbow";
        case KeypointName::LWrist: return "l_wrist";
        case KeypointName::MidHip: return "midhip";
        case KeypointName::RHip: return "r_hip";
        case KeypointName::RKnee: return "r_knee";
        case KeypointName::RAnkle: return "r_ankle";
        case KeypointName::LHip: return "l_hip";
        case KeypointName::LKnee: return "l_knee";
        case KeypointName::LAnkle: return "l_ankle";
    }
    throw DomainError("unknown keypoint enum value");
}

inline std::optional<KeypointName> keypoint_from_string(std::string_view s) {
    for (KeypointName k : kAllKeypoints) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct Keypoint {
    KeypointName name{};
    double x = 0.0;
    double y = 0.0;
    double confidence = 1.0;
};

// ---------------------------------------------------------------------------
// Body parts

enum class BodyPart : int {
    Head = 0,
    Torso,
    RUpperArm,
    RLowerArm,
    RHand,
    LUpperArm,
    LLowerArm,
    LHand,
    RUpperLeg,
    RLowerLeg,
    RFoot,
    LUpperLeg,
    LLowerLeg,
    LFoot,
};

inline constexpr std::size_t kBodyPartCount = 14;

inline constexpr std::array<BodyPart, kBodyPartCount> kAllBodyParts = {
    BodyPart::Head,      BodyPart::Torso,     BodyPart::RUpperArm,
    BodyPart::RLowerArm, BodyPart::RHand,     BodyPart::LUpperArm,
    BodyPart::LLowerArm, BodyPart::LHand,     BodyPart::RUpperLeg,
    BodyPart::RLowerLeg, BodyPart::RFoot,     BodyPart::LUpperLeg,
    BodyPart::LLowerLeg, BodyPart::LFoot,
};

// The 10 parts that participate in the T-pose figure (no hands, no feet).
inline constexpr std::array<BodyPart, 10> kTPoseParts = {
    BodyPart::Head,      BodyPart::Torso,     BodyPart::RUpperArm,
    BodyPart::RLowerArm, BodyPart::LUpperArm, BodyPart::LLowerArm,
    BodyPart::RUpperLeg, BodyPart::RLowerLeg, BodyPart::LUpperLeg,
    BodyPart::LLowerLeg,
};

inline std::string_view to_string(BodyPart part) {
    switch (part) {
        case BodyPart::Head: return "head";
        case BodyPart::Torso: return "torso";
        case BodyPart::RUpperArm: return "r_upper_arm";
        case BodyPart::RLowerArm: return "r_lower_arm";
        case BodyPart::RHand: return "r_hand";
        case BodyPart::LUpperArm: return "l_upper_arm";
        case BodyPart::LLowerArm: return "l_lower_arm";
        case BodyPart::LHand: return "l_hand";
        case BodyPart::RUpperLeg: return "r_upper_leg";
        case BodyPart::RLowerLeg: return "r_lower_leg";
        case BodyPart::RFoot: return "r_foot";
        case BodyPart::LUpperLeg: return "l_upper_leg";
        case BodyPart::LLowerLeg: return "l_lower_leg";
        case BodyPart::LFoot: return "l_foot";
    }
    throw DomainError("unknown body part enum value");
}

inline std::optional<BodyPart> body_part_from_string(std::string_view s) {
    for (BodyPart p : kAllBodyParts) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

struct SegmentPolygon {
    BodyPart part{};
    std::vector<std::pair<double, double>> vertices;  // >= 3, non-self-intersecting
};

// ---------------------------------------------------------------------------
// Figures

enum class Gender { Male, Female, Unknown };

inline std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::Male: return "male";
        case Gender::Female: return "female";
        case Gender::Unknown: return "unknown";
    }
    throw DomainError("unknown gender enum value");
}

inline std::optional<Gender> gender_from_string(std::string_view s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    if (s == "unknown") return Gender::Unknown;
    return std::nullopt;
}

// One depicted person. Keypoints below the presence threshold are never
// stored; absence of a name means the keypoint was not detected.
struct Figure {
    std::string id;
    std::string source_image;
    std::string artist;
    Gender gender = Gender::Unknown;
    std::array<std::optional<Keypoint>, kKeypointCount> keypoints{};
    std::vector<SegmentPolygon> segments;

    const std::optional<Keypoint>& keypoint(KeypointName name) const {
        return keypoints[static_cast<std::size_t>(name)];
    }
    void set_keypoint(Keypoint kp) {
        keypoints[static_cast<std::size_t>(kp.name)] = kp;
    }
    bool has(KeypointName name) const { return keypoint(name).has_value(); }
};

struct GroundTruthFigure {
    std::string id;
    std::array<std::optional<Keypoint>, kKeypointCount> keypoints{};
    std::vector<BodyPart> visible_segments;
    std::vector<BodyPart> correct_segments;  // subset of visible_segments

    const std::optional<Keypoint>& keypoint(KeypointName name) const {
        return keypoints[static_cast<std::size_t>(name)];
    }
    bool has(KeypointName name) const { return keypoint(name).has_value(); }
};

// Default cutoff below which a detection is treated as absent.
inline constexpr double kDefaultPresenceThreshold = 0.05;

}  // namespace artpose

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "artpose/normalize.hpp"
#include "test_support.hpp"

using namespace artpose;
using testsupport::make_figure;
using Catch::Matchers::WithinAbs;

TEST_CASE("head_size is the nose-neck distance") {
    CHECK(head_size(make_figure("a", {{KeypointName::Nose, 0, 0},
                                      {KeypointName::Neck, 0, 62}})) == 62.0);
    CHECK(head_size(make_figure("b", {{KeypointName::Nose, 3, 0},
                                      {KeypointName::Neck, 0, 4}})) == 5.0);
}

TEST_CASE("head_size error paths") {
    CHECK_THROWS_AS(head_size(make_figure("a", {{KeypointName::Nose, 0, 0}})), DomainError);
    CHECK_THROWS_AS(head_size(make_figure("b", {{KeypointName::Nose, 1, 1},
                                                {KeypointName::Neck, 1, 1}})),
                    DomainError);
}

TEST_CASE("vitruvian_scale per gender") {
    CHECK(vitruvian_scale(62.0, Gender::Male) == 1.0);
    CHECK(vitruvian_scale(124.0, Gender::Male) == 0.5);
    CHECK(vitruvian_scale(29.0, Gender::Female) == 2.0);
    CHECK(vitruvian_scale(60.0, Gender::Unknown) == 1.0);
    CHECK_THROWS_AS(vitruvian_scale(0.0, Gender::Male), DomainError);
    CHECK_THROWS_AS(vitruvian_scale(-5.0, Gender::Female), DomainError);
}

TEST_CASE("normalize_keypoints leaves a canonical pose unchanged") {
    const Figure canonical = make_figure("c", {{KeypointName::Neck, 0, 0},
                                               {KeypointName::MidHip, 0, 100},
                                               {KeypointName::Nose, 0, -60}});
    const NormalizedPose out = normalize_keypoints(canonical);
    for (KeypointName name : {KeypointName::Neck, KeypointName::MidHip, KeypointName::Nose}) {
        const auto& before = canonical.keypoint(name);
        const auto& after = out.keypoint(name);
        REQUIRE(after.has_value());
        CHECK_THAT(after->x, WithinAbs(before->x, 1e-9));
        CHECK_THAT(after->y, WithinAbs(before->y, 1e-9));
    }
}

TEST_CASE("normalize_keypoints quotients out rotation and scale") {
    const Figure canonical = make_figure("c", {{KeypointName::Neck, 0, 0},
                                               {KeypointName::MidHip, 0, 100},
                                               {KeypointName::Nose, 0, -60},
                                               {KeypointName::RWrist, -40, 30}});
    const testsupport::Similarity t{std::numbers::pi / 2.0, 3.0, 17.0, -4.0};
    const NormalizedPose a = normalize_keypoints(canonical);
    const NormalizedPose b = normalize_keypoints(testsupport::transformed(canonical, t));
    for (KeypointName name : kAllKeypoints) {
        REQUIRE(a.has(name) == b.has(name));
        if (!a.has(name)) continue;
        CHECK_THAT(b.keypoint(name)->x, WithinAbs(a.keypoint(name)->x, 1e-6));
        CHECK_THAT(b.keypoint(name)->y, WithinAbs(a.keypoint(name)->y, 1e-6));
    }
}

TEST_CASE("normalize_keypoints output satisfies the canonical-frame invariants") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const Figure pose = testsupport::random_valid_pose(rng);
        const NormalizedPose out = normalize_keypoints(pose);
        const auto& neck = out.keypoint(KeypointName::Neck);
        const auto& nose = out.keypoint(KeypointName::Nose);
        const auto& midhip = out.keypoint(KeypointName::MidHip);
        REQUIRE(neck.has_value());
        REQUIRE(nose.has_value());
        REQUIRE(midhip.has_value());
        CHECK_THAT(neck->x, WithinAbs(0.0, 1e-9));
        CHECK_THAT(neck->y, WithinAbs(0.0, 1e-9));
        CHECK_THAT(midhip->x, WithinAbs(0.0, 1e-6));
        CHECK(midhip->y > 0.0);  // spine along +y
        CHECK_THAT(distance({nose->x, nose->y}, {neck->x, neck->y}),
                   WithinAbs(kCanonicalHeadSize, 1e-6));
    }
}

TEST_CASE("normalize_keypoints is idempotent on its own output") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const NormalizedPose once = normalize_keypoints(testsupport::random_valid_pose(rng));
        const NormalizedPose twice = normalize_keypoints(once.as_figure());
        for (KeypointName name : kAllKeypoints) {
            if (!once.has(name)) continue;
            CHECK_THAT(twice.keypoint(name)->x, WithinAbs(once.keypoint(name)->x, 1e-6));
            CHECK_THAT(twice.keypoint(name)->y, WithinAbs(once.keypoint(name)->y, 1e-6));
        }
    }
}

TEST_CASE("normalize_keypoints names the missing keypoints") {
    try {
        normalize_keypoints(make_figure("a", {{KeypointName::Neck, 0, 0}}));
        FAIL("expected throw");
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("nose") != std::string::npos);
        CHECK(msg.find("midhip") != std::string::npos);
    }
}

TEST_CASE("normalize_for_clustering rotates an x-axis spine to +y without scaling") {
    Figure fig = make_figure("f", {{KeypointName::Neck, 10, 10},
                                   {KeypointName::MidHip, 110, 10},
                                   {KeypointName::RShoulder, 10, -20},
                                   {KeypointName::LShoulder, 10, 40},
                                   {KeypointName::RHip, 110, -15},
                                   {KeypointName::LHip, 110, 35}});
    const NormalizedPose out = normalize_for_clustering(fig);
    const auto& midhip = out.keypoint(KeypointName::MidHip);
    CHECK_THAT(midhip->x, WithinAbs(0.0, 1e-9));
    CHECK_THAT(midhip->y, WithinAbs(100.0, 1e-9));  // length preserved
}

TEST_CASE("normalize_for_clustering is the identity rotation for vertical spines") {
    Figure fig = testsupport::tpose_keypoints();
    const NormalizedPose out = normalize_for_clustering(fig);
    const auto& rs = out.keypoint(KeypointName::RShoulder);
    CHECK_THAT(rs->x, WithinAbs(264.0 - 312.0, 1e-9));
    CHECK_THAT(rs->y, WithinAbs(160.0 - 148.0, 1e-9));
}

TEST_CASE("normalize_for_clustering requires all six torso keypoints") {
    Figure fig = testsupport::tpose_keypoints();
    fig.keypoints[static_cast<std::size_t>(KeypointName::RHip)].reset();
    CHECK_THROWS_AS(normalize_for_clustering(fig), DomainError);
}

// ---------------------------------------------------------------------------
// Vitruvian segment normalization.

TEST_CASE("anchor table round trip and defaults") {
    const AnchorTable table = AnchorTable::defaults();
    const AnchorTable parsed = AnchorTable::parse(table.serialize());
    for (BodyPart part : kTPoseParts) {
        CHECK(parsed.at(part).anchor.x == table.at(part).anchor.x);
        CHECK(parsed.at(part).anchor.y == table.at(part).anchor.y);
        CHECK(parsed.at(part).orientation == table.at(part).orientation);
    }
    CHECK_THAT(table.torso_reference_height(), WithinAbs(192.0, 1e-12));
    CHECK_THROWS_AS(AnchorTable::parse("part,anchor_x,anchor_y,orientation\n"), ParseError);
    CHECK_THROWS_AS(AnchorTable::parse("bad header\n"), ParseError);
}

namespace {

void check_rect(const OrientedRect& got, double x0, double y0, double x1, double y1,
                double tol = 1e-6) {
    CHECK_THAT(got.center.x - got.half_width, WithinAbs(x0, tol));
    CHECK_THAT(got.center.y - got.half_height, WithinAbs(y0, tol));
    CHECK_THAT(got.center.x + got.half_width, WithinAbs(x1, tol));
    CHECK_THAT(got.center.y + got.half_height, WithinAbs(y1, tol));
}

}  // namespace

TEST_CASE("normalize_figure fixes the synthetic perfect T-pose at scale 1") {
    const Figure fig = testsupport::tpose_keypoints();
    const auto segments = testsupport::tpose_segments();
    const VitruvianFigure out =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    REQUIRE_FALSE(out.discarded());
    CHECK_THAT(out.scale, WithinAbs(1.0, 1e-12));
    REQUIRE(out.segments.size() == 10);
    for (const SegmentPolygon& seg : segments) {
        std::vector<Point> pts;
        for (const auto& [x, y] : seg.vertices) pts.push_back({x, y});
        const OrientedRect expect = tight_bbox(pts);
        const OrientedRect& got = out.segments.at(seg.part);
        CHECK_THAT(got.center.x, WithinAbs(expect.center.x, 1e-9));
        CHECK_THAT(got.center.y, WithinAbs(expect.center.y, 1e-9));
        CHECK_THAT(got.half_width, WithinAbs(expect.half_width, 1e-9));
        CHECK_THAT(got.half_height, WithinAbs(expect.half_height, 1e-9));
    }
}

TEST_CASE("normalize_figure is invariant to doubling all coordinates") {
    const Figure fig = testsupport::tpose_keypoints();
    const auto segments = testsupport::tpose_segments();
    const testsupport::Similarity dbl{0.0, 2.0, 0.0, 0.0};
    Figure scaled = testsupport::transformed(fig, dbl);
    std::vector<SegmentPolygon> scaled_segments = segments;
    for (auto& seg : scaled_segments) {
        for (auto& [x, y] : seg.vertices) {
            x *= 2.0;
            y *= 2.0;
        }
    }
    const VitruvianFigure a =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    const VitruvianFigure b =
        normalize_figure(scaled, scaled_segments, Gender::Male, AnchorTable::defaults());
    CHECK_THAT(b.scale, WithinAbs(0.5, 1e-12));
    for (BodyPart part : kTPoseParts) {
        const OrientedRect& ra = a.segments.at(part);
        const OrientedRect& rb = b.segments.at(part);
        CHECK_THAT(rb.center.x, WithinAbs(ra.center.x, 1e-6));
        CHECK_THAT(rb.center.y, WithinAbs(ra.center.y, 1e-6));
        CHECK_THAT(rb.half_width, WithinAbs(ra.half_width, 1e-6));
        CHECK_THAT(rb.half_height, WithinAbs(ra.half_height, 1e-6));
    }
}

TEST_CASE("normalize_figure under a rotated source image") {
    // Rotating the whole figure must not change the T-pose output: each part
    // is re-rotated by its own axis.
    const Figure fig = testsupport::tpose_keypoints();
    const auto segments = testsupport::tpose_segments();
    const testsupport::Similarity rot{0.7, 1.0, 50.0, -20.0};
    Figure rotated = testsupport::transformed(fig, rot);
    std::vector<SegmentPolygon> rot_segments = segments;
    for (auto& seg : rot_segments) {
        for (auto& [x, y] : seg.vertices) {
            const Point p = rot.apply({x, y});
            x = p.x;
            y = p.y;
        }
    }
    const VitruvianFigure a =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    const VitruvianFigure b =
        normalize_figure(rotated, rot_segments, Gender::Male, AnchorTable::defaults());
    for (BodyPart part : kTPoseParts) {
        const OrientedRect& ra = a.segments.at(part);
        const OrientedRect& rb = b.segments.at(part);
        CHECK_THAT(rb.center.x, WithinAbs(ra.center.x, 1e-6));
        CHECK_THAT(rb.center.y, WithinAbs(ra.center.y, 1e-6));
        CHECK_THAT(rb.half_width, WithinAbs(ra.half_width, 1e-6));
        CHECK_THAT(rb.half_height, WithinAbs(ra.half_height, 1e-6));
    }
}

TEST_CASE("missing torso segment discards the figure without throwing") {
    const Figure fig = testsupport::tpose_keypoints();
    auto segments = testsupport::tpose_segments();
    std::erase_if(segments, [](const SegmentPolygon& s) { return s.part == BodyPart::Torso; });
    const VitruvianFigure out =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    CHECK(out.discarded());
    CHECK(out.discard_flags == std::vector<std::string>{"missing-torso"});
}

TEST_CASE("partial torso discards the figure") {
    const Figure fig = testsupport::tpose_keypoints();
    auto segments = testsupport::tpose_segments();
    for (auto& seg : segments) {
        if (seg.part == BodyPart::Torso) {
            // Torso polygon covering only the upper half: height 96 < 80% of 192.
            seg = testsupport::rect_polygon(BodyPart::Torso, 270, 148, 354, 244);
        }
    }
    const VitruvianFigure out =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    CHECK(out.discarded());
    CHECK(out.discard_flags == std::vector<std::string>{"partial-torso"});
}

TEST_CASE("missing limb keypoints omit the part with reason missing-axis") {
    Figure fig = testsupport::tpose_keypoints();
    fig.keypoints[static_cast<std::size_t>(KeypointName::RWrist)].reset();
    const VitruvianFigure out = normalize_figure(fig, testsupport::tpose_segments(),
                                                 Gender::Male, AnchorTable::defaults());
    REQUIRE_FALSE(out.discarded());
    CHECK(out.segments.count(BodyPart::RLowerArm) == 0);
    CHECK(out.omitted_parts.at(BodyPart::RLowerArm) == "missing-axis");
}

TEST_CASE("overlapping parts are omitted with reason overlap, monotonically") {
    const Figure fig = testsupport::tpose_keypoints();
    const auto segments = testsupport::tpose_segments();
    const VitruvianFigure clean =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    const VitruvianFigure flagged =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults(),
                         {BodyPart::LLowerArm});
    CHECK(flagged.segments.count(BodyPart::LLowerArm) == 0);
    CHECK(flagged.omitted_parts.at(BodyPart::LLowerArm) == "overlap");
    // Adding an overlap only removes parts, never adds them.
    for (const auto& [part, rect] : flagged.segments) {
        CHECK(clean.segments.count(part) == 1);
    }
    CHECK(flagged.segments.size() + 1 == clean.segments.size());
}

TEST_CASE("occluded partial thigh stays shorter than the intact one") {
    const Figure fig = testsupport::tpose_keypoints();
    auto segments = testsupport::tpose_segments();
    for (auto& seg : segments) {
        if (seg.part == BodyPart::RUpperLeg) {
            // Only the lower half of the thigh was segmented.
            seg = testsupport::rect_polygon(BodyPart::RUpperLeg, 262, 401, 302, 462);
        }
    }
    const VitruvianFigure out =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    REQUIRE_FALSE(out.discarded());
    const OrientedRect& right = out.segments.at(BodyPart::RUpperLeg);
    const OrientedRect& left = out.segments.at(BodyPart::LUpperLeg);
    CHECK(right.half_height < left.half_height);
    // The gap from the hip is preserved: the box hangs below the anchor.
    CHECK(right.center.y - right.half_height > 340.0 + 1.0);
}

TEST_CASE("rectangles never have negative extents and stay inside the frame") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        Figure fig = testsupport::random_valid_pose(rng);
        auto segments = testsupport::tpose_segments();
        const testsupport::Similarity t = testsupport::random_similarity(rng, 0.5, 2.0);
        for (auto& seg : segments) {
            for (auto& [x, y] : seg.vertices) {
                const Point p = t.apply({x, y});
                x = p.x;
                y = p.y;
            }
        }
        const VitruvianFigure out =
            normalize_figure(fig, segments, Gender::Female, AnchorTable::defaults());
        for (const auto& [part, rect] : out.segments) {
            CHECK(rect.half_width >= 0.0);
            CHECK(rect.half_height >= 0.0);
            CHECK(rect.center.x - rect.half_width >= -1e-9);
            CHECK(rect.center.x + rect.half_width <= AnchorTable::kFrameSize + 1e-9);
            CHECK(rect.center.y - rect.half_height >= -1e-9);
            CHECK(rect.center.y + rect.half_height <= AnchorTable::kFrameSize + 1e-9);
        }
    }
}

namespace {

KeypointName mirror_keypoint(KeypointName name) {
    switch (name) {
        case KeypointName::RShoulder: return KeypointName::LShoulder;
        case KeypointName::LShoulder: return KeypointName::RShoulder;
        case KeypointName::RElbow: return KeypointName::LElbow;
        case KeypointName::LElbow: return KeypointName::RElbow;
        case KeypointName::RWrist: return KeypointName::LWrist;
        case KeypointName::LWrist: return KeypointName::RWrist;
        case KeypointName::RHip: return KeypointName::LHip;
        case KeypointName::LHip: return KeypointName::RHip;
        case KeypointName::RKnee: return KeypointName::LKnee;
        case KeypointName::LKnee: return KeypointName::RKnee;
        case KeypointName::RAnkle: return KeypointName::LAnkle;
        case KeypointName::LAnkle: return KeypointName::RAnkle;
        default: return name;
    }
}

BodyPart mirror_part(BodyPart part) {
    switch (part) {
        case BodyPart::RUpperArm: return BodyPart::LUpperArm;
        case BodyPart::LUpperArm: return BodyPart::RUpperArm;
        case BodyPart::RLowerArm: return BodyPart::LLowerArm;
        case BodyPart::LLowerArm: return BodyPart::RLowerArm;
        case BodyPart::RUpperLeg: return BodyPart::LUpperLeg;
        case BodyPart::LUpperLeg: return BodyPart::RUpperLeg;
        case BodyPart::RLowerLeg: return BodyPart::LLowerLeg;
        case BodyPart::LLowerLeg: return BodyPart::RLowerLeg;
        default: return part;
    }
}

}  // namespace

TEST_CASE("mirroring the input mirrors placements about x = 312") {
    std::mt19937 rng(53);
    Figure fig = testsupport::tpose_keypoints();
    std::uniform_real_distribution<double> jitter(-10.0, 10.0);
    for (auto& kp : fig.keypoints) {
        if (kp) {
            kp->x += jitter(rng);
            kp->y += jitter(rng);
        }
    }
    const auto segments = testsupport::tpose_segments();

    Figure mirrored;
    mirrored.id = fig.id;
    for (KeypointName name : kAllKeypoints) {
        const auto& kp = fig.keypoint(name);
        if (!kp) continue;
        mirrored.set_keypoint({mirror_keypoint(name), 624.0 - kp->x, kp->y, kp->confidence});
    }
    std::vector<SegmentPolygon> mirrored_segments;
    for (const SegmentPolygon& seg : segments) {
        SegmentPolygon m;
        m.part = mirror_part(seg.part);
        for (const auto& [x, y] : seg.vertices) m.vertices.emplace_back(624.0 - x, y);
        mirrored_segments.push_back(std::move(m));
    }

    const VitruvianFigure a =
        normalize_figure(fig, segments, Gender::Male, AnchorTable::defaults());
    const VitruvianFigure b = normalize_figure(mirrored, mirrored_segments, Gender::Male,
                                               AnchorTable::defaults());
    REQUIRE_FALSE(a.discarded());
    REQUIRE_FALSE(b.discarded());
    for (const auto& [part, ra] : a.segments) {
        const OrientedRect& rb = b.segments.at(mirror_part(part));
        CHECK_THAT(rb.center.x, WithinAbs(624.0 - ra.center.x, 1e-6));
        CHECK_THAT(rb.center.y, WithinAbs(ra.center.y, 1e-6));
        CHECK_THAT(rb.half_width, WithinAbs(ra.half_width, 1e-6));
        CHECK_THAT(rb.half_height, WithinAbs(ra.half_height, 1e-6));
    }
}

TEST_CASE("detect_overlaps flags box intersections across figures on one image") {
    std::map<std::string, std::vector<SegmentPolygon>> segs;
    segs["a"] = {testsupport::rect_polygon(BodyPart::Torso, 0, 0, 10, 10)};
    segs["b"] = {testsupport::rect_polygon(BodyPart::Head, 5, 5, 15, 15)};
    segs["c"] = {testsupport::rect_polygon(BodyPart::Head, 100, 100, 110, 110)};
    std::map<std::string, std::string> sources = {
        {"a", "img1"}, {"b", "img1"}, {"c", "img1"}};
    const auto overlaps = detect_overlaps(segs, sources);
    CHECK(overlaps.at("a") == std::set<BodyPart>{BodyPart::Torso});
    CHECK(overlaps.at("b") == std::set<BodyPart>{BodyPart::Head});
    CHECK(overlaps.count("c") == 0);

    // Different source images never overlap.
    sources["b"] = "img2";
    CHECK(detect_overlaps(segs, sources).empty());
}

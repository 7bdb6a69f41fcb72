#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "artpose/normalize.hpp"
#include "artpose/types.hpp"

namespace artpose {

struct PckReport {
    std::string group;
    double alpha = 0.0;
    std::array<std::size_t, kKeypointCount> correct{};
    std::array<std::size_t, kKeypointCount> total{};
    std::vector<std::string> skipped_figures;  // truth without a defined head size

    std::size_t correct_sum() const {
        std::size_t s = 0;
        for (auto c : correct) s += c;
        return s;
    }
    std::size_t total_sum() const {
        std::size_t s = 0;
        for (auto t : total) s += t;
        return s;
    }
    double value() const {
        const std::size_t t = total_sum();
        return t == 0 ? 0.0 : static_cast<double>(correct_sum()) / static_cast<double>(t);
    }
};

namespace detail {

inline double truth_head_size(const GroundTruthFigure& truth) {
    const auto& nose = truth.keypoint(KeypointName::Nose);
    const auto& neck = truth.keypoint(KeypointName::Neck);
    if (!nose || !neck) return 0.0;
    return distance({nose->x, nose->y}, {neck->x, neck->y});
}

}  // namespace detail

// PCKh: a ground-truth keypoint counts correct when a same-name prediction
// exists within alpha * head_size of the truth figure (boundary inclusive).
// Truth keypoints without a prediction count incorrect; stray predictions are
// ignored. Truth figures without a defined head size are skipped and listed.
inline PckReport pck(const std::vector<Figure>& pred,
                     const std::vector<GroundTruthFigure>& truth, double alpha,
                     const std::string& group = "corpus") {
    if (alpha <= 0.0) {
        throw DomainError("pck: alpha must be positive");
    }
    std::map<std::string, const Figure*> pred_by_id;
    for (const Figure& p : pred) pred_by_id[p.id] = &p;

    PckReport report;
    report.group = group;
    report.alpha = alpha;
    for (const GroundTruthFigure& gt : truth) {
        const double head = detail::truth_head_size(gt);
        if (head <= 0.0) {
            report.skipped_figures.push_back(gt.id);
            continue;
        }
        auto it = pred_by_id.find(gt.id);
        const Figure* p = it != pred_by_id.end() ? it->second : nullptr;
        for (KeypointName name : kAllKeypoints) {
            const auto& t = gt.keypoint(name);
            if (!t) continue;
            const std::size_t idx = static_cast<std::size_t>(name);
            ++report.total[idx];
            if (p == nullptr) continue;
            const auto& pk = p->keypoint(name);
            if (!pk) continue;
            if (distance({pk->x, pk->y}, {t->x, t->y}) <= alpha * head) {
                ++report.correct[idx];
            }
        }
    }
    return report;
}

inline std::vector<PckReport> pck_sweep(const std::vector<Figure>& pred,
                                        const std::vector<GroundTruthFigure>& truth,
                                        const std::vector<double>& alphas,
                                        const std::string& group = "corpus") {
    for (std::size_t i = 1; i < alphas.size(); ++i) {
        if (alphas[i] < alphas[i - 1]) {
            throw DomainError("pck_sweep: alphas must be sorted ascending");
        }
    }
    std::vector<PckReport> out;
    out.reserve(alphas.size());
    for (double a : alphas) out.push_back(pck(pred, truth, a, group));
    return out;
}

struct SegmentReport {
    std::string group;
    std::size_t visible = 0;
    std::size_t correct = 0;

    double accuracy() const {
        return visible == 0 ? 0.0
                            : static_cast<double>(correct) / static_cast<double>(visible);
    }
};

// Segment accuracy is a ratio of annotated counts: correctness is read from
// the ground truth, not recomputed geometrically.
inline SegmentReport segment_accuracy(
    const std::map<std::string, std::vector<SegmentPolygon>>& pred,
    const std::vector<GroundTruthFigure>& truth, const std::string& group = "corpus") {
    for (const GroundTruthFigure& gt : truth) {
        if (!pred.empty() && pred.find(gt.id) == pred.end()) {
            throw DomainError("segment_accuracy: ground truth references unknown figure '" +
                              gt.id + "'");
        }
    }
    SegmentReport report;
    report.group = group;
    for (const GroundTruthFigure& gt : truth) {
        report.visible += gt.visible_segments.size();
        report.correct += gt.correct_segments.size();
    }
    return report;
}

}  // namespace artpose

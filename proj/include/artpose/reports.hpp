#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "artpose/cluster.hpp"
#include "artpose/evaluate.hpp"
#include "artpose/stats.hpp"
#include "artpose/types.hpp"

namespace artpose {

// Fixed-format numbers keep every emitter byte-reproducible.
inline std::string fmt_num(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string ellipsoid_csv(const EllipsoidFit& fit) {
    std::ostringstream out;
    out << "keypoint,n,mean_x,mean_y,cov_xx,cov_xy,cov_yy,radius_x,radius_y,scale_x,scale_y\n";
    for (const KeypointStats& st : fit.stats) {
        out << to_string(st.name) << ',' << st.n << ',' << fmt_num(st.mean.x) << ','
            << fmt_num(st.mean.y) << ',' << fmt_num(st.cov_xx) << ','
            << fmt_num(st.cov_xy) << ',' << fmt_num(st.cov_yy) << ','
            << fmt_num(st.radius_x) << ',' << fmt_num(st.radius_y) << ','
            << fmt_num(st.scale_x) << ',' << fmt_num(st.scale_y) << '\n';
    }
    return out.str();
}

inline std::string contour_csv(const ContourModel& model) {
    std::ostringstream out;
    out << "part,n,half_width,half_height,anchor_x,anchor_y\n";
    for (BodyPart part : kTPoseParts) {
        auto it = model.parts.find(part);
        if (it == model.parts.end()) continue;
        const ContourPart& p = it->second;
        out << to_string(part) << ',' << p.n << ',' << fmt_num(p.half_width) << ','
            << fmt_num(p.half_height) << ',' << fmt_num(p.anchor.x) << ','
            << fmt_num(p.anchor.y) << '\n';
    }
    return out.str();
}

inline std::string contour_comparison_csv(const std::vector<ContourComparison>& rows) {
    std::ostringstream out;
    out << "part,comparable,width_ratio,height_ratio,width_tag,height_tag\n";
    for (const ContourComparison& c : rows) {
        out << to_string(c.part) << ',' << (c.comparable ? "yes" : "skipped") << ',';
        if (c.comparable) {
            out << fmt_num(c.width_ratio) << ',' << fmt_num(c.height_ratio) << ','
                << to_string(c.width_tag) << ',' << to_string(c.height_tag);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
    return out.str();
}

inline std::string angle_vector_csv(const std::vector<AngleVector>& vectors) {
    std::ostringstream out;
    out << "figure_id";
    for (std::size_t i = 1; i <= kAngleCount; ++i) out << ",angle_" << i;
    out << '\n';
    for (const AngleVector& v : vectors) {
        out << v.figure_id;
        for (std::size_t i = 0; i < kAngleCount; ++i) out << ',' << fmt_num(v.angles[i]);
        out << '\n';
    }
    return out.str();
}

inline std::string flat_cut_csv(const std::vector<std::vector<std::string>>& partition) {
    std::ostringstream out;
    out << "figure_id,cluster\n";
    for (std::size_t c = 0; c < partition.size(); ++c) {
        for (const std::string& id : partition[c]) {
            out << id << ',' << c << '\n';
        }
    }
    return out.str();
}

// `group,metric,alpha,keypoint,correct,total,value`; aggregate rows use ALL.
inline std::string metric_csv(const std::vector<PckReport>& pck_reports,
                              const std::vector<SegmentReport>& segment_reports) {
    std::ostringstream out;
    out << "group,metric,alpha,keypoint,correct,total,value\n";
    for (const PckReport& r : pck_reports) {
        for (KeypointName name : kAllKeypoints) {
            const std::size_t idx = static_cast<std::size_t>(name);
            if (r.total[idx] == 0) continue;
            const double v = static_cast<double>(r.correct[idx]) /
                             static_cast<double>(r.total[idx]);
            out << r.group << ",pck," << fmt_num(r.alpha) << ',' << to_string(name)
                << ',' << r.correct[idx] << ',' << r.total[idx] << ',' << fmt_num(v)
                << '\n';
        }
        out << r.group << ",pck," << fmt_num(r.alpha) << ",ALL," << r.correct_sum()
            << ',' << r.total_sum() << ',' << fmt_num(r.value()) << '\n';
    }
    for (const SegmentReport& r : segment_reports) {
        out << r.group << ",segment_accuracy,,ALL," << r.correct << ',' << r.visible
            << ',' << fmt_num(r.accuracy()) << '\n';
    }
    return out.str();
}

inline std::string niche_csv(const std::vector<std::vector<std::string>>& niches) {
    std::ostringstream out;
    out << "niche_rank,size,figure_id\n";
    for (std::size_t i = 0; i < niches.size(); ++i) {
        for (const std::string& id : niches[i]) {
            out << i << ',' << niches[i].size() << ',' << id << '\n';
        }
    }
    return out.str();
}

}  // namespace artpose

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "artpose/geometry.hpp"
#include "artpose/normalize.hpp"
#include "artpose/types.hpp"

namespace artpose {

inline constexpr std::size_t kAngleCount = 13;

// The 13 joint triplets, angle taken at the middle keypoint. Order: spine
// triplet, then the right side shoulder-to-ankle, then the left side mirrors.
inline constexpr std::array<std::array<KeypointName, 3>, kAngleCount> kAngleTriplets = {{
    {KeypointName::Nose, KeypointName::Neck, KeypointName::MidHip},
    {KeypointName::RShoulder, KeypointName::Neck, KeypointName::MidHip},
    {KeypointName::RElbow, KeypointName::RShoulder, KeypointName::Neck},
    {KeypointName::RWrist, KeypointName::RElbow, KeypointName::RShoulder},
    {KeypointName::RHip, KeypointName::MidHip, KeypointName::Neck},
    {KeypointName::RKnee, KeypointName::RHip, KeypointName::MidHip},
    {KeypointName::RAnkle, KeypointName::RKnee, KeypointName::RHip},
    {KeypointName::LShoulder, KeypointName::Neck, KeypointName::MidHip},
    {KeypointName::LElbow, KeypointName::LShoulder, KeypointName::Neck},
    {KeypointName::LWrist, KeypointName::LElbow, KeypointName::LShoulder},
    {KeypointName::LHip, KeypointName::MidHip, KeypointName::Neck},
    {KeypointName::LKnee, KeypointName::LHip, KeypointName::MidHip},
    {KeypointName::LAnkle, KeypointName::LKnee, KeypointName::LHip},
}};

struct AngleVector {
    std::string figure_id;
    std::array<double, kAngleCount> angles{};   // degrees; masked entries hold 0
    std::array<bool, kAngleCount> present{};
};

// Inner angles for the 13 triplets; a triplet with a missing or degenerate
// keypoint is masked with the sentinel 0 so incompleteness itself clusters.
inline AngleVector angle_vector(const NormalizedPose& pose) {
    AngleVector out;
    out.figure_id = pose.figure_id;
    for (std::size_t i = 0; i < kAngleCount; ++i) {
        const auto& [a, b, c] = kAngleTriplets[i];
        const auto& ka = pose.keypoint(a);
        const auto& kb = pose.keypoint(b);
        const auto& kc = pose.keypoint(c);
        if (!ka || !kb || !kc) continue;
        try {
            out.angles[i] = inner_angle({ka->x, ka->y}, {kb->x, kb->y}, {kc->x, kc->y});
            out.present[i] = true;
        } catch (const GeometryError&) {
            // coincident joints: leave masked
        }
    }
    return out;
}

inline double angle_distance(const AngleVector& a, const AngleVector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kAngleCount; ++i) {
        const double d = a.angles[i] - b.angles[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

enum class LinkageMethod { Single, Complete, Average };

inline std::string_view to_string(LinkageMethod m) {
    switch (m) {
        case LinkageMethod::Single: return "single";
        case LinkageMethod::Complete: return "complete";
        case LinkageMethod::Average: return "average";
    }
    throw DomainError("unknown linkage method");
}

inline std::optional<LinkageMethod> linkage_from_string(std::string_view s) {
    if (s == "single") return LinkageMethod::Single;
    if (s == "complete") return LinkageMethod::Complete;
    if (s == "average") return LinkageMethod::Average;
    return std::nullopt;
}

struct Merge {
    std::size_t a = 0;       // cluster index; 0..n-1 leaves, n+i = merge i
    std::size_t b = 0;       // a holds the smaller contained leaf index
    double height = 0.0;
    std::size_t size = 0;    // leaves in the merged cluster
};

struct Dendrogram {
    std::vector<std::string> leaves;  // figure-ids, input order
    std::vector<Merge> merges;        // n-1 entries
};

// Agglomerative clustering over Euclidean distance in angle space.
// Inter-cluster distances are recomputed from the stored leaf-pair distance
// matrix each step; members are kept in ascending leaf order so the floating
// summation order is reproducible. Ties merge the pair whose smaller contained
// leaf index is least, then whose larger one is least.
inline Dendrogram linkage(const std::vector<AngleVector>& vectors,
                          LinkageMethod method = LinkageMethod::Average) {
    const std::size_t n = vectors.size();
    if (n < 2) {
        throw DomainError("linkage: need at least 2 vectors");
    }
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = angle_distance(vectors[i], vectors[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    struct Cluster {
        std::size_t id;
        std::vector<std::size_t> members;  // ascending leaf indices
    };
    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});

    Dendrogram out;
    out.leaves.reserve(n);
    for (const auto& v : vectors) out.leaves.push_back(v.figure_id);

    auto cluster_distance = [&](const Cluster& a, const Cluster& b) {
        double best = method == LinkageMethod::Complete
                          ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t i : a.members) {
            for (std::size_t j : b.members) {
                const double d = dist[i * n + j];
                if (method == LinkageMethod::Single) best = std::min(best, d);
                else if (method == LinkageMethod::Complete) best = std::max(best, d);
                else sum += d;
            }
        }
        if (method == LinkageMethod::Average) {
            return sum / static_cast<double>(a.members.size() * b.members.size());
        }
        return best;
    };

    for (std::size_t step = 0; step < n - 1; ++step) {
        std::size_t best_i = 0, best_j = 1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double d = cluster_distance(active[i], active[j]);
                const std::size_t lo = std::min(active[i].members.front(),
                                                active[j].members.front());
                const std::size_t hi = std::max(active[i].members.front(),
                                                active[j].members.front());
                const std::size_t cur_lo = std::min(active[best_i].members.front(),
                                                    active[best_j].members.front());
                const std::size_t cur_hi = std::max(active[best_i].members.front(),
                                                    active[best_j].members.front());
                if (d < best_d ||
                    (d == best_d && (lo < cur_lo || (lo == cur_lo && hi < cur_hi)))) {
                    best_d = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        Cluster& ca = active[best_i];
        Cluster& cb = active[best_j];
        const bool a_first = ca.members.front() < cb.members.front();
        Merge m;
        m.a = a_first ? ca.id : cb.id;
        m.b = a_first ? cb.id : ca.id;
        m.height = best_d;
        m.size = ca.members.size() + cb.members.size();
        out.merges.push_back(m);

        Cluster merged;
        merged.id = n + step;
        merged.members.resize(m.size);
        std::merge(ca.members.begin(), ca.members.end(), cb.members.begin(),
                   cb.members.end(), merged.members.begin());
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        active[best_i] = std::move(merged);
    }
    return out;
}

// Flat cut: undo the last k-1 merges. Clusters are ordered by their smallest
// contained leaf index; members are listed in leaf order.
inline std::vector<std::vector<std::string>> cut(const Dendrogram& d, std::size_t k) {
    const std::size_t n = d.leaves.size();
    if (k < 1 || k > n) {
        throw DomainError("cut: k out of range [1, " + std::to_string(n) + "]");
    }
    std::vector<std::vector<std::size_t>> by_id(2 * n - 1);  // leaves per cluster id
    for (std::size_t i = 0; i < n; ++i) by_id[i] = {i};
    std::vector<bool> absorbed(2 * n - 1, false);
    for (std::size_t step = 0; step < n - k; ++step) {
        const Merge& m = d.merges[step];
        std::vector<std::size_t> merged(by_id[m.a].size() + by_id[m.b].size());
        std::merge(by_id[m.a].begin(), by_id[m.a].end(), by_id[m.b].begin(),
                   by_id[m.b].end(), merged.begin());
        by_id[n + step] = std::move(merged);
        absorbed[m.a] = absorbed[m.b] = true;
    }
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t id = 0; id < n + (n - k); ++id) {
        if (!absorbed[id] && !by_id[id].empty()) clusters.push_back(by_id[id]);
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<std::vector<std::string>> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) {
        std::vector<std::string> ids;
        ids.reserve(c.size());
        for (std::size_t leaf : c) ids.push_back(d.leaves[leaf]);
        out.push_back(std::move(ids));
    }
    return out;
}

// Clusters no larger than max_fraction of the corpus, smallest first.
inline std::vector<std::vector<std::string>> niche_clusters(
    const std::vector<std::vector<std::string>>& partition, double max_fraction = 0.10) {
    if (partition.empty()) {
        throw DomainError("niche_clusters: empty partition");
    }
    if (max_fraction <= 0.0 || max_fraction >= 1.0) {
        throw DomainError("niche_clusters: max-fraction must be in (0, 1)");
    }
    std::size_t total = 0;
    for (const auto& c : partition) total += c.size();
    std::vector<std::vector<std::string>> out;
    for (const auto& c : partition) {
        if (static_cast<double>(c.size()) <= max_fraction * static_cast<double>(total)) {
            out.push_back(c);
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

// {leaves: [figure-id], merges: [[a, b, height, size]]}
inline std::string serialize_dendrogram(const Dendrogram& d) {
    nlohmann::json j;
    j["leaves"] = d.leaves;
    nlohmann::json merges = nlohmann::json::array();
    for (const Merge& m : d.merges) {
        merges.push_back({m.a, m.b, m.height, m.size});
    }
    j["merges"] = merges;
    return j.dump(2);
}

inline Dendrogram parse_dendrogram(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("dendrogram document: ") + e.what());
    }
    Dendrogram d;
    for (const auto& leaf : j.at("leaves")) d.leaves.push_back(leaf.get<std::string>());
    for (const auto& m : j.at("merges")) {
        d.merges.push_back({m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(),
                            m.at(2).get<double>(), m.at(3).get<std::size_t>()});
    }
    return d;
}

}  // namespace artpose

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artpose/anchors.hpp"
#include "artpose/cluster.hpp"
#include "artpose/evaluate.hpp"
#include "artpose/ingest.hpp"
#include "artpose/normalize.hpp"
#include "artpose/reports.hpp"
#include "artpose/stats.hpp"
#include "artpose/svg.hpp"

namespace artpose {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitConfigError = 2;

struct RunConfig {
    std::string manifest_path;
    std::vector<std::string> openpose_docs;
    std::vector<std::string> coco_docs;
    std::string segments_path;
    std::string ground_truth_path;
    std::string corpus_path;  // canonical corpus file; written by ingest
    double presence_threshold = kDefaultPresenceThreshold;
    std::string anchor_table_path;  // empty = built-in defaults
    LinkageMethod linkage_method = LinkageMethod::Average;
    std::size_t k = 5;
    std::vector<double> alphas = {0.5};
    std::string out_dir = "out";
    std::string group_by = "corpus";  // artist | gender | corpus
    double niche_max_fraction = 0.10;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline RunConfig parse_config(const std::string& doc) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    cfg.manifest_path = j.value("manifest", std::string());
    cfg.openpose_docs = j.value("openpose_docs", std::vector<std::string>{});
    cfg.coco_docs = j.value("coco_docs", std::vector<std::string>{});
    cfg.segments_path = j.value("segments", std::string());
    cfg.ground_truth_path = j.value("ground_truth", std::string());
    cfg.corpus_path = j.value("corpus", std::string());
    cfg.presence_threshold = j.value("presence_threshold", kDefaultPresenceThreshold);
    cfg.anchor_table_path = j.value("anchor_table", std::string());
    if (j.contains("linkage")) {
        const auto m = linkage_from_string(j["linkage"].get<std::string>());
        if (!m) throw ConfigError("config: unknown linkage '" + j["linkage"].get<std::string>() + "'");
        cfg.linkage_method = *m;
    }
    cfg.k = j.value("k", std::size_t{5});
    if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
    cfg.out_dir = j.value("out", std::string("out"));
    cfg.group_by = j.value("group_by", std::string("corpus"));
    cfg.niche_max_fraction = j.value("niche_max_fraction", 0.10);
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline void validate_config(const RunConfig& cfg) {
    if (cfg.k < 1) throw ConfigError("config: k must be >= 1");
    for (double a : cfg.alphas) {
        if (a <= 0.0) throw ConfigError("config: alphas must be positive");
    }
    if (cfg.group_by != "artist" && cfg.group_by != "gender" && cfg.group_by != "corpus") {
        throw ConfigError("config: group_by must be artist, gender, or corpus");
    }
    std::vector<std::string> paths = cfg.openpose_docs;
    paths.insert(paths.end(), cfg.coco_docs.begin(), cfg.coco_docs.end());
    if (!cfg.manifest_path.empty()) paths.push_back(cfg.manifest_path);
    if (!cfg.segments_path.empty()) paths.push_back(cfg.segments_path);
    if (!cfg.ground_truth_path.empty()) paths.push_back(cfg.ground_truth_path);
    if (!cfg.anchor_table_path.empty()) paths.push_back(cfg.anchor_table_path);
    for (const std::string& p : paths) {
        if (!std::filesystem::exists(p)) {
            throw ConfigError("config: referenced path does not exist: " + p);
        }
    }
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << content;
}

inline std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
    }
    return out.empty() ? std::string("_") : out;
}

inline AnchorTable load_anchor_table(const RunConfig& cfg) {
    if (cfg.anchor_table_path.empty()) return AnchorTable::defaults();
    return AnchorTable::parse(read_file(cfg.anchor_table_path));
}

inline std::string doc_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

}  // namespace detail

// Parse every input document into one canonical corpus, in manifest order
// where the manifest names figures, document order otherwise. Figures from a
// keypoint document named <stem>.json get ids <stem>_0, <stem>_1, ...
inline std::vector<Figure> build_corpus(const RunConfig& cfg) {
    std::vector<Figure> corpus;
    for (const std::string& path : cfg.openpose_docs) {
        std::vector<Figure> figs;
        try {
            figs = parse_openpose(detail::read_file(path), cfg.presence_threshold);
        } catch (const std::exception& e) {
            throw ParseError(path + ": " + e.what());
        }
        const std::string stem = detail::doc_stem(path);
        for (std::size_t i = 0; i < figs.size(); ++i) {
            figs[i].id = stem + "_" + std::to_string(i);
            figs[i].source_image = stem;
            corpus.push_back(std::move(figs[i]));
        }
    }
    for (const std::string& path : cfg.coco_docs) {
        std::vector<Figure> figs;
        try {
            figs = parse_coco_persons(detail::read_file(path), cfg.presence_threshold);
        } catch (const std::exception& e) {
            throw ParseError(path + ": " + e.what());
        }
        for (auto& f : figs) corpus.push_back(std::move(f));
    }
    if (!cfg.manifest_path.empty()) {
        const auto manifest = parse_manifest(detail::read_file(cfg.manifest_path));
        apply_manifest(corpus, manifest);
        // Manifest order defines corpus order; unmanifested figures follow.
        std::map<std::string, std::size_t> rank;
        for (std::size_t i = 0; i < manifest.size(); ++i) rank[manifest[i].figure_id] = i;
        std::stable_sort(corpus.begin(), corpus.end(),
                         [&rank](const Figure& a, const Figure& b) {
                             auto ia = rank.find(a.id);
                             auto ib = rank.find(b.id);
                             const std::size_t ra =
                                 ia != rank.end() ? ia->second : rank.size();
                             const std::size_t rb =
                                 ib != rank.end() ? ib->second : rank.size();
                             return ra < rb;
                         });
    }
    if (!cfg.segments_path.empty()) {
        auto segs = parse_segments(detail::read_file(cfg.segments_path));
        for (Figure& fig : corpus) {
            auto it = segs.find(fig.id);
            if (it != segs.end()) fig.segments = it->second;
        }
    }
    return corpus;
}

inline int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    std::vector<Figure> corpus;
    try {
        corpus = build_corpus(cfg);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInputError;
    }
    const std::string corpus_path =
        cfg.corpus_path.empty() ? cfg.out_dir + "/corpus.json" : cfg.corpus_path;
    try {
        detail::write_file(corpus_path, serialize_corpus(corpus));
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInputError;
    }

    std::map<std::string, std::size_t> by_artist;
    for (const Figure& f : corpus) ++by_artist[f.artist.empty() ? "(none)" : f.artist];
    out << "figures: " << corpus.size() << '\n';
    for (const auto& [artist, count] : by_artist) {
        out << "artist," << artist << ',' << count << '\n';
    }
    out << "valid_for_ellipsoids: " << filter_valid_for_ellipsoids(corpus).size() << '\n';
    out << "valid_for_clustering: " << filter_valid_for_clustering(corpus).size() << '\n';
    std::map<Gender, std::size_t> by_gender;
    for (const Figure& f : filter_valid_for_ellipsoids(corpus)) ++by_gender[f.gender];
    for (const auto& [g, count] : by_gender) {
        out << "valid_for_ellipsoids," << to_string(g) << ',' << count << '\n';
    }
    return kExitOk;
}

namespace detail {

inline std::map<std::string, std::vector<const Figure*>> group_corpus(
    const std::vector<Figure>& corpus, const std::string& group_by) {
    std::map<std::string, std::vector<const Figure*>> groups;
    for (const Figure& f : corpus) {
        std::string key = "corpus";
        if (group_by == "artist") key = f.artist.empty() ? "(none)" : f.artist;
        else if (group_by == "gender") key = std::string(to_string(f.gender));
        groups[key].push_back(&f);
    }
    return groups;
}

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    const std::string corpus_path =
        cfg.corpus_path.empty() ? cfg.out_dir + "/corpus.json" : cfg.corpus_path;
    std::vector<Figure> corpus;
    AnchorTable anchors;
    try {
        corpus = parse_corpus(detail::read_file(corpus_path));
        anchors = detail::load_anchor_table(cfg);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInputError;
    }

    std::map<std::string, std::vector<SegmentPolygon>> segs_by_figure;
    std::map<std::string, std::string> source_by_figure;
    for (const Figure& f : corpus) {
        if (!f.segments.empty()) segs_by_figure[f.id] = f.segments;
        source_by_figure[f.id] = f.source_image;
    }
    const auto overlaps = detect_overlaps(segs_by_figure, source_by_figure);

    std::ostringstream run_log;
    const auto groups = detail::group_corpus(corpus, cfg.group_by);
    for (const auto& [group, members] : groups) {
        const std::string dir = cfg.out_dir + "/" + detail::sanitize(group);
        std::vector<Figure> group_figs;
        group_figs.reserve(members.size());
        for (const Figure* f : members) group_figs.push_back(*f);

        // Ellipsoids.
        std::vector<NormalizedPose> normalized;
        for (const Figure& f : filter_valid_for_ellipsoids(group_figs)) {
            normalized.push_back(normalize_keypoints(f));
        }
        if (!normalized.empty()) {
            const EllipsoidFit fit = fit_ellipsoids(normalized);
            detail::write_file(dir + "/ellipsoids.csv", ellipsoid_csv(fit));
            detail::write_file(dir + "/ellipsoids.svg", ellipsoid_svg(fit));
        } else {
            run_log << group << ": no poses valid for ellipsoid fitting\n";
        }

        // Contours.
        std::vector<VitruvianFigure> vitruvian;
        for (const Figure& f : group_figs) {
            if (f.segments.empty()) continue;
            auto ov = overlaps.find(f.id);
            vitruvian.push_back(normalize_figure(
                f, f.segments, f.gender, anchors,
                ov != overlaps.end() ? ov->second : std::set<BodyPart>{}));
        }
        for (Gender g : {Gender::Male, Gender::Female, Gender::Unknown}) {
            const ContourModel model = average_contour(vitruvian, g, anchors);
            std::size_t contributing = 0;
            for (const auto& [part, cp] : model.parts) contributing += cp.n;
            if (contributing == 0) continue;
            const std::string tag = std::string(to_string(g));
            detail::write_file(dir + "/contour_" + tag + ".csv", contour_csv(model));
            detail::write_file(dir + "/contour_" + tag + ".svg", contour_svg(model));
        }

        // Clustering.
        std::vector<AngleVector> vectors;
        for (const Figure& f : filter_valid_for_clustering(group_figs)) {
            vectors.push_back(angle_vector(normalize_for_clustering(f)));
        }
        detail::write_file(dir + "/angle_vectors.csv", angle_vector_csv(vectors));
        if (vectors.size() >= 2) {
            const Dendrogram dendro = linkage(vectors, cfg.linkage_method);
            detail::write_file(dir + "/dendrogram.json", serialize_dendrogram(dendro));
            detail::write_file(dir + "/dendrogram.svg", dendrogram_svg(dendro));
            const std::size_t k = std::min(cfg.k, dendro.leaves.size());
            const auto partition = cut(dendro, k);
            detail::write_file(dir + "/clusters.csv", flat_cut_csv(partition));
            detail::write_file(dir + "/niche.csv",
                               niche_csv(niche_clusters(partition, cfg.niche_max_fraction)));
        } else {
            run_log << group << ": fewer than 2 clusterable poses, clustering skipped\n";
        }
    }
    detail::write_file(cfg.out_dir + "/run_log.txt", run_log.str());
    out << "analyzed " << groups.size() << " group(s) into " << cfg.out_dir << '\n';
    return kExitOk;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
        if (cfg.ground_truth_path.empty()) {
            throw ConfigError("config: evaluate requires 'ground_truth'");
        }
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    const std::string corpus_path =
        cfg.corpus_path.empty() ? cfg.out_dir + "/corpus.json" : cfg.corpus_path;
    std::vector<Figure> corpus;
    std::vector<GroundTruthFigure> truth;
    try {
        corpus = parse_corpus(detail::read_file(corpus_path));
        truth = parse_ground_truth(detail::read_file(cfg.ground_truth_path));
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInputError;
    }

    std::map<std::string, const Figure*> by_id;
    for (const Figure& f : corpus) by_id[f.id] = &f;
    std::ostringstream run_log;
    std::map<std::string, std::vector<GroundTruthFigure>> truth_by_group;
    for (const GroundTruthFigure& gt : truth) {
        auto it = by_id.find(gt.id);
        if (it == by_id.end()) {
            run_log << "unmatched figure id: " << gt.id << '\n';
            continue;
        }
        std::string key = "corpus";
        if (cfg.group_by == "artist") {
            key = it->second->artist.empty() ? "(none)" : it->second->artist;
        } else if (cfg.group_by == "gender") {
            key = std::string(to_string(it->second->gender));
        }
        truth_by_group[key].push_back(gt);
    }

    std::vector<PckReport> pck_reports;
    std::vector<SegmentReport> segment_reports;
    for (const auto& [group, group_truth] : truth_by_group) {
        for (const PckReport& r : pck_sweep(corpus, group_truth, cfg.alphas, group)) {
            for (const std::string& id : r.skipped_figures) {
                run_log << group << ": skipped figure without head size: " << id << '\n';
            }
            pck_reports.push_back(r);
        }
        segment_reports.push_back(segment_accuracy({}, group_truth, group));
    }
    detail::write_file(cfg.out_dir + "/metrics.csv",
                       metric_csv(pck_reports, segment_reports));
    detail::write_file(cfg.out_dir + "/evaluate_log.txt", run_log.str());
    out << "evaluated " << truth_by_group.size() << " group(s) into " << cfg.out_dir
        << '\n';
    return kExitOk;
}

}  // namespace artpose

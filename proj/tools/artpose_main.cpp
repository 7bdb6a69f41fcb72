#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "artpose/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string group_by;
    std::string linkage;
    std::size_t k = 0;
    std::vector<double> alphas;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Run configuration (JSON)")
        ->required();
    cmd->add_option("--out", flags.out_dir, "Output directory override");
    cmd->add_option("--group-by", flags.group_by, "Grouping key: artist|gender|corpus");
    cmd->add_option("--linkage", flags.linkage, "Linkage: single|complete|average");
    cmd->add_option("--k", flags.k, "Flat-cut cluster count");
    cmd->add_option("--alpha", flags.alphas, "PCK threshold(s), head-size relative");
}

// Flags win over the config file.
int load_and_override(const CommonFlags& flags, artpose::RunConfig& cfg) {
    try {
        cfg = artpose::load_config(flags.config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return artpose::kExitConfigError;
    }
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.group_by.empty()) cfg.group_by = flags.group_by;
    if (!flags.linkage.empty()) {
        const auto m = artpose::linkage_from_string(flags.linkage);
        if (!m) {
            std::cerr << "unknown linkage '" << flags.linkage << "'\n";
            return artpose::kExitConfigError;
        }
        cfg.linkage_method = *m;
    }
    if (flags.k != 0) cfg.k = flags.k;
    if (!flags.alphas.empty()) cfg.alphas = flags.alphas;
    return artpose::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pose and body-shape analysis for painting corpora"};
    app.require_subcommand(1);

    CommonFlags ingest_flags, analyze_flags, evaluate_flags;
    CLI::App* ingest = app.add_subcommand("ingest", "Parse inputs into the canonical corpus");
    add_common(ingest, ingest_flags);
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Ellipsoids, contours, clustering, and SVG reports");
    add_common(analyze, analyze_flags);
    CLI::App* evaluate = app.add_subcommand("evaluate", "PCK and segment-accuracy metrics");
    add_common(evaluate, evaluate_flags);

    CLI11_PARSE(app, argc, argv);

    artpose::RunConfig cfg;
    if (ingest->parsed()) {
        if (int rc = load_and_override(ingest_flags, cfg)) return rc;
        return artpose::cmd_ingest(cfg, std::cout, std::cerr);
    }
    if (analyze->parsed()) {
        if (int rc = load_and_override(analyze_flags, cfg)) return rc;
        return artpose::cmd_analyze(cfg, std::cout, std::cerr);
    }
    if (int rc = load_and_override(evaluate_flags, cfg)) return rc;
    return artpose::cmd_evaluate(cfg, std::cout, std::cerr);
}

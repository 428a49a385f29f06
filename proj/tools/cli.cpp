#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "drgen/campaign.hpp"
#include "drgen/coco.hpp"
#include "drgen/error.hpp"
#include "drgen/eval.hpp"
#include "drgen/io.hpp"

namespace drgen {

namespace fs = std::filesystem;

namespace {

int exit_code(const std::string& kind) {
    static const std::map<std::string, int> codes{{"argument", 2}, {"config", 3},   {"parse", 3},
                                                  {"io", 4},       {"scenario", 5}, {"structure", 6}};
    const auto it = codes.find(kind);
    return it == codes.end() ? 1 : it->second;
}

struct Args {
    std::string config;
    std::int64_t frame = 0;
    bool resume = false;
    std::string gt, pred, rule;
    std::int64_t samples = 16000;
    std::string out;
};

CampaignConfig load_config_or_report(const Args& a, std::ostream& err) {
    CampaignConfig c = load_campaign_config(a.config);
    const std::vector<std::string> missing = missing_inputs(c);
    if (!missing.empty()) {
        for (const std::string& m : missing) err << "missing: " << m << "\n";
        throw IoError(std::to_string(missing.size()) + " input file(s) missing");
    }
    return c;
}

int cmd_validate(const Args& a, std::ostream& out, std::ostream& err) {
    const CampaignConfig c = load_config_or_report(a, err);
    const CampaignContext ctx(c);
    std::size_t val = 0;
    for (std::int64_t i = 0; i < c.total_images; ++i) val += frame_split(c.master_seed, i, c.split) == Split::Val;
    out << "config ok\n";
    out << "config digest " << config_digest(c) << "\n";
    out << "scene " << ctx.scene().parts.size() << " parts, classes:";
    for (const std::string& cat : ctx.categories()) out << " " << cat;
    out << "\n";
    out << "frames " << c.total_images << "  train " << (static_cast<std::size_t>(c.total_images) - val) << "  val "
        << val << "\n";
    return 0;
}

int cmd_render_one(const Args& a, std::ostream& out, std::ostream& err) {
    CampaignConfig c = load_config_or_report(a, err);
    const fs::path root = a.out.empty() ? c.output_dir : fs::path(a.out);
    if (root.empty()) throw ArgumentError("no output directory: pass --out or set output_dir in the config");
    const CampaignContext ctx(std::move(c));
    const FrameOutput f = ctx.render_frame(a.frame);
    write_frame(root, f);
    out << "frame " << f.record.index << " (" << to_string(f.record.split) << ") -> "
        << (root / f.record.image).string() << "\n";
    out << "scenario digest " << f.record.scenario_digest << "\n";
    out << f.annotations.size() << " annotation(s), " << f.candidates.size() << " candidate(s)\n";
    for (const InstanceAnnotation& an : f.annotations)
        out << "  " << an.class_label << " #" << an.instance_id << " [" << an.bbox.x << ", " << an.bbox.y << ", "
            << an.bbox.w << ", " << an.bbox.h << "] visible " << an.visible_pixels << "\n";
    return 0;
}

int cmd_generate(const Args& a, std::ostream& out, std::ostream& err) {
    CampaignConfig c = load_config_or_report(a, err);
    if (!a.out.empty()) c.output_dir = a.out;
    CampaignOptions opts;
    opts.progress = [&err](std::int64_t done, std::int64_t total) {
        if (done == total || done % 100 == 0) err << "frame " << done << "/" << total << "\n";
    };
    const DatasetManifest m = a.resume ? resume_campaign(c, opts) : run_campaign(c, opts);
    out << "dataset " << c.output_dir.string() << "\n";
    out << "frames " << m.frames.size() << "  train " << m.train_count << "  val " << m.val_count << "\n";
    out << "config digest " << m.config_digest << "\n";
    return 0;
}

int cmd_relabel(const Args& a, std::ostream& out, std::ostream&) {
    const CampaignConfig c = load_campaign_config(a.config);
    const fs::path root = a.out.empty() ? c.output_dir : fs::path(a.out);
    if (root.empty()) throw ArgumentError("no dataset directory: pass --out or set output_dir in the config");
    const DatasetManifest m = relabel_dataset(root, c.label_policy);
    out << "relabeled " << m.frames.size() << " frame(s) in " << root.string() << "\n";
    out << "config digest " << m.config_digest << "\n";
    return 0;
}

int cmd_eval(const Args& a, std::ostream& out, std::ostream&) {
    const CocoDataset gt = load_coco(a.gt);
    const std::vector<CocoResult> pred = load_results(a.pred);
    const UseCaseRule rule = load_rule(a.rule);
    const EvalReport r = evaluate(gt, pred, rule);
    out << format_report(r);
    if (!a.out.empty()) write_text_file(a.out, dump_canonical(to_json(r)));
    return 0;
}

int cmd_stats(const Args& a, std::ostream& out, std::ostream& err) {
    const CampaignConfig c = load_config_or_report(a, err);
    out << format_stats(draw_statistics(c, a.samples), c);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic inspection dataset generator: render, label and evaluate.", "drgen"};
    app.set_version_flag("--version", DRGEN_VERSION);
    app.require_subcommand(1, 1);
    Args a;

    auto* validate = app.add_subcommand("validate", "Check a campaign config and its scene; print the config digest");
    validate->add_option("--config", a.config, "Campaign config JSON")->required();

    auto* render_one = app.add_subcommand("render-one", "Render and label a single frame of a campaign");
    render_one->add_option("--config", a.config, "Campaign config JSON")->required();
    render_one->add_option("--frame", a.frame, "Frame index")->required()->check(CLI::NonNegativeNumber);
    render_one->add_option("--out", a.out, "Output root (default: the config's output_dir)");

    auto* generate = app.add_subcommand("generate", "Run a full campaign");
    generate->add_option("--config", a.config, "Campaign config JSON")->required();
    generate->add_flag("--resume", a.resume, "Complete a partially written campaign");
    generate->add_option("--out", a.out, "Output directory (default: the config's output_dir)");

    auto* relabel =
        app.add_subcommand("relabel", "Re-derive annotations from stored id maps under the config's label policy");
    relabel->add_option("--config", a.config, "Campaign config JSON holding the new label_policy")->required();
    relabel->add_option("--out", a.out, "Dataset directory (default: the config's output_dir)");

    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    eval->add_option("--gt", a.gt, "Ground-truth COCO JSON")->required();
    eval->add_option("--pred", a.pred, "COCO results JSON")->required();
    eval->add_option("--rule", a.rule, "Use-case rule JSON")->required();
    eval->add_option("--out", a.out, "Also write the report as JSON here");

    auto* stats = app.add_subcommand("stats", "Histogram scenario draws without rendering");
    stats->add_option("--config", a.config, "Campaign config JSON")->required();
    stats->add_option("--samples", a.samples, "Number of simulated frames")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_validate(a, out, err);
        if (*render_one) return cmd_render_one(a, out, err);
        if (*generate) return cmd_generate(a, out, err);
        if (*relabel) return cmd_relabel(a, out, err);
        if (*eval) return cmd_eval(a, out, err);
        if (*stats) return cmd_stats(a, out, err);
    } catch (const Error& e) {
        err << "error[" << e.kind() << "]: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace drgen

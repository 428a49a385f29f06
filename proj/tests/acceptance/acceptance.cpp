// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "drgen/bvh.hpp"
#include "drgen/campaign.hpp"
#include "drgen/eval.hpp"
#include "drgen/io.hpp"
#include "drgen/labeler.hpp"
#include "drgen/material.hpp"
#include "drgen/parallel.hpp"
#include "drgen/renderer.hpp"
#include "drgen/toy_scene.hpp"
#include "drgen/triangle.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace drgen;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kFurnaceRadiance = 0.5;
constexpr double kFurnaceRelTol = 0.02;
constexpr int kFurnaceSize = 256;
constexpr int kFurnaceSpp = 256;
constexpr double kFurnaceBudgetSeconds = 60.0;
constexpr int kBvhTriangles = 1000;
constexpr int kBvhRays = 1000;
constexpr int kLabelScenes = 20;
constexpr int kLabelSize = 128;
constexpr double kLabelBudgetSeconds = 120.0;
constexpr int kApTrials = 1000;
constexpr double kApAbsTol = 1e-12;  // double rounding of an exact rational
constexpr std::int64_t kCampaignFrames = 50;
constexpr int kMaterialDraws = 115000;
constexpr int kRotationDraws = 10000;
constexpr int kHdriDraws = 16000;
constexpr double kAlpha = 0.001;
constexpr std::int64_t kProtocolFrames = 10000;
constexpr long kValExpected = 2000;
constexpr long kValTolerance = 150;
constexpr double kProtocolMapLo = 0.99;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> t;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) t[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
    return t;
}

int run_cli_quiet(std::vector<std::string> args, std::string* out_text = nullptr) {
    args.insert(args.begin(), "drgen");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    return code;
}

// ---------------------------------------------------------------- criteria

void furnace(Outcome& o) {
    const Resolution res{kFurnaceSize, kFurnaceSize};
    SceneGraph s;
    PartInstance sphere = testing::make_part("sphere", make_uv_sphere(0.5, 64, 128), {0, 0, 0}, 1, "ball");
    MaterialSpec white;
    white.base_color = {1, 1, 1};
    white.metalness = 0;
    white.specular = 0;
    white.roughness = 1;
    sphere.material = white;
    s.parts.push_back(sphere);
    s.camera.pose = look_at({0, 0, 2.2}, {0, 0, 0});
    s.camera.vertical_fov = 0.6;
    s.camera.resolution = res;
    s.environment = EnvironmentLight::constant({kFurnaceRadiance, kFurnaceRadiance, kFurnaceRadiance});
    RenderSettings rs;
    rs.resolution = res;
    rs.samples_per_pixel = kFurnaceSpp;
    rs.max_bounces = 6;
    rs.russian_roulette_start = 3;
    rs.seed = 1;

    const auto t0 = std::chrono::steady_clock::now();
    const FrameBuffers fb = trace(s, build_bvh(s), rs);
    const double secs = seconds_since(t0);
    double worst = 0.0;
    long pixels = 0;
    for (int y = 0; y < res.height; ++y)
        for (int x = 0; x < res.width; ++x) {
            if (fb.instance_id.at(x, y) != 1) continue;
            ++pixels;
            const Rgb c = fb.linear.at(x, y);
            for (int ch = 0; ch < 3; ++ch)
                worst = std::max(worst, std::abs(c[ch] - kFurnaceRadiance) / kFurnaceRadiance);
        }
    o.detail << pixels << " sphere px, worst rel err " << worst << ", " << secs << " s on " << worker_count()
             << " worker(s)";
    o.require(pixels > 10000, "sphere covers the frame");
    o.require(worst <= kFurnaceRelTol, "every pixel within 2%");
    o.require(secs <= kFurnaceBudgetSeconds, "runtime budget");
}

void bvh_oracle(Outcome& o) {
    RandomStream rng(20240);
    std::vector<BvhTriangle> tris;
    for (int i = 0; i < kBvhTriangles; ++i) {
        const Vec3 c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        auto v = [&] { return c + Vec3{rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)}; };
        tris.push_back({v(), v(), v(), 0, static_cast<std::uint32_t>(i)});
    }
    const Bvh bvh(tris);
    int mismatches = 0, hits = 0;
    for (int r = 0; r < kBvhRays; ++r) {
        const Ray ray{{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)},
                      normalize(Vec3{rng.normal(), rng.normal(), rng.normal()})};
        std::optional<std::pair<std::uint32_t, double>> brute;
        for (std::uint32_t i = 0; i < tris.size(); ++i) {
            const auto h = intersect_triangle(ray, tris[i].v0, tris[i].v1, tris[i].v2, 0.0, kInfinity);
            if (h && (!brute || h->t < brute->second)) brute = std::make_pair(i, h->t);
        }
        const auto hit = bvh.intersect(ray, 0.0, kInfinity);
        hits += brute.has_value();
        if (hit.has_value() != brute.has_value() || (hit && (hit->triangle != brute->first || hit->t != brute->second)))
            ++mismatches;
    }
    o.detail << kBvhTriangles << " tris x " << kBvhRays << " rays, " << hits << " hits, " << mismatches
             << " mismatches";
    o.require(mismatches == 0, "zero mismatches");
}

void label_oracle(Outcome& o) {
    RandomStream rng(4096);
    const auto t0 = std::chrono::steady_clock::now();
    int boxes = 0, wrong = 0;
    for (int n = 0; n < kLabelScenes; ++n) {
        const SceneGraph s = testing::random_scene(rng, {kLabelSize, kLabelSize});
        const IdMap ids = render_instance_ids(s, build_bvh(s), s.camera.resolution);
        const auto anns = measure_instances(ids, s);
        std::map<std::uint32_t, std::uint64_t> counts;
        const auto expect = testing::boxes_of(testing::oracle_ids(s, testing::world_triangles(s)), counts);
        std::size_t labeled = 0;
        for (const auto& [id, box] : expect) labeled += s.find(id)->labeled();
        if (labeled != anns.size()) ++wrong;
        for (const InstanceAnnotation& a : anns) {
            ++boxes;
            const auto it = expect.find(a.instance_id);
            if (it == expect.end() || !(it->second == a.bbox) || counts[a.instance_id] != a.visible_pixels) ++wrong;
        }
    }
    const double secs = seconds_since(t0);
    o.detail << kLabelScenes << " scenes at " << kLabelSize << "^2, " << boxes << " boxes, " << wrong << " differ, "
             << secs << " s";
    o.require(wrong == 0, "every bbox identical");
    o.require(boxes > kLabelScenes, "non-trivial scenes");
    o.require(secs <= kLabelBudgetSeconds, "runtime budget");
}

void map_oracle(Outcome& o) {
    RandomStream rng(31337);
    const double levels[] = {0.1, 0.3, 0.5, 0.5, 0.7, 0.9};
    int mismatches = 0, scored = 0;
    for (int trial = 0; trial < kApTrials; ++trial) {
        const auto n_gt = static_cast<std::size_t>(rng.integer(0, 4));
        const auto n_det = static_cast<std::size_t>(rng.integer(0, 6));
        std::vector<Box> gts;
        for (std::size_t g = 0; g < n_gt; ++g)
            gts.push_back({rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0.5, 5), rng.uniform(0.5, 5)});
        std::vector<Detection> dets;
        for (std::size_t i = 0; i < n_det; ++i) {
            Box b = n_gt > 0 && rng.uniform() < 0.7
                        ? gts[rng.index(n_gt)]
                        : Box{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0.5, 5), rng.uniform(0.5, 5)};
            b.x += rng.uniform(-0.5, 0.5);
            b.y += rng.uniform(-0.5, 0.5);
            dets.push_back({1, 1, b, levels[rng.index(6)]});
        }
        const MatchResult m = match_detections(dets, gts);
        const std::vector<bool> expect = testing::oracle_greedy(dets, gts);
        const auto tps = static_cast<std::size_t>(std::count(expect.begin(), expect.end(), true));
        if (m.true_positive != expect || tps > testing::oracle_max_matching(dets, gts)) ++mismatches;
        if (n_gt == 0) continue;
        std::vector<ScoredMatch> sm;
        std::vector<double> conf;
        for (std::size_t i = 0; i < n_det; ++i) {
            sm.push_back({dets[i].confidence, m.true_positive[i]});
            conf.push_back(dets[i].confidence);
        }
        const double exact = testing::oracle_ap(conf, m.true_positive, static_cast<std::int64_t>(n_gt)).value();
        const auto ap = average_precision(sm, n_gt);
        ++scored;
        if (!ap || std::abs(*ap - exact) > kApAbsTol) ++mismatches;
    }
    const auto hand = average_precision({{0.9, true}, {0.8, false}, {0.7, true}}, 2);
    const bool hand_ok = hand && std::abs(*hand - 5.0 / 6.0) <= kApAbsTol;
    o.detail << kApTrials << " trials (" << scored << " with GT), " << mismatches << " mismatches; hand case AP "
             << (hand ? *hand : -1.0);
    o.require(mismatches == 0, "oracle agreement");
    o.require(hand_ok, "AP = 5/6");
}

void determinism(Outcome& o) {
    testing::TempDir dir("acc_det");
    ToyOptions opt;
    opt.total_images = kCampaignFrames;
    const ToyWorkspace ws = write_toy_workspace(dir.path(), opt);
    const std::string cfg = ws.config.string();
    const int a = run_cli_quiet({"generate", "--config", cfg, "--out", (dir / "run_a").string()});
    force_worker_count(4);
    const int b = run_cli_quiet({"generate", "--config", cfg, "--out", (dir / "run_b").string()});
    force_worker_count(0);
    o.require(a == 0 && b == 0, "both runs succeed");
    if (a != 0 || b != 0) return;
    const auto ta = read_tree(dir / "run_a"), tb = read_tree(dir / "run_b");
    std::size_t pngs = 0;
    for (const auto& [p, _] : ta) pngs += p.rfind("images/", 0) == 0;
    o.require(ta == tb, "byte-identical trees");
    o.require(pngs == static_cast<std::size_t>(kCampaignFrames), "one image per frame");

    int differing = 0;
    for (const std::int64_t frame : {0, 7, 31, 49}) {
        const fs::path one = dir / ("one_" + std::to_string(frame));
        if (run_cli_quiet({"render-one", "--config", cfg, "--frame", std::to_string(frame), "--out", one.string()}) !=
            0) {
            ++differing;
            continue;
        }
        for (const auto& [p, bytes] : read_tree(one))
            if (!ta.count(p) || ta.at(p) != bytes) ++differing;
    }
    o.detail << ta.size() << " files per run (" << pngs << " images), runs identical: " << (ta == tb ? "yes" : "no")
             << "; render-one frames 0/7/31/49 differing files: " << differing;
    o.require(differing == 0, "render-one matches the campaign");
}

void distributions(Outcome& o) {
    const MaterialLibrary lib = generate_default_library(1);
    PartInstance part;
    RandomStream rng(115);
    std::vector<double> counts(lib.entries.size(), 0.0);
    for (int i = 0; i < kMaterialDraws; ++i)
        ++counts[*draw_material(MaterialStrategy::ComplexLibrary, lib, part, rng).library_index];
    const double expected = static_cast<double>(kMaterialDraws) / static_cast<double>(lib.entries.size());
    double chi = 0.0;
    for (double c : counts) chi += (c - expected) * (c - expected) / expected;
    const double chi_crit = testing::chi_square_critical(static_cast<double>(lib.entries.size() - 1), testing::kZ999);

    testing::TempDir dir("acc_dist");
    const ToyWorkspace ws = write_toy_workspace(dir.path());
    const CampaignConfig config = load_campaign_config(ws.config);
    const SceneGraph scene = load_scene(ws.scene);
    const ScenarioSampler sampler(config.randomization);
    std::vector<double> angles;
    for (std::int64_t i = 0; i < kRotationDraws; ++i)
        angles.push_back(sampler.sample(scene, frame_seed(101, i)).hdri_rotation);
    const double ks = testing::ks_uniform(angles, 0.0, kTwoPi);
    const double ks_crit = testing::ks_critical(angles.size(), kAlpha);

    std::vector<long> hdri(config.randomization.hdri_pool.size(), 0);
    for (std::int64_t i = 0; i < kHdriDraws; ++i) ++hdri[sampler.sample(scene, frame_seed(202, i)).hdri_index];
    const double p = 1.0 / static_cast<double>(hdri.size());
    const double bound = 4.0 * std::sqrt(kHdriDraws * p * (1.0 - p));
    long worst = 0;
    for (long c : hdri) worst = std::max(worst, static_cast<long>(std::abs(c - kHdriDraws * p)));

    o.detail << "library " << lib.entries.size() << ", chi2 " << chi << " < " << chi_crit << "; KS " << ks << " < "
             << ks_crit << "; pool " << hdri.size() << ", worst |count-1000| " << worst << " <= " << bound;
    o.require(lib.entries.size() == 115, "115 materials");
    o.require(chi < chi_crit, "material chi-square");
    o.require(ks < ks_crit, "rotation KS");
    o.require(hdri.size() == 16, "16 HDRIs");
    o.require(worst <= bound, "HDRI binomial bound");
}

void protocol_shape(Outcome& o) {
    testing::TempDir dir("acc_proto");
    ToyOptions opt;
    opt.total_images = kProtocolFrames;
    const ToyWorkspace ws = write_toy_workspace(dir.path(), opt);
    std::string out;
    const int rc = run_cli_quiet({"validate", "--config", ws.config.string()}, &out);
    long frames = -1, train = -1, val = -1;
    if (const auto at = out.find("frames "); at != std::string::npos) {
        std::istringstream in(out.substr(at));
        std::string w1, w2, w3;
        in >> w1 >> frames >> w2 >> train >> w3 >> val;
    }
    o.require(rc == 0, "validate succeeds");
    o.require(frames == kProtocolFrames && train + val == kProtocolFrames, "frame count");
    o.require(std::abs(val - kValExpected) <= kValTolerance, "validation count within tolerance");

    CocoDataset gt;
    gt.categories = {{1, "screw"}};
    std::int64_t ann = 1;
    for (std::int64_t i = 1; i <= 500; ++i) {
        gt.images.push_back({i, "images/val/" + frame_stem(i) + ".png", 1920, 1080});
        for (int k = 0; k < (i <= 460 ? 2 : 1); ++k)
            gt.annotations.push_back({ann++, i, 1, 300.0 + 400 * k, 500.0, 40.0, 40.0, 1600.0, 0});
    }
    std::vector<CocoResult> pred;
    for (const CocoAnnotation& a : gt.annotations) pred.push_back({a.image_id, a.category_id, a.x, a.y, a.w, a.h, 1.0});
    UseCaseRule rule;
    rule.name = "door-lock";
    rule.required["screw"] = 2;
    const EvalReport r = evaluate(gt, pred, rule);
    o.detail << "10k split train " << train << " val " << val << " (" << kValExpected << " +- " << kValTolerance
             << "); 460/40: A " << r.accuracy << " P " << r.precision << " R " << r.recall << " mAP " << r.map50;
    o.require(r.accuracy == 1.0 && r.precision == 1.0 && r.recall == 1.0, "A = P = R = 1.00");
    o.require(r.map50 >= kProtocolMapLo && r.map50 <= 1.0, "mAP in [0.99, 1]");
    o.require(r.confusion.tn == 460 && r.confusion.tp == 40, "460 OK / 40 NOK");
}

// Schema checks for one generated dataset. Returns an empty string when valid.
std::string dataset_problems(const fs::path& root, std::int64_t frames) {
    try {
        const DatasetManifest m = manifest_from_json(Json::parse(read_text_file(root / "manifest.json")));
        if (static_cast<std::int64_t>(m.frames.size()) != frames) return "manifest frame count";
        std::size_t images = 0;
        for (const char* split : {"train", "val"}) {
            const CocoDataset d = load_coco(root / "annotations" / (std::string(split) + ".json"));
            for (const CocoImage& img : d.images) {
                const Image8 png = read_png_rgb(root / img.file_name);
                if (png.width != img.width || png.height != img.height) return img.file_name + " size";
                ++images;
            }
            std::map<std::int64_t, CocoImage> by_id;
            for (const CocoImage& img : d.images) by_id[img.id] = img;
            for (const CocoAnnotation& a : d.annotations) {
                const CocoImage& img = by_id.at(a.image_id);
                if (a.x < 0 || a.y < 0 || a.w < 1 || a.h < 1 || a.x + a.w > img.width || a.y + a.h > img.height)
                    return "bbox out of bounds";
                if (a.area != a.w * a.h || a.iscrowd != 0) return "annotation fields";
            }
        }
        if (static_cast<std::int64_t>(images) != frames) return "image count";
        for (std::int64_t i = 0; i < frames; ++i)
            if (!fs::exists(root / "labels" / (frame_stem(i) + ".json")) ||
                !fs::exists(root / "scenarios" / (frame_stem(i) + ".json")))
                return "missing per-frame records";
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

void ablation(Outcome& o) {
    testing::TempDir dir("acc_ablate");
    ToyOptions opt;
    opt.total_images = kCampaignFrames;
    const ToyWorkspace ws = write_toy_workspace(dir.path(), opt);
    const CampaignConfig base = load_campaign_config(ws.config);

    std::vector<std::pair<std::string, CampaignConfig>> variants;
    for (MaterialStrategy m :
         {MaterialStrategy::ComplexLibrary, MaterialStrategy::PhotoRealistic, MaterialStrategy::RandomColor}) {
        CampaignConfig c = base;
        c.randomization.material_strategy = m;
        variants.emplace_back("material=" + std::string(to_string(m)), c);
    }
    const std::pair<BackgroundMode, const char*> backgrounds[] = {{BackgroundMode::RealImagePool, "backgrounds"},
                                                                  {BackgroundMode::ImagePool, "textures"},
                                                                  {BackgroundMode::HdriOnly, ""}};
    for (const auto& [mode, sub] : backgrounds) {
        CampaignConfig c = base;
        c.randomization.background = {mode, *sub ? dir / sub : fs::path{}};
        variants.emplace_back("background=" + std::string(to_string(mode)), c);
    }
    for (DistractorMode d : {DistractorMode::None, DistractorMode::Primitive, DistractorMode::ComplexMeshPool}) {
        CampaignConfig c = base;
        c.randomization.distractors = {d, d == DistractorMode::ComplexMeshPool ? dir / "distractor_meshes" : fs::path{},
                                       d == DistractorMode::None ? 0 : 1, d == DistractorMode::None ? 0 : 3};
        variants.emplace_back("distractors=" + std::string(to_string(d)), c);
    }
    int valid = 0;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        auto& [name, c] = variants[i];
        c.output_dir = dir / ("v" + std::to_string(i));
        std::string problem;
        try {
            run_campaign(c);
            problem = dataset_problems(c.output_dir, kCampaignFrames);
        } catch (const std::exception& e) {
            problem = e.what();
        }
        if (problem.empty())
            ++valid;
        else
            o.require(false, name + ": " + problem);
    }

    CampaignConfig on = base, off = base;
    on.randomization.noise_sigma = Range{0.02, 0.04};
    off.randomization.noise_sigma.reset();
    on.output_dir = dir / "noise_on";
    off.output_dir = dir / "noise_off";
    run_campaign(on);
    run_campaign(off);
    const auto ta = read_tree(on.output_dir), tb = read_tree(off.output_dir);
    int image_diffs = 0, other_diffs = 0;
    for (const auto& [p, bytes] : ta) {
        if (!tb.count(p)) {
            ++other_diffs;
            continue;
        }
        if (bytes == tb.at(p)) continue;
        if (p.rfind("images/", 0) == 0)
            ++image_diffs;
        else if (p.rfind("labels/", 0) == 0) {
            const Json la = Json::parse(bytes), lb = Json::parse(tb.at(p));
            other_diffs += la["annotations"] != lb["annotations"] || la["candidates"] != lb["candidates"];
        } else if (p.rfind("ids/", 0) == 0 || p.rfind("annotations/", 0) == 0)
            ++other_diffs;
    }
    // Scenario files, config, manifest and the scenario digest in each labels file record the sigma itself.
    // Annotations, id maps and COCO files must not move.
    o.detail << valid << "/" << variants.size() << " variants schema-valid; noise on/off: " << image_diffs
             << " beauty images differ, " << other_diffs << " label/id/annotation files differ";
    o.require(image_diffs == kCampaignFrames, "noise changes every beauty image");
    o.require(other_diffs == 0, "annotations unaffected by noise");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"renderer-furnace", furnace},      {"bvh-correctness", bvh_oracle},
        {"label-oracle", label_oracle},     {"map-oracle", map_oracle},
        {"determinism", determinism},       {"randomization-distributions", distributions},
        {"protocol-shape", protocol_shape}, {"ablation-smoke", ablation},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            check(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
    return failed;
}

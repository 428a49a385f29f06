#include "drgen/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>

#include "drgen/bvh.hpp"
#include "drgen/error.hpp"
#include "drgen/io.hpp"
#include "drgen/parallel.hpp"
#include "drgen/rng.hpp"

namespace drgen {

namespace fs = std::filesystem;

namespace {

// Stream tags keep the per-frame seeds of different consumers apart.
constexpr std::uint64_t kSplitStream = 0x73706c6974ull;     // "split"
constexpr std::uint64_t kRenderStream = 0x72656e646572ull;  // "render"
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;     // "noise"

constexpr const char* kCheckpointFile = "checkpoint.json";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kConfigFile = "config.json";
constexpr const char* kLibraryFile = "materials.json";

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path raw(p);
    return (raw.is_absolute() ? raw : base / raw).lexically_normal();
}

Split parse_split(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    throw ConfigError("split", "unknown split '" + s + "'");
}

Json read_json(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("'" + path.string() + "' does not exist");
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

// PNGs go through a temporary sibling as well so an interrupted frame never
// leaves a truncated image behind under its final name.
void write_png_atomic(const fs::path& path, const Image8& image) {
    const fs::path tmp = path.parent_path() / (path.stem().string() + ".partial.png");
    write_png(tmp, image);
    fs::rename(tmp, path);
}

void write_ids_atomic(const fs::path& path, const IdMap& ids) {
    const fs::path tmp = path.parent_path() / (path.stem().string() + ".partial.png");
    write_png_ids(tmp, ids);
    fs::rename(tmp, path);
}

std::string relative_image(Split split, std::int64_t index) {
    return "images/" + std::string(to_string(split)) + "/" + frame_stem(index) + ".png";
}

fs::path labels_path(const fs::path& root, std::int64_t index) {
    return root / "labels" / (frame_stem(index) + ".json");
}

fs::path ids_path(const fs::path& root, Split split, std::int64_t index) {
    return root / "ids" / std::string(to_string(split)) / (frame_stem(index) + ".png");
}

Json annotations_json(const std::vector<InstanceAnnotation>& v) {
    Json a = Json::array();
    for (const InstanceAnnotation& x : v) a.push_back(to_json(x));
    return a;
}

std::vector<InstanceAnnotation> annotations_of(const Json& j, const std::string& path) {
    std::vector<InstanceAnnotation> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(annotation_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

struct StoredFrame {
    FrameRecord record;
    int width = 0;
    int height = 0;
    std::vector<InstanceAnnotation> candidates;
    std::vector<InstanceAnnotation> annotations;
};

Json labels_json(const FrameRecord& r, int width, int height, const std::vector<InstanceAnnotation>& candidates,
                 const std::vector<InstanceAnnotation>& annotations) {
    return Json{{"frame", r.index},
                {"frame_seed", r.frame_seed},
                {"split", to_string(r.split)},
                {"image", r.image},
                {"width", width},
                {"height", height},
                {"scenario_digest", r.scenario_digest},
                {"candidates", annotations_json(candidates)},
                {"annotations", annotations_json(annotations)}};
}

StoredFrame read_labels(const fs::path& path) {
    using namespace json_field;
    const Json j = read_json(path);
    const std::string p = path.string();
    StoredFrame f;
    f.record.index = integer(j, "frame", p);
    f.record.frame_seed = require(j, "frame_seed", p).get<std::uint64_t>();
    f.record.split = parse_split(string(j, "split", p));
    f.record.image = string(j, "image", p);
    f.record.scenario_digest = string(j, "scenario_digest", p);
    f.width = static_cast<int>(integer(j, "width", p));
    f.height = static_cast<int>(integer(j, "height", p));
    f.candidates = annotations_of(require(j, "candidates", p), p + ".candidates");
    f.annotations = annotations_of(require(j, "annotations", p), p + ".annotations");
    return f;
}

struct Checkpoint {
    std::string config_digest;
    std::int64_t total_images = 0;
    std::vector<std::string> categories;
};

Json to_json(const Checkpoint& c) {
    return Json{{"config_digest", c.config_digest}, {"total_images", c.total_images}, {"categories", c.categories}};
}

Checkpoint read_checkpoint(const fs::path& root) {
    using namespace json_field;
    const fs::path path = root / kCheckpointFile;
    const Json j = read_json(path);
    Checkpoint c;
    c.config_digest = string(j, "config_digest", path.string());
    c.total_images = integer(j, "total_images", path.string());
    c.categories = require(j, "categories", path.string()).get<std::vector<std::string>>();
    return c;
}

bool frame_done(const fs::path& root, std::int64_t index) { return fs::exists(labels_path(root, index)); }

// Single-threaded reduction over the stored frames: COCO files, then the manifest.
DatasetManifest assemble(const fs::path& root, const CampaignConfig& config, const Checkpoint& cp) {
    DatasetManifest m;
    m.config = to_json(config);
    m.config_digest = cp.config_digest;
    m.library_file = kLibraryFile;
    m.library_digest = hex64(fnv1a64(read_text_file(root / kLibraryFile)));
    m.tool_version = DRGEN_VERSION;

    std::vector<FrameLabels> train, val;
    for (std::int64_t i = 0; i < config.total_images; ++i) {
        StoredFrame f = read_labels(labels_path(root, i));
        if (f.record.index != i) throw StructuralError(labels_path(root, i).string() + ": frame index mismatch");
        FrameLabels fl{CocoImage{i + 1, f.record.image, f.width, f.height}, std::move(f.annotations)};
        if (f.record.split == Split::Train) {
            train.push_back(std::move(fl));
            ++m.train_count;
        } else {
            val.push_back(std::move(fl));
            ++m.val_count;
        }
        m.frames.push_back(std::move(f.record));
    }
    fs::create_directories(root / "annotations");
    write_text_file(root / "annotations" / "train.json", dump_canonical(to_json(export_coco(train, cp.categories))));
    write_text_file(root / "annotations" / "val.json", dump_canonical(to_json(export_coco(val, cp.categories))));
    write_text_file(root / kManifestFile, dump_canonical(to_json(m)));
    return m;
}

// Renders every missing frame. Errors are collected per frame and the one with
// the lowest index is rethrown after all workers finish, so completed frames
// stay on disk for a later resume.
DatasetManifest generate(const CampaignContext& ctx, const Checkpoint& cp, const CampaignOptions& options) {
    const CampaignConfig& config = ctx.config();
    const fs::path& root = config.output_dir;
    const std::int64_t end = options.frame_limit
                                 ? std::clamp<std::int64_t>(*options.frame_limit, 0, config.total_images)
                                 : config.total_images;

    std::vector<std::int64_t> pending;
    for (std::int64_t i = 0; i < end; ++i)
        if (!frame_done(root, i)) pending.push_back(i);

    std::vector<std::exception_ptr> errors(pending.size());
    std::atomic<std::int64_t> done{end - static_cast<std::int64_t>(pending.size())};
    parallel_for(pending.size(), [&](std::size_t k) {
        try {
            write_frame(root, ctx.render_frame(pending[k]));
            const std::int64_t n = ++done;
            if (options.progress) options.progress(n, end);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    });
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    if (end < config.total_images) return DatasetManifest{};
    return assemble(root, config, cp);
}

Checkpoint prepare_output(const CampaignContext& ctx) {
    const CampaignConfig& config = ctx.config();
    const fs::path& root = config.output_dir;
    Checkpoint cp{config_digest(config), config.total_images, ctx.categories()};
    fs::create_directories(root);
    if (fs::exists(root / kCheckpointFile)) {
        const Checkpoint existing = read_checkpoint(root);
        if (existing.config_digest != cp.config_digest)
            throw ConfigError("config_digest", "output directory '" + root.string() +
                                                   "' holds a campaign with a different config (digest " +
                                                   existing.config_digest + ", expected " + cp.config_digest + ")");
        return existing;
    }
    for (const char* sub : {"images/train", "images/val", "ids/train", "ids/val", "labels", "scenarios"})
        fs::create_directories(root / sub);
    write_text_file(root / kConfigFile, dump_canonical(to_json(config)));
    write_text_file(root / kLibraryFile, dump_canonical(to_json(ctx.sampler().library())));
    write_text_file(root / kCheckpointFile, dump_canonical(to_json(cp)));
    return cp;
}

std::vector<std::string> scene_inputs(const fs::path& scene_path) {
    std::vector<std::string> missing;
    Json doc;
    try {
        doc = Json::parse(read_text_file(scene_path));
    } catch (const std::exception&) {
        return missing;  // reported as a parse error by load_scene
    }
    const fs::path base = scene_path.parent_path();
    auto check = [&](const Json& obj, const char* key, const std::string& what) {
        if (obj.is_object() && obj.contains(key) && obj.at(key).is_string()) {
            const fs::path p = resolve(base, obj.at(key).get<std::string>());
            if (!fs::exists(p)) missing.push_back(what + ": " + p.string());
        }
    };
    if (doc.contains("parts") && doc.at("parts").is_array())
        for (std::size_t i = 0; i < doc.at("parts").size(); ++i)
            check(doc.at("parts")[i], "mesh", "parts[" + std::to_string(i) + "].mesh");
    if (doc.contains("environment")) check(doc.at("environment"), "hdri", "environment.hdri");
    if (doc.contains("backplate")) check(doc.at("backplate"), "image", "backplate.image");
    return missing;
}

}  // namespace

std::string_view to_string(Split s) { return s == Split::Train ? "train" : "val"; }

void CampaignConfig::validate() const {
    if (total_images < 1) throw ConfigError("total_images", "must be >= 1");
    if (!(split > 0.0 && split < 1.0)) throw ConfigError("split", "train fraction must be in (0, 1)");
    if (scene.empty()) throw ConfigError("scene", "missing scene path");
    randomization.validate();
    render.validate();
    label_policy.validate();
}

CampaignConfig campaign_from_json(const Json& j, const fs::path& base_dir) {
    using namespace json_field;
    if (!j.is_object()) throw ConfigError("", "campaign config must be a JSON object");
    CampaignConfig c;
    // Scalar invariants first, so they are reported before any file lookups.
    c.total_images = integer_or(j, "total_images", "", c.total_images);
    if (c.total_images < 1) throw ConfigError("total_images", "must be >= 1");
    c.split = number_or(j, "split", "", c.split);
    if (!(c.split > 0.0 && c.split < 1.0)) throw ConfigError("split", "train fraction must be in (0, 1)");
    c.master_seed = uint64_or(j, "master_seed", "", c.master_seed);
    c.scene = resolve(base_dir, string(j, "scene", ""));
    c.render = render_settings_from_json(has(j, "render") ? j.at("render") : Json::object());
    c.render.seed = 0;
    if (has(j, "label_policy")) c.label_policy = label_policy_from_json(j.at("label_policy"));
    c.randomization = randomization_from_json(require(j, "randomization", ""), base_dir);
    if (has(j, "output_dir")) c.output_dir = resolve(base_dir, string(j, "output_dir", ""));
    c.validate();
    return c;
}

CampaignConfig load_campaign_config(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("config file '" + path.string() + "' does not exist");
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    return campaign_from_json(j, fs::absolute(path).parent_path());
}

std::vector<std::string> missing_inputs(const CampaignConfig& c) {
    std::vector<std::string> missing;
    if (!fs::exists(c.scene))
        missing.push_back("scene: " + c.scene.string());
    else
        for (std::string& m : scene_inputs(c.scene)) missing.push_back(std::move(m));
    const RandomizationConfig& r = c.randomization;
    if (!r.material_library.empty() && !fs::exists(r.material_library))
        missing.push_back("randomization.material_library: " + r.material_library.string());
    for (std::size_t i = 0; i < r.hdri_pool.size(); ++i)
        if (!fs::exists(r.hdri_pool[i]))
            missing.push_back("randomization.hdri_pool[" + std::to_string(i) + "]: " + r.hdri_pool[i].string());
    if (r.background.mode != BackgroundMode::HdriOnly && !fs::is_directory(r.background.dir))
        missing.push_back("randomization.background.dir: " + r.background.dir.string());
    if (r.distractors.mode == DistractorMode::ComplexMeshPool && !fs::is_directory(r.distractors.dir))
        missing.push_back("randomization.distractors.dir: " + r.distractors.dir.string());
    return missing;
}

Json to_json(const CampaignConfig& c) {
    return Json{{"scene", c.scene.string()},      {"randomization", to_json(c.randomization)},
                {"render", to_json(c.render)},    {"label_policy", to_json(c.label_policy)},
                {"total_images", c.total_images}, {"split", c.split},
                {"master_seed", c.master_seed}};
}

std::string config_digest(const CampaignConfig& c) { return hex64(fnv1a64(dump_canonical(to_json(c)))); }

std::uint64_t frame_seed(std::uint64_t master_seed, std::int64_t index) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(index));
}

Split frame_split(std::uint64_t master_seed, std::int64_t index, double train_fraction) {
    const auto threshold = static_cast<std::uint64_t>(std::lround(100.0 * (1.0 - train_fraction)));
    const std::uint64_t h = mix_seed(master_seed ^ mix64(kSplitStream), static_cast<std::uint64_t>(index));
    return h % 100 < threshold ? Split::Val : Split::Train;
}

std::uint64_t render_seed(std::uint64_t frame_seed) { return mix_seed(frame_seed, kRenderStream); }
std::uint64_t noise_seed(std::uint64_t frame_seed) { return mix_seed(frame_seed, kNoiseStream); }

std::string frame_stem(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(index));
    return buf;
}

Json to_json(const DatasetManifest& m) {
    Json frames = Json::array();
    for (const FrameRecord& r : m.frames)
        frames.push_back({{"index", r.index},
                          {"frame_seed", r.frame_seed},
                          {"split", to_string(r.split)},
                          {"image", r.image},
                          {"scenario_digest", r.scenario_digest}});
    return Json{{"frames", frames},
                {"config", m.config},
                {"config_digest", m.config_digest},
                {"library", {{"file", m.library_file}, {"digest", m.library_digest}}},
                {"tool_version", m.tool_version},
                {"counts", {{"train", m.train_count}, {"val", m.val_count}}}};
}

DatasetManifest manifest_from_json(const Json& j) {
    using namespace json_field;
    const std::string p = "manifest";
    DatasetManifest m;
    const Json& frames = require(j, "frames", p);
    if (!frames.is_array()) throw ConfigError(p + ".frames", "must be an array");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Json& f = frames[i];
        const std::string fp = p + ".frames[" + std::to_string(i) + "]";
        FrameRecord r;
        r.index = integer(f, "index", fp);
        r.frame_seed = require(f, "frame_seed", fp).get<std::uint64_t>();
        r.split = parse_split(string(f, "split", fp));
        r.image = string(f, "image", fp);
        r.scenario_digest = string(f, "scenario_digest", fp);
        m.frames.push_back(std::move(r));
    }
    m.config = require(j, "config", p);
    m.config_digest = string(j, "config_digest", p);
    const Json& lib = require(j, "library", p);
    m.library_file = string(lib, "file", p + ".library");
    m.library_digest = string(lib, "digest", p + ".library");
    m.tool_version = string(j, "tool_version", p);
    const Json& counts = require(j, "counts", p);
    m.train_count = static_cast<std::size_t>(integer(counts, "train", p + ".counts"));
    m.val_count = static_cast<std::size_t>(integer(counts, "val", p + ".counts"));
    return m;
}

CampaignContext::CampaignContext(CampaignConfig config)
    : config_(std::move(config)), scene_(load_scene(config_.scene)), sampler_(config_.randomization) {
    config_.validate();
    // The render resolution overrides the scene's own camera resolution, also
    // for the ROI visibility check during sampling.
    scene_.camera.resolution = config_.render.resolution;
    scene_.validate();
    categories_ = scene_.class_labels();
}

FrameOutput CampaignContext::render_frame(std::int64_t index) const {
    if (index < 0 || index >= config_.total_images)
        throw ArgumentError("frame " + std::to_string(index) + " is outside [0, " +
                            std::to_string(config_.total_images) + ")");
    FrameOutput out;
    out.record.index = index;
    out.record.frame_seed = frame_seed(config_.master_seed, index);
    out.record.split = frame_split(config_.master_seed, index, config_.split);
    out.record.image = relative_image(out.record.split, index);
    try {
        out.scenario = sampler_.sample(scene_, out.record.frame_seed);
    } catch (const ScenarioError& e) {
        throw ScenarioError(e.constraint(), "frame " + std::to_string(index) + ": " + e.what());
    }
    out.record.scenario_digest = scenario_digest(out.scenario);

    const SceneGraph bound = sampler_.apply(scene_, out.scenario);
    const Bvh bvh = build_bvh(bound);
    RenderSettings rs = config_.render;
    rs.seed = render_seed(out.record.frame_seed);
    FrameBuffers fb = trace(bound, bvh, rs);
    Image display = tonemap_display(fb.linear);
    if (out.scenario.noise_sigma > 0.0)
        display = add_sensor_noise(display, out.scenario.noise_sigma, noise_seed(out.record.frame_seed));
    out.beauty = quantize(display);
    out.ids = std::move(fb.instance_id);
    out.candidates = measure_instances(out.ids, bound);
    out.annotations = filter_annotations(out.candidates, config_.label_policy);
    return out;
}

void write_frame(const fs::path& root, const FrameOutput& f) {
    const std::string stem = frame_stem(f.record.index);
    const fs::path image = root / f.record.image;
    fs::create_directories(image.parent_path());
    fs::create_directories(ids_path(root, f.record.split, f.record.index).parent_path());
    fs::create_directories(root / "scenarios");
    fs::create_directories(root / "labels");
    write_png_atomic(image, f.beauty);
    write_ids_atomic(ids_path(root, f.record.split, f.record.index), f.ids);
    write_text_file(root / "scenarios" / (stem + ".json"), dump_canonical(to_json(f.scenario)));
    write_text_file(
        labels_path(root, f.record.index),
        dump_canonical(labels_json(f.record, f.beauty.width, f.beauty.height, f.candidates, f.annotations)));
}

DatasetManifest run_campaign(const CampaignConfig& config, const CampaignOptions& options) {
    if (config.output_dir.empty()) throw ConfigError("output_dir", "no output directory given");
    const CampaignContext ctx(config);

    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(config.total_images));
    for (std::int64_t i = 0; i < config.total_images; ++i) seeds.push_back(frame_seed(config.master_seed, i));
    std::sort(seeds.begin(), seeds.end());
    if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end())
        throw StructuralError("frame seed collision in campaign");

    const Checkpoint cp = prepare_output(ctx);
    return generate(ctx, cp, options);
}

DatasetManifest resume_campaign(const CampaignConfig& config, const CampaignOptions& options) {
    const fs::path& root = config.output_dir;
    if (!fs::exists(root / kCheckpointFile))
        throw IoError("no checkpoint in '" + root.string() + "'; nothing to resume");
    const Checkpoint cp = read_checkpoint(root);
    const std::string digest = config_digest(config);
    if (cp.config_digest != digest)
        throw ConfigError("config_digest", "supplied config (digest " + digest +
                                               ") differs from the checkpointed campaign (digest " + cp.config_digest +
                                               "); refusing to resume");
    if (fs::exists(root / kManifestFile)) {
        bool complete = true;
        for (std::int64_t i = 0; i < config.total_images && complete; ++i) complete = frame_done(root, i);
        if (complete) return manifest_from_json(read_json(root / kManifestFile));
    }
    const CampaignContext ctx(config);
    return generate(ctx, cp, options);
}

DatasetManifest resume_campaign(const fs::path& output_dir, const CampaignOptions& options) {
    CampaignConfig c = campaign_from_json(read_json(output_dir / kConfigFile), output_dir);
    c.output_dir = output_dir;
    return resume_campaign(c, options);
}

DatasetManifest relabel_dataset(const fs::path& root, const LabelPolicy& policy) {
    policy.validate();
    Checkpoint cp = read_checkpoint(root);
    CampaignConfig config = campaign_from_json(read_json(root / kConfigFile), root);
    config.output_dir = root;
    if (config_digest(config) != cp.config_digest)
        throw StructuralError("stored config does not match the checkpoint digest in '" + root.string() + "'");
    for (std::int64_t i = 0; i < config.total_images; ++i)
        if (!frame_done(root, i))
            throw StructuralError("frame " + std::to_string(i) + " is not complete; resume the campaign first");

    for (std::int64_t i = 0; i < config.total_images; ++i) {
        StoredFrame f = read_labels(labels_path(root, i));
        const IdMap ids = read_png_ids(ids_path(root, f.record.split, i));
        if (ids.width != f.width || ids.height != f.height)
            throw StructuralError(ids_path(root, f.record.split, i).string() + ": size differs from the labels record");
        const std::vector<InstanceAnnotation> candidates = remeasure_instances(ids, f.candidates);
        const std::vector<InstanceAnnotation> accepted = filter_annotations(candidates, policy);
        write_text_file(labels_path(root, i),
                        dump_canonical(labels_json(f.record, f.width, f.height, candidates, accepted)));
    }
    config.label_policy = policy;
    cp.config_digest = config_digest(config);
    write_text_file(root / kConfigFile, dump_canonical(to_json(config)));
    write_text_file(root / kCheckpointFile, dump_canonical(to_json(cp)));
    return assemble(root, config, cp);
}

DrawStats draw_statistics(const CampaignConfig& config, std::int64_t samples, int rotation_bins) {
    if (samples < 1) throw ArgumentError("--samples must be >= 1");
    if (rotation_bins < 1) throw ArgumentError("rotation bins must be >= 1");
    const CampaignContext ctx(config);
    const RandomizationConfig& r = config.randomization;
    DrawStats s;
    s.samples = static_cast<std::size_t>(samples);
    s.material_counts.assign(ctx.sampler().library().entries.size(), 0);
    s.hdri_counts.assign(r.hdri_pool.size(), 0);
    s.rotation_counts.assign(static_cast<std::size_t>(rotation_bins), 0);
    const double width = r.hdri_rotation.hi - r.hdri_rotation.lo;

    std::vector<ScenarioSample> drawn(s.samples);
    parallel_for(s.samples, [&](std::size_t i) {
        drawn[i] = ctx.sampler().sample(ctx.scene(), frame_seed(config.master_seed, static_cast<std::int64_t>(i)));
    });
    for (const ScenarioSample& x : drawn) {
        for (const PartMaterial& m : x.materials)
            if (m.library_index && *m.library_index < s.material_counts.size()) ++s.material_counts[*m.library_index];
        ++s.hdri_counts[x.hdri_index];
        const double u = width > 0.0 ? (x.hdri_rotation - r.hdri_rotation.lo) / width : 0.0;
        const auto bin = std::min<std::size_t>(s.rotation_counts.size() - 1,
                                               static_cast<std::size_t>(std::max(0.0, u * rotation_bins)));
        ++s.rotation_counts[bin];
    }
    return s;
}

namespace {

void histogram(std::string& out, const std::string& title, const std::vector<std::string>& labels,
               const std::vector<std::size_t>& counts) {
    char buf[256];
    const std::size_t peak = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    out += title + "\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const int bar = peak ? static_cast<int>(40.0 * static_cast<double>(counts[i]) / static_cast<double>(peak)) : 0;
        std::snprintf(buf, sizeof buf, "  %-28s %8zu  ", labels[i].c_str(), counts[i]);
        out += buf;
        out += std::string(static_cast<std::size_t>(bar), '#');
        out += "\n";
    }
}

}  // namespace

std::string format_stats(const DrawStats& s, const CampaignConfig& config) {
    std::string out = "samples " + std::to_string(s.samples) + "\n\n";
    std::vector<std::string> labels;
    for (const auto& p : config.randomization.hdri_pool) labels.push_back(p.filename().string());
    histogram(out, "hdri", labels, s.hdri_counts);

    labels.clear();
    char buf[64];
    const Range& rot = config.randomization.hdri_rotation;
    const double w = (rot.hi - rot.lo) / static_cast<double>(s.rotation_counts.size());
    for (std::size_t i = 0; i < s.rotation_counts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "[%.3f, %.3f)", rot.lo + w * static_cast<double>(i),
                      rot.lo + w * static_cast<double>(i + 1));
        labels.emplace_back(buf);
    }
    out += "\n";
    histogram(out, "hdri_rotation", labels, s.rotation_counts);

    std::size_t total = 0;
    for (std::size_t c : s.material_counts) total += c;
    out += "\n";
    if (total == 0) {
        out += "material (no library draws under strategy " +
               std::string(to_string(config.randomization.material_strategy)) + ")\n";
        return out;
    }
    labels.clear();
    for (std::size_t i = 0; i < s.material_counts.size(); ++i) labels.push_back("#" + std::to_string(i));
    histogram(out, "material", labels, s.material_counts);
    return out;
}

}  // namespace drgen

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "drgen/coco.hpp"
#include "drgen/json_io.hpp"
#include "drgen/labeler.hpp"
#include "drgen/randomizer.hpp"
#include "drgen/renderer.hpp"
#include "drgen/scene.hpp"

namespace drgen {

enum class Split { Train, Val };
std::string_view to_string(Split s);

struct CampaignConfig {
    std::filesystem::path scene;
    RandomizationConfig randomization;
    RenderSettings render;
    LabelPolicy label_policy;
    std::int64_t total_images = 10000;
    double split = 0.8;  // train fraction
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir;

    void validate() const;
};

/// Relative paths resolve against base_dir. `render.seed` is not read: render
/// seeds derive from the frame seed.
CampaignConfig campaign_from_json(const Json& j, const std::filesystem::path& base_dir);
CampaignConfig load_campaign_config(const std::filesystem::path& path);
/// Every input file the config refers to that does not exist (scene, meshes,
/// HDRIs, library, pool directories), one message per file.
std::vector<std::string> missing_inputs(const CampaignConfig& c);
/// Snapshot without output_dir, so datasets written to different places compare equal.
Json to_json(const CampaignConfig& c);
/// FNV-1a of the canonical snapshot.
std::string config_digest(const CampaignConfig& c);

std::uint64_t frame_seed(std::uint64_t master_seed, std::int64_t index);
/// Frame i is validation iff mix(master_seed, i) mod 100 < round(100 * (1 - train_fraction)).
Split frame_split(std::uint64_t master_seed, std::int64_t index, double train_fraction);
/// Seeds of the render and sensor-noise streams of a frame.
std::uint64_t render_seed(std::uint64_t frame_seed);
std::uint64_t noise_seed(std::uint64_t frame_seed);

/// Zero-padded frame stem, e.g. "000007".
std::string frame_stem(std::int64_t index);

struct FrameRecord {
    std::int64_t index = 0;
    std::uint64_t frame_seed = 0;
    Split split = Split::Train;
    std::string image;  // relative to the dataset root
    std::string scenario_digest;
    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct DatasetManifest {
    std::vector<FrameRecord> frames;
    Json config;  // snapshot, see to_json(CampaignConfig)
    std::string config_digest;
    std::string library_file;
    std::string library_digest;
    std::string tool_version;
    std::size_t train_count = 0;
    std::size_t val_count = 0;
};

Json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const Json& j);

/// Everything one frame contributes to a dataset.
struct FrameOutput {
    FrameRecord record;
    ScenarioSample scenario;
    Image8 beauty;
    IdMap ids;
    /// Labeled instances before policy filtering (kept for relabeling).
    std::vector<InstanceAnnotation> candidates;
    std::vector<InstanceAnnotation> annotations;
};

/// Loaded scene, sampler and category list shared by all frames of a campaign.
class CampaignContext {
public:
    explicit CampaignContext(CampaignConfig config);

    const CampaignConfig& config() const { return config_; }
    const SceneGraph& scene() const { return scene_; }
    const ScenarioSampler& sampler() const { return sampler_; }
    const std::vector<std::string>& categories() const { return categories_; }

    /// Samples, binds, renders, noises and labels frame `index`. Depends only on
    /// the config and the index. ScenarioError is rethrown with the frame index.
    FrameOutput render_frame(std::int64_t index) const;

private:
    CampaignConfig config_;
    SceneGraph scene_;
    ScenarioSampler sampler_;
    std::vector<std::string> categories_;
};

/// Writes images/, ids/, scenarios/ and labels/ entries for one frame under
/// `root`. The labels file is written last and marks the frame complete.
void write_frame(const std::filesystem::path& root, const FrameOutput& frame);

struct CampaignOptions {
    /// Stop after frames [0, limit) exist, without writing the manifest
    /// (simulates an interrupted run).
    std::optional<std::int64_t> frame_limit;
    /// Called after each completed frame with (done, total); may run on any worker.
    std::function<void(std::int64_t, std::int64_t)> progress;
};

/// Generates the dataset into config.output_dir. Refuses a directory that
/// already holds a different campaign. Returns the manifest (empty frames when
/// stopped early by frame_limit).
DatasetManifest run_campaign(const CampaignConfig& config, const CampaignOptions& options = {});

/// Completes a partially written campaign. `config` must have the digest stored
/// in the checkpoint, else ConfigError("config_digest").
DatasetManifest resume_campaign(const CampaignConfig& config, const CampaignOptions& options = {});
/// Resumes from the config snapshot stored in the dataset directory.
DatasetManifest resume_campaign(const std::filesystem::path& output_dir, const CampaignOptions& options = {});

/// Re-derives annotations from stored id maps under `policy` and rewrites the
/// COCO files, manifest and stored config. Nothing is re-rendered.
DatasetManifest relabel_dataset(const std::filesystem::path& output_dir, const LabelPolicy& policy);

/// Histograms of scenario draws over frames [0, samples) of a campaign.
struct DrawStats {
    std::vector<std::size_t> material_counts;  // by library index
    std::vector<std::size_t> hdri_counts;      // by pool index
    std::vector<std::size_t> rotation_counts;  // equal-width bins over the rotation range
    std::size_t samples = 0;
};
DrawStats draw_statistics(const CampaignConfig& config, std::int64_t samples, int rotation_bins = 16);
std::string format_stats(const DrawStats& s, const CampaignConfig& config);

}  // namespace drgen

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "drgen/json_io.hpp"
#include "drgen/material.hpp"
#include "drgen/scene.hpp"

namespace drgen {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Range&, const Range&) = default;
};

enum class BackgroundMode { RealImagePool, HdriOnly, ImagePool };
enum class DistractorMode { None, Primitive, ComplexMeshPool };

std::string_view to_string(BackgroundMode m);
std::string_view to_string(DistractorMode m);

struct BackgroundConfig {
    BackgroundMode mode = BackgroundMode::HdriOnly;
    std::filesystem::path dir;  // image pools only
    friend bool operator==(const BackgroundConfig&, const BackgroundConfig&) = default;
};

struct DistractorConfig {
    DistractorMode mode = DistractorMode::None;
    std::filesystem::path dir;  // mesh pool only
    int count_min = 0;
    int count_max = 0;
    friend bool operator==(const DistractorConfig&, const DistractorConfig&) = default;
};

inline constexpr double kMaxNoiseSigma = 0.25;
inline constexpr double kDistractorMinSize = 0.01;
inline constexpr double kDistractorMaxSize = 0.2;
/// Distractors are placed in a shell [inner, outer] x (ROI half-diagonal) around the ROI center.
inline constexpr double kShellInner = 1.2;
inline constexpr double kShellOuter = 3.0;

struct RandomizationConfig {
    MaterialStrategy material_strategy = MaterialStrategy::ComplexLibrary;
    /// Library file (JSON array); when empty the default library is generated from library_seed.
    std::filesystem::path material_library;
    std::uint64_t library_seed = 0;
    std::vector<std::filesystem::path> hdri_pool;
    Range hdri_rotation{0.0, kTwoPi};
    Range light_intensity_scale{0.3, 3.0};  // log-uniform
    Range light_color_tint{0.7, 1.3};       // per channel
    double camera_translation_jitter = 0.05;
    double camera_rotation_jitter = 5.0 * kPi / 180.0;
    std::optional<Range> noise_sigma = Range{0.0, 0.04};  // nullopt: disabled
    BackgroundConfig background;
    DistractorConfig distractors;
    int max_visibility_attempts = 100;

    /// Throws ConfigError naming the offending field (prefixed by `path`).
    void validate(const std::string& path = "randomization") const;
    friend bool operator==(const RandomizationConfig&, const RandomizationConfig&) = default;
};

/// Relative paths resolve against base_dir.
RandomizationConfig randomization_from_json(const Json& j, const std::filesystem::path& base_dir,
                                            const std::string& path = "randomization");
Json to_json(const RandomizationConfig& c);

struct PartMaterial {
    std::string part;
    MaterialSpec material;
    std::optional<std::size_t> library_index;
    friend bool operator==(const PartMaterial&, const PartMaterial&) = default;
};

struct DistractorPlacement {
    std::string kind;  // "box", "sphere", "cylinder" or "mesh"
    std::string mesh_source;
    double size = 0.0;  // largest extent in meters
    Transform transform;
    MaterialSpec material;
    friend bool operator==(const DistractorPlacement&, const DistractorPlacement&) = default;
};

struct ScenarioSample {
    std::uint64_t frame_seed = 0;
    std::vector<PartMaterial> materials;
    std::size_t hdri_index = 0;
    std::string hdri;
    double hdri_rotation = 0.0;
    double intensity_scale = 1.0;
    Rgb color_tint{1, 1, 1};
    Transform camera_pose;
    int camera_attempts = 0;
    std::optional<std::size_t> background_index;
    std::string background;
    std::vector<DistractorPlacement> distractors;
    double noise_sigma = 0.0;

    friend bool operator==(const ScenarioSample&, const ScenarioSample&) = default;
};

Json to_json(const ScenarioSample& s);
ScenarioSample scenario_from_json(const Json& j);
/// FNV-1a over the canonical JSON form.
std::string scenario_digest(const ScenarioSample& s);

/// Holds the resources a config refers to (library, pool listings, pool
/// meshes, and lazily loaded HDRIs and backplate images). Sampling is a pure
/// function of (config, scene, frame_seed) and safe to call concurrently.
class ScenarioSampler {
public:
    ScenarioSampler(RandomizationConfig config, MaterialLibrary library);
    /// Loads or generates the library named by the config.
    explicit ScenarioSampler(RandomizationConfig config);

    const RandomizationConfig& config() const { return config_; }
    const MaterialLibrary& library() const { return library_; }
    const std::vector<std::filesystem::path>& background_images() const { return backgrounds_; }
    const std::vector<std::filesystem::path>& distractor_meshes() const { return pool_paths_; }

    ScenarioSample sample(const SceneGraph& scene, std::uint64_t frame_seed) const;
    /// Binds the scenario to a copy of `scene`.
    SceneGraph apply(const SceneGraph& scene, const ScenarioSample& s) const;

private:
    std::shared_ptr<const EnvironmentMap> hdri(std::size_t index) const;
    std::shared_ptr<const Image> background(const std::string& path) const;
    std::shared_ptr<const Mesh> distractor_mesh(const DistractorPlacement& d) const;

    RandomizationConfig config_;
    MaterialLibrary library_;
    std::vector<std::filesystem::path> backgrounds_;
    std::vector<std::filesystem::path> pool_paths_;
    std::vector<std::shared_ptr<const Mesh>> pool_meshes_;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::size_t, std::shared_ptr<const EnvironmentMap>> hdri_cache_;
    mutable std::map<std::string, std::shared_ptr<const Image>> image_cache_;
};

ScenarioSample sample_scenario(const RandomizationConfig& config, const SceneGraph& scene, std::uint64_t frame_seed);
SceneGraph apply_scenario(const SceneGraph& scene, const ScenarioSample& s);

/// Files in `dir` with one of the given lower-case extensions, sorted by name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::vector<std::string>& extensions);

/// Mesh for a primitive distractor of the given kind and largest extent.
Mesh make_distractor_primitive(const std::string& kind, double size);

}  // namespace drgen

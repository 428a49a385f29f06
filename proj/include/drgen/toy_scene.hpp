#pragma once

#include <cstdint>
#include <filesystem>

#include "drgen/camera.hpp"
#include "drgen/json_io.hpp"

namespace drgen {

/// Small self-contained workspace: a plate with screw-like cylinders and a
/// clip, procedural indoor HDRIs, background images and distractor meshes.
struct ToyOptions {
    int hdri_count = 16;
    int background_count = 6;
    int texture_count = 6;
    Resolution resolution{64, 64};
    int samples_per_pixel = 4;
    std::int64_t total_images = 50;
    std::uint64_t master_seed = 7;
};

struct ToyWorkspace {
    std::filesystem::path root;
    std::filesystem::path scene;   // scene.json
    std::filesystem::path config;  // campaign.json, output into root/out
};

/// Writes (or overwrites) the workspace files under `root`. Deterministic.
ToyWorkspace write_toy_workspace(const std::filesystem::path& root, const ToyOptions& options = {});

/// The campaign config written to campaign.json, with paths relative to root.
Json toy_campaign_json(const ToyOptions& options);

}  // namespace drgen

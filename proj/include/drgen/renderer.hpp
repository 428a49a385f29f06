#pragma once

#include <cstdint>
#include <functional>

#include "drgen/bvh.hpp"
#include "drgen/camera.hpp"
#include "drgen/image.hpp"
#include "drgen/json_io.hpp"
#include "drgen/scene.hpp"

namespace drgen {

struct RenderSettings {
    Resolution resolution{1920, 1080};
    int samples_per_pixel = 64;
    int max_bounces = 6;
    int russian_roulette_start = 3;
    std::uint64_t seed = 0;

    void validate() const;
    friend bool operator==(const RenderSettings&, const RenderSettings&) = default;
};

Json to_json(const RenderSettings& s);
RenderSettings render_settings_from_json(const Json& j, const std::string& path = "render");

struct FrameBuffers {
    Image8 beauty;
    IdMap instance_id;
    /// Pre-tonemap radiance estimate.
    Image linear;
    /// Samples dropped because they evaluated to NaN or infinity.
    std::uint64_t discarded_samples = 0;
};

/// Path-traces the scene at settings.resolution (the camera's own resolution is
/// ignored). The beauty image is tonemapped without noise.
FrameBuffers trace(const SceneGraph& scene, const Bvh& bvh, const RenderSettings& settings);

/// Radiance estimate for a single pixel, averaged over `spp` samples.
Rgb render_pixel(const SceneGraph& scene, const Bvh& bvh, const RenderSettings& settings, int x, int y);

/// One primary ray through each pixel center. Backplate and misses give 0.
IdMap render_instance_ids(const SceneGraph& scene, const Bvh& bvh, Resolution resolution);

/// Camera matching `scene.camera` but rendering at `resolution`.
PinholeCamera camera_at(const PinholeCamera& camera, Resolution resolution);

/// Display-space values: exposure 1, clamp to [0,1], sRGB transfer.
Image tonemap_display(const Image& linear);
/// Rounds display-space values in [0,1] to 8 bits.
Image8 quantize(const Image& display);

/// Adds i.i.d. Gaussian(0, sigma) per pixel and channel, then clamps to [0,1].
/// sigma = 0 returns the input unchanged. Throws ArgumentError for sigma < 0.
Image add_sensor_noise(const Image& display, double sigma, std::uint64_t seed);

}  // namespace drgen

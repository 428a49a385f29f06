#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "drgen/math.hpp"

namespace drgen {

/// Floating-point RGB image, row-major, top row first.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // interleaved RGB

    Image() = default;
    Image(int w, int h, Rgb fill = {});

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    Rgb at(int x, int y) const {
        const std::size_t i =
            3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, const Rgb& c) {
        const std::size_t i =
            3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
        data[i] = static_cast<float>(c.x);
        data[i + 1] = static_cast<float>(c.y);
        data[i + 2] = static_cast<float>(c.z);
    }
    /// Nearest-texel lookup with u wrapping and v clamped, both in [0,1].
    Rgb sample_nearest(double u, double v) const;
    /// Bilinear lookup with clamped edges, u and v in [0,1].
    Rgb sample_bilinear(double u, double v) const;

    friend bool operator==(const Image&, const Image&) = default;
};

/// 8-bit RGB image.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // interleaved RGB

    friend bool operator==(const Image8&, const Image8&) = default;
};

/// Per-pixel instance identifiers; 0 is background.
struct IdMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> ids;

    IdMap() = default;
    IdMap(int w, int h) : width(w), height(h), ids(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0u) {}
    std::uint32_t at(int x, int y) const {
        return ids[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }
    std::uint32_t& at(int x, int y) {
        return ids[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }

    friend bool operator==(const IdMap&, const IdMap&) = default;
};

double srgb_encode(double linear);
double srgb_decode(double encoded);

/// Radiance HDR (RGBE) equirectangular map, linear RGB.
Image load_hdr(const std::filesystem::path& path);
void write_hdr(const std::filesystem::path& path, const Image& image);

/// PNG/JPEG photograph, decoded from sRGB into linear RGB.
Image load_photo_linear(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Image8& image);
Image8 read_png_rgb(const std::filesystem::path& path);

/// 16-bit single-channel PNG. Throws ArgumentError for ids above 65535.
void write_png_ids(const std::filesystem::path& path, const IdMap& ids);
IdMap read_png_ids(const std::filesystem::path& path);

}  // namespace drgen

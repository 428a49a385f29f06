#include "drgen/image.hpp"

#if defined(__GNUC__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-enum-enum-conversion"
#endif
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#if defined(__GNUC__)
#pragma GCC diagnostic pop
#endif

#include <algorithm>
#include <cmath>

#include "drgen/error.hpp"

namespace drgen {

Image::Image(int w, int h, Rgb fill)
    : width(w), height(h), data(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = static_cast<float>(fill.x);
        data[i + 1] = static_cast<float>(fill.y);
        data[i + 2] = static_cast<float>(fill.z);
    }
}

Rgb Image::sample_nearest(double u, double v) const {
    u -= std::floor(u);
    const int x = std::clamp(static_cast<int>(u * width), 0, width - 1);
    const int y = std::clamp(static_cast<int>(v * height), 0, height - 1);
    return at(x, y);
}

Rgb Image::sample_bilinear(double u, double v) const {
    const double fx = std::clamp(u, 0.0, 1.0) * width - 0.5;
    const double fy = std::clamp(v, 0.0, 1.0) * height - 0.5;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0, ty = fy - y0;
    auto px = [&](int x, int y) { return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1)); };
    const Rgb top = px(x0, y0) * (1 - tx) + px(x0 + 1, y0) * tx;
    const Rgb bottom = px(x0, y0 + 1) * (1 - tx) + px(x0 + 1, y0 + 1) * tx;
    return top * (1 - ty) + bottom * ty;
}

double srgb_encode(double linear) {
    if (!(linear > 0.0)) return 0.0;
    if (linear <= 0.0031308) return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
    if (!(encoded > 0.0)) return 0.0;
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

namespace {

std::string str(const std::filesystem::path& p) { return p.string(); }

void ensure_parent(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

void write_or_throw(const std::filesystem::path& path, const cv::Mat& mat) {
    ensure_parent(path);
    bool ok = false;
    try {
        ok = cv::imwrite(str(path), mat);
    } catch (const cv::Exception& e) {
        throw IoError("cannot write '" + str(path) + "': " + e.what());
    }
    if (!ok) throw IoError("cannot write '" + str(path) + "'");
}

cv::Mat read_or_throw(const std::filesystem::path& path, int flags) {
    if (!std::filesystem::exists(path)) throw IoError("missing file '" + str(path) + "'");
    cv::Mat m = cv::imread(str(path), flags);
    if (m.empty()) throw IoError("cannot decode image '" + str(path) + "'");
    return m;
}

}  // namespace

Image load_hdr(const std::filesystem::path& path) {
    cv::Mat m = read_or_throw(path, cv::IMREAD_ANYDEPTH | cv::IMREAD_COLOR);
    if (m.depth() != CV_32F) m.convertTo(m, CV_32F, 1.0 / 255.0);
    Image img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<cv::Vec3f>(y);
        for (int x = 0; x < m.cols; ++x) img.set(x, y, {row[x][2], row[x][1], row[x][0]});
    }
    return img;
}

void write_hdr(const std::filesystem::path& path, const Image& image) {
    cv::Mat m(image.height, image.width, CV_32FC3);
    for (int y = 0; y < image.height; ++y) {
        auto* row = m.ptr<cv::Vec3f>(y);
        for (int x = 0; x < image.width; ++x) {
            const Rgb c = image.at(x, y);
            row[x] = cv::Vec3f(static_cast<float>(c.z), static_cast<float>(c.y), static_cast<float>(c.x));
        }
    }
    write_or_throw(path, m);
}

Image load_photo_linear(const std::filesystem::path& path) {
    cv::Mat m = read_or_throw(path, cv::IMREAD_COLOR);
    Image img(m.cols, m.rows);
    // 256-entry decode table; inputs are 8-bit.
    std::array<double, 256> lut{};
    for (int i = 0; i < 256; ++i) lut[static_cast<size_t>(i)] = srgb_decode(i / 255.0);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < m.cols; ++x) img.set(x, y, {lut[row[x][2]], lut[row[x][1]], lut[row[x][0]]});
    }
    return img;
}

void write_png(const std::filesystem::path& path, const Image8& image) {
    cv::Mat m(image.height, image.width, CV_8UC3);
    for (int y = 0; y < image.height; ++y) {
        auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width; ++x) {
            const std::size_t i =
                3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width) + static_cast<std::size_t>(x));
            row[x] = cv::Vec3b(image.data[i + 2], image.data[i + 1], image.data[i]);
        }
    }
    write_or_throw(path, m);
}

Image8 read_png_rgb(const std::filesystem::path& path) {
    cv::Mat m = read_or_throw(path, cv::IMREAD_COLOR);
    Image8 img{m.cols, m.rows,
               std::vector<std::uint8_t>(3 * static_cast<std::size_t>(m.cols) * static_cast<std::size_t>(m.rows))};
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < m.cols; ++x) {
            const std::size_t i =
                3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(m.cols) + static_cast<std::size_t>(x));
            img.data[i] = row[x][2];
            img.data[i + 1] = row[x][1];
            img.data[i + 2] = row[x][0];
        }
    }
    return img;
}

void write_png_ids(const std::filesystem::path& path, const IdMap& ids) {
    cv::Mat m(ids.height, ids.width, CV_16UC1);
    for (int y = 0; y < ids.height; ++y) {
        auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < ids.width; ++x) {
            const std::uint32_t id = ids.at(x, y);
            if (id > 0xFFFFu)
                throw ArgumentError("instance id " + std::to_string(id) + " does not fit a 16-bit id map");
            row[x] = static_cast<std::uint16_t>(id);
        }
    }
    write_or_throw(path, m);
}

IdMap read_png_ids(const std::filesystem::path& path) {
    cv::Mat m = read_or_throw(path, cv::IMREAD_UNCHANGED);
    if (m.type() != CV_16UC1) throw IoError("'" + str(path) + "' is not a 16-bit single-channel PNG");
    IdMap ids(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < m.cols; ++x) ids.at(x, y) = row[x];
    }
    return ids;
}

}  // namespace drgen

#pragma once

#include <unistd.h>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "drgen/mesh.hpp"
#include "drgen/scene.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("drgen_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

/// Upper chi-square quantile via the Wilson-Hilferty cube approximation.
inline double chi_square_critical(double dof, double z) {
    const double a = 2.0 / (9.0 * dof);
    return dof * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}
inline constexpr double kZ999 = 3.090232;  // one-sided 99.9% normal quantile

/// One-sample Kolmogorov-Smirnov statistic of samples against U(lo, hi).
inline double ks_uniform(std::vector<double> xs, double lo, double hi) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = (xs[i] - lo) / (hi - lo);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}
/// Asymptotic KS critical value at level alpha.
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline drgen::PartInstance make_part(const std::string& name, drgen::Mesh mesh, const drgen::Vec3& at, std::uint32_t id,
                                     std::optional<std::string> label) {
    drgen::PartInstance p;
    p.name = name;
    p.mesh = std::make_shared<const drgen::Mesh>(std::move(mesh));
    p.mesh_source = "primitive:test";
    p.transform.translation = at;
    p.instance_id = id;
    p.class_label = std::move(label);
    return p;
}

}  // namespace testing

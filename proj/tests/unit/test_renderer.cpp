#include <doctest.h>

#include "drgen/bvh.hpp"
#include "drgen/error.hpp"
#include "drgen/parallel.hpp"
#include "drgen/renderer.hpp"
#include "drgen/rng.hpp"
#include "support.hpp"

using namespace drgen;

namespace {

MaterialSpec lambertian(double albedo) {
    MaterialSpec m;
    m.base_color = {albedo, albedo, albedo};
    m.metalness = 0.0;
    m.specular = 0.0;
    m.roughness = 1.0;
    return m;
}

SceneGraph furnace_scene(Resolution res) {
    SceneGraph s;
    PartInstance sphere = testing::make_part("sphere", make_uv_sphere(0.5, 48, 96), {0, 0, 0}, 1, "ball");
    sphere.material = lambertian(1.0);
    s.parts.push_back(sphere);
    s.camera.pose = look_at({0, 0, 2.2}, {0, 0, 0});
    s.camera.vertical_fov = 0.6;
    s.camera.resolution = res;
    s.environment = EnvironmentLight::constant({0.5, 0.5, 0.5});
    return s;
}

RenderSettings settings(Resolution res, int spp, std::uint64_t seed = 1) {
    RenderSettings r;
    r.resolution = res;
    r.samples_per_pixel = spp;
    r.max_bounces = 6;
    r.russian_roulette_start = 3;
    r.seed = seed;
    return r;
}

}  // namespace

TEST_SUITE("renderer") {
    TEST_CASE("furnace: every sphere pixel is 0.5 within 2% at 256 spp") {
        const Resolution res{48, 48};
        const SceneGraph s = furnace_scene(res);
        const FrameBuffers fb = trace(s, build_bvh(s), settings(res, 256));
        int sphere_pixels = 0;
        double worst = 0.0;
        for (int y = 0; y < res.height; ++y)
            for (int x = 0; x < res.width; ++x) {
                if (fb.instance_id.at(x, y) != 1) continue;
                ++sphere_pixels;
                const Rgb c = fb.linear.at(x, y);
                for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(c[ch] - 0.5) / 0.5);
            }
        CHECK(sphere_pixels > 500);
        CHECK(worst <= 0.02);
        CHECK(fb.discarded_samples == 0);
    }

    TEST_CASE("Lambertian plane of albedo 0.5 under L = 0.5 has radiance 0.25") {
        const Resolution res{32, 32};
        SceneGraph s;
        PartInstance plane = testing::make_part("plane", make_quad(2.0, 2.0), {0, 0, 0}, 1, "plane");
        plane.material = lambertian(0.5);
        s.parts.push_back(plane);
        s.camera.pose = look_at({0.3, 0.2, 1.5}, {0, 0, 0});
        s.camera.resolution = res;
        s.environment = EnvironmentLight::constant({0.5, 0.5, 0.5});
        const FrameBuffers fb = trace(s, build_bvh(s), settings(res, 256, 9));
        double worst = 0.0;
        int n = 0;
        for (int y = 0; y < res.height; ++y)
            for (int x = 0; x < res.width; ++x) {
                if (fb.instance_id.at(x, y) != 1) continue;
                ++n;
                worst = std::max(worst, std::abs(fb.linear.at(x, y).x - 0.25) / 0.25);
            }
        CHECK(n == res.width * res.height);
        CHECK(worst <= 0.02);
    }

    TEST_CASE("black environment renders black") {
        const Resolution res{16, 16};
        SceneGraph s = furnace_scene(res);
        s.environment = EnvironmentLight::constant({0, 0, 0});
        const FrameBuffers fb = trace(s, build_bvh(s), settings(res, 8));
        for (float v : fb.linear.data) CHECK(v == 0.0f);
        for (std::uint8_t v : fb.beauty.data) CHECK(v == 0);
    }

    TEST_CASE("variance falls as 1/spp: 16 vs 64 spp ratio in [3, 5]") {
        const Resolution res{48, 48};
        SceneGraph s = furnace_scene(res);
        // A peaked map gives the light-sampling technique real variance to shed.
        Image env(32, 16, {0.2, 0.2, 0.2});
        for (int x = 10; x < 14; ++x) env.set(x, 4, {6.0, 6.0, 6.0});
        s.environment = EnvironmentLight{std::make_shared<EnvironmentMap>(env)};
        const Bvh bvh = build_bvh(s);
        const FrameBuffers ref = trace(s, bvh, settings(res, 2048, 77));
        double v16 = 0.0, v64 = 0.0;
        int n = 0;
        for (int y = 0; y < res.height; ++y)
            for (int x = 0; x < res.width; ++x) n += ref.instance_id.at(x, y) == 1;
        for (std::uint64_t seed : {1ull, 2ull}) {
            const FrameBuffers a = trace(s, bvh, settings(res, 16, seed));
            const FrameBuffers b = trace(s, bvh, settings(res, 64, seed + 100));
            for (int y = 0; y < res.height; ++y)
                for (int x = 0; x < res.width; ++x) {
                    if (ref.instance_id.at(x, y) != 1) continue;
                    const double r = ref.linear.at(x, y).y;
                    v16 += std::pow(a.linear.at(x, y).y - r, 2);
                    v64 += std::pow(b.linear.at(x, y).y - r, 2);
                }
        }
        REQUIRE(n > 500);
        // The 2048-spp reference carries 1/128 of the 16-spp variance; subtract its share.
        const double ref16 = v16 / (2.0 * n), ref64 = v64 / (2.0 * n);
        const double floor = ref16 / 128.0;
        const double ratio = (ref16 - floor) / (ref64 - floor);
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }

    TEST_CASE("furnace variance: 64 spp beats 16 spp by about four") {
        // Per-pixel variance from two independent renders: E[(a - b)^2] / 2.
        const Resolution res{40, 40};
        const SceneGraph s = furnace_scene(res);
        const Bvh bvh = build_bvh(s);
        auto variance = [&](int spp, std::uint64_t seed) {
            const FrameBuffers a = trace(s, bvh, settings(res, spp, seed));
            const FrameBuffers b = trace(s, bvh, settings(res, spp, seed + 1000));
            double sum = 0.0;
            int n = 0;
            for (int y = 0; y < res.height; ++y)
                for (int x = 0; x < res.width; ++x) {
                    if (a.instance_id.at(x, y) != 1) continue;
                    sum += std::pow(a.linear.at(x, y).y - b.linear.at(x, y).y, 2) / 2.0;
                    ++n;
                }
            return sum / n;
        };
        const double v16 = variance(16, 3), v64 = variance(64, 4);
        REQUIRE(v64 > 0.0);
        CHECK(v16 / v64 >= 3.0);
        CHECK(v16 / v64 <= 5.0);
    }

    TEST_CASE("deterministic per seed and independent of the worker count") {
        const Resolution res{24, 20};
        SceneGraph s = furnace_scene(res);
        s.parts[0].material->metalness = 0.6;
        s.parts[0].material->roughness = 0.3;
        const Bvh bvh = build_bvh(s);
        force_worker_count(1);
        const FrameBuffers a = trace(s, bvh, settings(res, 8, 5));
        force_worker_count(4);
        const FrameBuffers b = trace(s, bvh, settings(res, 8, 5));
        force_worker_count(0);
        const FrameBuffers c = trace(s, bvh, settings(res, 8, 6));
        CHECK(a.linear == b.linear);
        CHECK(a.beauty == b.beauty);
        CHECK(a.instance_id == b.instance_id);
        CHECK(a.linear != c.linear);
    }

    TEST_CASE("energy bound: no pixel exceeds L_max * intensity_scale") {
        RandomStream rng(41);
        for (int trial = 0; trial < 3; ++trial) {
            const Resolution res{32, 24};
            SceneGraph s;
            for (std::uint32_t i = 0; i < 6; ++i) {
                PartInstance p = testing::make_part(
                    "p" + std::to_string(i), i % 2 ? make_box({0.1, 0.15, 0.1}) : make_uv_sphere(0.12, 12, 24),
                    {rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)}, i + 1, std::nullopt);
                p.material = random_color_material(rng);
                s.parts.push_back(p);
            }
            PartInstance floor = testing::make_part("floor", make_box({1, 0.01, 1}), {0, -0.5, 0}, 7, std::nullopt);
            floor.material = lambertian(1.0);
            s.parts.push_back(floor);
            Image env(32, 16);
            double lmax = 0.0;
            for (int y = 0; y < env.height; ++y)
                for (int x = 0; x < env.width; ++x) {
                    const double v = rng.uniform() < 0.02 ? rng.uniform(5, 20) : rng.uniform(0, 1);
                    env.set(x, y, {v, v * rng.uniform(0.5, 1), v * rng.uniform(0.5, 1)});
                    lmax = std::max(lmax, v);
                }
            const double scale = rng.uniform(0.5, 2.0);
            s.environment = EnvironmentLight{std::make_shared<EnvironmentMap>(env), rng.uniform(0, kTwoPi), scale};
            s.camera.pose = look_at({0.2, 0.6, 1.8}, {0, -0.1, 0});
            s.camera.resolution = res;
            const FrameBuffers fb = trace(s, build_bvh(s), settings(res, 64, trial));
            float worst = 0.0f;
            for (float v : fb.linear.data) worst = std::max(worst, v);
            CHECK(worst <= lmax * scale * (1.0 + 1e-6));
        }
    }

    TEST_CASE("instance ids are invariant to spp and match the id pass") {
        const Resolution res{40, 30};
        SceneGraph s = furnace_scene(res);
        s.parts.push_back(testing::make_part("box", make_box({0.2, 0.2, 0.2}), {0.5, 0.3, 0.4}, 9, "box"));
        const Bvh bvh = build_bvh(s);
        const IdMap ids = render_instance_ids(s, bvh, res);
        CHECK(trace(s, bvh, settings(res, 1)).instance_id == ids);
        CHECK(trace(s, bvh, settings(res, 16, 3)).instance_id == ids);
        int box = 0;
        for (std::uint32_t v : ids.ids) box += v == 9;
        CHECK(box > 0);
    }

    TEST_CASE("backplate is unlit, shows its image and carries id 0") {
        const Resolution res{20, 20};
        SceneGraph s;
        s.camera.pose = look_at({0, 0, 1}, {0, 0, 0});
        s.camera.resolution = res;
        s.environment = EnvironmentLight::constant({3, 3, 3});
        auto img = std::make_shared<Image>(8, 8, Rgb{0.2, 0.4, 0.6});
        s.backplate = Backplate{{Vec3{-5, 5, -1}, {5, 5, -1}, {5, -5, -1}, {-5, -5, -1}}, img, "plate"};
        const FrameBuffers fb = trace(s, build_bvh(s), settings(res, 4));
        for (std::uint32_t v : fb.instance_id.ids) CHECK(v == 0);
        for (int y = 0; y < res.height; ++y)
            for (int x = 0; x < res.width; ++x) {
                CHECK(fb.linear.at(x, y).x == doctest::Approx(0.2).epsilon(1e-6));
                CHECK(fb.linear.at(x, y).z == doctest::Approx(0.6).epsilon(1e-6));
            }
    }

    TEST_CASE("render settings validation and JSON round-trip") {
        RenderSettings r = settings({64, 48}, 8, 3);
        CHECK(render_settings_from_json(to_json(r)) == r);
        r.samples_per_pixel = 0;
        CHECK_THROWS_AS(r.validate(), ConfigError);
        r = settings({64, 48}, 8);
        r.max_bounces = 0;
        CHECK_THROWS_AS(r.validate(), ConfigError);
    }
}

TEST_SUITE("noise") {
    TEST_CASE("sigma 0 is the identity") {
        Image img(64, 64);
        RandomStream rng(1);
        for (float& v : img.data) v = static_cast<float>(rng.uniform());
        CHECK(add_sensor_noise(img, 0.0, 5) == img);
    }

    TEST_CASE("sigma 0.04 on 10^6 pixels: residual std in [0.0395, 0.0405]") {
        const Image img(1000, 1000, {0.5, 0.5, 0.5});
        const Image out = add_sensor_noise(img, 0.04, 2024);
        double sum = 0.0, sum2 = 0.0;
        const std::size_t n = img.pixel_count();
        for (std::size_t i = 0; i < n; ++i) {
            const double d = static_cast<double>(out.data[3 * i]) - 0.5;
            sum += d;
            sum2 += d * d;
        }
        const double mean = sum / static_cast<double>(n);
        const double sd = std::sqrt(sum2 / static_cast<double>(n) - mean * mean);
        CHECK(sd >= 0.0395);
        CHECK(sd <= 0.0405);
    }

    TEST_CASE("clamp keeps a white image at or below 1") {
        const Image img(200, 200, {1, 1, 1});
        for (double sigma : {0.01, 0.1, 0.25}) {
            const Image out = add_sensor_noise(img, sigma, 7);
            for (float v : out.data) {
                CHECK(v <= 1.0f);
                CHECK(v >= 0.0f);
            }
        }
    }

    TEST_CASE("noise is deterministic per seed; negative sigma is rejected") {
        const Image img(50, 50, {0.3, 0.3, 0.3});
        CHECK(add_sensor_noise(img, 0.05, 1) == add_sensor_noise(img, 0.05, 1));
        CHECK(add_sensor_noise(img, 0.05, 1) != add_sensor_noise(img, 0.05, 2));
        CHECK_THROWS_AS(add_sensor_noise(img, -0.01, 1), ArgumentError);
    }

    TEST_CASE("tonemap clamps and applies the sRGB transfer") {
        Image lin(3, 1);
        lin.set(0, 0, {0.0, 0.5, 2.0});
        lin.set(1, 0, {0.0031308, 0.18, 1.0});
        const Image d = tonemap_display(lin);
        CHECK(d.at(0, 0).x == doctest::Approx(0.0));
        CHECK(d.at(0, 0).y == doctest::Approx(srgb_encode(0.5)));
        CHECK(d.at(0, 0).z == doctest::Approx(1.0));
        CHECK(d.at(1, 0).x == doctest::Approx(0.0031308 * 12.92).epsilon(1e-5));
        CHECK(srgb_decode(srgb_encode(0.18)) == doctest::Approx(0.18));
        const Image8 q = quantize(d);
        CHECK(q.data[2] == 255);
        CHECK(q.data[0] == 0);
    }
}

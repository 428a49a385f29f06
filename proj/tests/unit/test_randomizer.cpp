#include <doctest.h>

#include <set>

#include "drgen/campaign.hpp"
#include "drgen/error.hpp"
#include "drgen/randomizer.hpp"
#include "drgen/toy_scene.hpp"
#include "support.hpp"

using namespace drgen;

namespace {

struct Toy {
    testing::TempDir dir{"toy_rand"};
    ToyWorkspace ws;
    CampaignConfig config;
    SceneGraph scene;
    Toy() {
        ws = write_toy_workspace(dir.path());
        config = load_campaign_config(ws.config);
        scene = load_scene(ws.scene);
    }
};

const Toy& toy() {
    static const Toy t;
    return t;
}

RandomizationConfig zero_variance(const RandomizationConfig& base) {
    RandomizationConfig c = base;
    c.hdri_pool.resize(1);
    c.hdri_rotation = {0, 0};
    c.light_intensity_scale = {1, 1};
    c.light_color_tint = {1, 1};
    c.camera_translation_jitter = 0;
    c.camera_rotation_jitter = 0;
    c.noise_sigma.reset();
    c.background = {};
    c.distractors = {};
    return c;
}

Aabb world_box(const PartInstance& p) { return p.world_bounds(); }

void check_invariants(const ScenarioSampler& sampler, const SceneGraph& scene, const ScenarioSample& s) {
    PinholeCamera cam = scene.camera;
    cam.pose = s.camera_pose;
    CHECK(roi_fully_visible(cam, scene.roi));
    const SceneGraph out = sampler.apply(scene, s);
    for (std::size_t i = scene.parts.size(); i < out.parts.size(); ++i)
        CHECK_FALSE(world_box(out.parts[i]).intersects(scene.roi.box));
}

}  // namespace

TEST_SUITE("randomizer") {
    TEST_CASE("zero-variance config reproduces the unperturbed scene") {
        const ScenarioSampler sampler(zero_variance(toy().config.randomization));
        const SceneGraph& scene = toy().scene;
        for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
            const ScenarioSample s = sampler.sample(scene, seed);
            CHECK(s.hdri_index == 0);
            CHECK(s.hdri_rotation == 0.0);
            CHECK(s.intensity_scale == 1.0);
            CHECK(s.color_tint == Rgb{1, 1, 1});
            CHECK(s.camera_pose == scene.camera.pose);
            CHECK(s.camera_attempts == 1);
            CHECK_FALSE(s.background_index);
            CHECK(s.distractors.empty());
            CHECK(s.noise_sigma == 0.0);

            const SceneGraph out = sampler.apply(scene, s);
            REQUIRE(out.parts.size() == scene.parts.size());
            for (std::size_t i = 0; i < scene.parts.size(); ++i) {
                CHECK(out.parts[i].name == scene.parts[i].name);
                CHECK(out.parts[i].transform == scene.parts[i].transform);
                CHECK(out.parts[i].instance_id == scene.parts[i].instance_id);
                CHECK(out.parts[i].class_label == scene.parts[i].class_label);
                CHECK(out.parts[i].material.has_value());
            }
            CHECK(out.camera == scene.camera);
            CHECK(out.environment.rotation == 0.0);
            CHECK(out.environment.intensity_scale == 1.0);
        }
    }

    TEST_CASE("same seed, same scenario; JSON round-trip preserves it") {
        const ScenarioSampler sampler(toy().config.randomization);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const ScenarioSample a = sampler.sample(toy().scene, seed);
            const ScenarioSample b = sampler.sample(toy().scene, seed);
            CHECK(a == b);
            CHECK(scenario_digest(a) == scenario_digest(b));
            const ScenarioSample back = scenario_from_json(Json::parse(dump_canonical(to_json(a))));
            CHECK(back == a);
            check_invariants(sampler, toy().scene, a);
        }
    }

    TEST_CASE("huge camera jitter with one attempt fails in >90% of 1000 seeds, as the oracle predicts") {
        RandomizationConfig c = toy().config.randomization;
        const SceneGraph& scene = toy().scene;
        const double roi_distance = length(scene.roi.box.center() - scene.camera.pose.translation);
        c.camera_translation_jitter = 101.0 * roi_distance;
        c.max_visibility_attempts = 1;
        c.distractors = {};  // one attempt would also starve distractor placement
        const ScenarioSampler sampler(c);
        int errors = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            try {
                check_invariants(sampler, scene, sampler.sample(scene, seed));
            } catch (const ScenarioError& e) {
                CHECK(e.constraint() == "roi_visibility");
                ++errors;
            }
        }
        // Independent Monte Carlo estimate of the acceptance probability of one jittered pose.
        RandomStream rng(555);
        const double tj = c.camera_translation_jitter, rj = c.camera_rotation_jitter;
        int accepted = 0;
        const int trials = 20000;
        for (int i = 0; i < trials; ++i) {
            PinholeCamera cam = scene.camera;
            cam.pose.translation += Vec3{rng.uniform(-tj, tj), rng.uniform(-tj, tj), rng.uniform(-tj, tj)};
            const Quat q = Quat::from_axis_angle({1, 0, 0}, rng.uniform(-rj, rj)) *
                           Quat::from_axis_angle({0, 1, 0}, rng.uniform(-rj, rj)) *
                           Quat::from_axis_angle({0, 0, 1}, rng.uniform(-rj, rj));
            cam.pose.rotation = cam.pose.rotation * q;
            accepted += roi_fully_visible(cam, scene.roi);
        }
        const double p = static_cast<double>(accepted) / trials;
        CHECK(p < 0.05);
        CHECK(errors > 900);
        const double expected = 1000.0 * (1.0 - p);
        CHECK(std::abs(errors - expected) <= 4.0 * std::sqrt(1000.0 * p * (1.0 - p)) + 3.0);
    }

    TEST_CASE("HDRI rotation is KS-uniform over 10,000 draws") {
        const ScenarioSampler sampler(toy().config.randomization);
        std::vector<double> angles;
        for (std::uint64_t i = 0; i < 10000; ++i)
            angles.push_back(sampler.sample(toy().scene, frame_seed(3, static_cast<std::int64_t>(i))).hdri_rotation);
        for (double a : angles) {
            CHECK(a >= 0.0);
            CHECK(a < kTwoPi);
        }
        CHECK(testing::ks_uniform(angles, 0.0, kTwoPi) < testing::ks_critical(angles.size(), 0.001));
    }

    TEST_CASE("HDRI pool selection over 16,000 draws stays within the binomial bound") {
        const ScenarioSampler sampler(toy().config.randomization);
        REQUIRE(sampler.config().hdri_pool.size() == 16);
        std::vector<int> counts(16, 0);
        for (std::int64_t i = 0; i < 16000; ++i) {
            const ScenarioSample s = sampler.sample(toy().scene, frame_seed(11, i));
            ++counts[s.hdri_index];
            if (i % 97 == 0) check_invariants(sampler, toy().scene, s);
        }
        const double bound = 4.0 * std::sqrt(16000.0 * (1.0 / 16.0) * (15.0 / 16.0));
        for (int c : counts) CHECK(std::abs(c - 1000.0) <= bound);
    }

    TEST_CASE("different frame seeds give different scenarios over 10,000 pairs") {
        const ScenarioSampler sampler(toy().config.randomization);
        int collisions = 0;
        for (std::int64_t i = 0; i < 10000; ++i) {
            const ScenarioSample a = sampler.sample(toy().scene, frame_seed(21, 2 * i));
            const ScenarioSample b = sampler.sample(toy().scene, frame_seed(21, 2 * i + 1));
            collisions +=
                a.materials == b.materials && a.hdri_rotation == b.hdri_rotation && a.camera_pose == b.camera_pose;
        }
        CHECK(collisions == 0);
    }

    TEST_CASE("distractors: counts, unlabeled, outside the ROI, labeled set preserved") {
        RandomizationConfig c = toy().config.randomization;
        c.distractors.count_min = 3;
        c.distractors.count_max = 3;
        const ScenarioSampler sampler(c);
        const SceneGraph& scene = toy().scene;
        std::set<std::string> kinds;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const ScenarioSample s = sampler.sample(scene, seed);
            REQUIRE(s.distractors.size() == 3);
            const SceneGraph out = sampler.apply(scene, s);
            REQUIRE(out.parts.size() == scene.parts.size() + 3);
            for (std::size_t i = scene.parts.size(); i < out.parts.size(); ++i) {
                CHECK_FALSE(out.parts[i].labeled());
                CHECK_FALSE(out.parts[i].world_bounds().intersects(scene.roi.box));
                CHECK(out.parts[i].material.has_value());
                CHECK_FALSE(out.parts[i].material->texture.has_value());
            }
            for (const DistractorPlacement& d : s.distractors) {
                CHECK(d.size >= kDistractorMinSize);
                CHECK(d.size <= kDistractorMaxSize);
                kinds.insert(d.kind);
            }
            CHECK(out.class_labels() == scene.class_labels());
            std::set<std::uint32_t> ids;
            for (const PartInstance& p : out.parts) CHECK(ids.insert(p.instance_id).second);
            check_invariants(sampler, scene, s);
        }
        CHECK(kinds == std::set<std::string>{"box", "cylinder", "sphere"});
    }

    TEST_CASE("complex mesh pool distractors are scaled to their drawn size") {
        RandomizationConfig c = toy().config.randomization;
        c.distractors = {DistractorMode::ComplexMeshPool, toy().dir / "distractor_meshes", 2, 4};
        const ScenarioSampler sampler(c);
        CHECK(sampler.distractor_meshes().size() == 4);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const ScenarioSample s = sampler.sample(toy().scene, seed);
            const SceneGraph out = sampler.apply(toy().scene, s);
            for (std::size_t k = 0; k < s.distractors.size(); ++k) {
                const PartInstance& p = out.parts[toy().scene.parts.size() + k];
                const double extent = max_component(p.mesh->bounds().extent()) * p.transform.scale;
                CHECK(extent == doctest::Approx(s.distractors[k].size).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("background modes pick from the pool and bind the backplate image") {
        RandomizationConfig c = toy().config.randomization;
        for (BackgroundMode m : {BackgroundMode::RealImagePool, BackgroundMode::ImagePool}) {
            c.background = {m, toy().dir / (m == BackgroundMode::RealImagePool ? "backgrounds" : "textures")};
            const ScenarioSampler sampler(c);
            std::set<std::size_t> used;
            for (std::uint64_t seed = 0; seed < 60; ++seed) {
                const ScenarioSample s = sampler.sample(toy().scene, seed);
                REQUIRE(s.background_index);
                used.insert(*s.background_index);
                const SceneGraph out = sampler.apply(toy().scene, s);
                REQUIRE(out.backplate);
                CHECK(out.backplate->image != nullptr);
            }
            CHECK(used.size() == 6);
        }
    }

    TEST_CASE("configuration errors") {
        RandomizationConfig c = toy().config.randomization;
        c.hdri_pool.clear();
        CHECK_THROWS_AS(c.validate(), ConfigError);

        testing::TempDir empty("empty_pool");
        c = toy().config.randomization;
        c.distractors = {DistractorMode::ComplexMeshPool, empty.path(), 1, 2};
        CHECK_THROWS_AS(ScenarioSampler{c}, ConfigError);

        c = toy().config.randomization;
        c.noise_sigma = Range{0.0, 0.3};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = toy().config.randomization;
        c.light_intensity_scale = {0.0, 1.0};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = toy().config.randomization;
        c.max_visibility_attempts = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }

    TEST_CASE("randomization JSON round-trips") {
        const RandomizationConfig& c = toy().config.randomization;
        CHECK(randomization_from_json(to_json(c), toy().dir.path()) == c);
    }
}

#include <doctest.h>

#include "drgen/brdf.hpp"
#include "drgen/environment.hpp"
#include "drgen/error.hpp"
#include "drgen/image.hpp"
#include "drgen/rng.hpp"
#include "support.hpp"

using namespace drgen;

namespace {

Vec3 uniform_hemisphere(RandomStream& rng) {
    const double z = rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * rng.uniform();
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Vec3 uniform_sphere(RandomStream& rng) {
    const double z = 1.0 - 2.0 * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * rng.uniform();
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Brdf random_brdf(RandomStream& rng) {
    MaterialSpec m;
    m.metalness = rng.uniform();
    m.roughness = rng.uniform(kMinRoughness, 1.0);
    m.specular = rng.uniform();
    const Rgb base{rng.uniform(), rng.uniform(), rng.uniform()};
    return Brdf::from(m, base);
}

bool near_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-12});
}

}  // namespace

TEST_SUITE("brdf") {
    TEST_CASE("reciprocity over random materials and directions") {
        RandomStream rng(11);
        for (int i = 0; i < 2000; ++i) {
            const Brdf b = random_brdf(rng);
            const Vec3 wo = uniform_hemisphere(rng), wi = uniform_hemisphere(rng);
            const Rgb f1 = b.eval(wo, wi), f2 = b.eval(wi, wo);
            for (int c = 0; c < 3; ++c) CHECK(near_rel(f1[c], f2[c], 1e-9));
        }
    }

    TEST_CASE("specular = 0 dielectric is Lambertian") {
        MaterialSpec m;
        m.metalness = 0.0;
        m.specular = 0.0;
        m.roughness = 0.4;
        const Brdf b = Brdf::from(m, {0.3, 0.6, 0.9});
        RandomStream rng(2);
        for (int i = 0; i < 200; ++i) {
            const Rgb f = b.eval(uniform_hemisphere(rng), uniform_hemisphere(rng));
            CHECK(f.x == doctest::Approx(0.3 * kInvPi).epsilon(1e-12));
            CHECK(f.y == doctest::Approx(0.6 * kInvPi).epsilon(1e-12));
            CHECK(f.z == doctest::Approx(0.9 * kInvPi).epsilon(1e-12));
        }
    }

    TEST_CASE("directional albedo never exceeds one (uniform hemisphere estimate)") {
        RandomStream rng(5);
        const double cosines[] = {1.0, 0.7, 0.3, 0.05};
        for (int m = 0; m < 30; ++m) {
            Brdf b = random_brdf(rng);
            b.base = {1, 1, 1};  // worst case
            for (double c : cosines) {
                const Vec3 wo{std::sqrt(1 - c * c), 0, c};
                const int n = 40000;
                double sum = 0.0, sum2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    const Vec3 wi = uniform_hemisphere(rng);
                    const double v = max_component(b.eval(wo, wi)) * wi.z * kTwoPi;
                    sum += v;
                    sum2 += v * v;
                }
                const double mean = sum / n;
                const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n);
                CHECK(mean <= 1.0 + 4.0 * se + 1e-3);
            }
        }
    }

    TEST_CASE("sample() agrees with eval() and pdf(), and pdf integrates to at most one") {
        RandomStream rng(8);
        for (int m = 0; m < 20; ++m) {
            Brdf b = random_brdf(rng);
            const Vec3 wo = normalize(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.05, 1)});
            for (int i = 0; i < 500; ++i) {
                const Brdf::Sample s = b.sample(wo, rng.uniform(), rng.uniform(), rng.uniform());
                if (s.pdf <= 0.0) continue;
                CHECK(s.wi.z > 0.0);
                CHECK(near_rel(s.pdf, b.pdf(wo, s.wi), 1e-6));
                const Rgb f = b.eval(wo, s.wi);
                for (int c = 0; c < 3; ++c) CHECK(near_rel(s.f[c], f[c], 1e-6));
            }
            // Uniform estimates of a sharp lobe are too noisy; check the integral on wide lobes.
            b.alpha = std::max(b.alpha, 0.2);
            const int n = 200000;
            double integral = 0.0;
            for (int i = 0; i < n; ++i) integral += b.pdf(wo, uniform_hemisphere(rng)) * kTwoPi;
            CHECK(integral / n <= 1.02);
        }
    }

    TEST_CASE("importance-sampled and uniform albedo estimates agree") {
        RandomStream rng(21);
        for (int m = 0; m < 10; ++m) {
            Brdf b = random_brdf(rng);
            b.alpha = std::max(b.alpha, 0.2);  // keep the uniform estimator's variance manageable
            const Vec3 wo = normalize(Vec3{0.4, 0.1, 0.8});
            const int n = 100000;
            double is = 0.0, un = 0.0;
            for (int i = 0; i < n; ++i) {
                const Brdf::Sample s = b.sample(wo, rng.uniform(), rng.uniform(), rng.uniform());
                if (s.pdf > 0.0) is += luminance(s.f) * s.wi.z / s.pdf;
                const Vec3 wi = uniform_hemisphere(rng);
                un += luminance(b.eval(wo, wi)) * wi.z * kTwoPi;
            }
            CHECK(is / n == doctest::Approx(un / n).epsilon(0.03));
        }
    }

    TEST_CASE("GGX D is normalized: integral of D(h) cos(h) over the hemisphere is one") {
        RandomStream rng(4);
        for (double alpha : {0.05, 0.2, 0.5, 1.0}) {
            const int n = 400000;
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                const Vec3 h = uniform_hemisphere(rng);
                sum += ggx_d(alpha, h) * h.z * kTwoPi;
            }
            CHECK(sum / n == doctest::Approx(1.0).epsilon(alpha < 0.1 ? 0.08 : 0.02));
        }
    }
}

TEST_SUITE("environment") {
    TEST_CASE("alias table reproduces its distribution") {
        const std::vector<double> w{1, 2, 3, 4, 0, 10};
        const AliasTable t(w);
        CHECK(t.size() == 6);
        CHECK(t.probability(4) == 0.0);
        CHECK(t.probability(5) == doctest::Approx(0.5));
        RandomStream rng(17);
        std::vector<double> counts(6, 0.0);
        const int n = 200000;
        for (int i = 0; i < n; ++i) counts[t.sample(rng.uniform(), rng.uniform())] += 1;
        CHECK(counts[4] == 0.0);
        double chi = 0.0;
        for (int i = 0; i < 6; ++i) {
            if (w[i] == 0) continue;
            const double e = n * w[i] / 20.0;
            chi += (counts[i] - e) * (counts[i] - e) / e;
        }
        CHECK(chi < testing::chi_square_critical(4, testing::kZ999));
        CHECK(AliasTable(std::vector<double>{0, 0, 0}).empty());
    }

    TEST_CASE("environment pdf matches sample() and integrates to one") {
        Image img(32, 16, {0.1, 0.1, 0.1});
        img.set(5, 4, {200, 180, 150});  // a sun
        img.set(20, 10, {5, 5, 5});
        const EnvironmentMap map(img);
        EnvironmentLight light{std::make_shared<EnvironmentMap>(map), 0.7, 2.0, {1, 0.9, 0.8}};
        RandomStream rng(23);
        for (int i = 0; i < 2000; ++i) {
            const DirectionSample s = light.sample(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
            REQUIRE(s.pdf > 0.0);
            CHECK(length(s.direction) == doctest::Approx(1.0));
            CHECK(near_rel(s.pdf, light.pdf(s.direction), 1e-6));
        }
        const int n = 400000;
        double integral = 0.0;
        for (int i = 0; i < n; ++i) integral += light.pdf(uniform_sphere(rng)) * 4.0 * kPi;
        CHECK(integral / n == doctest::Approx(1.0).epsilon(0.02));
    }

    TEST_CASE("sampled directions follow radiance: the sun gets its share") {
        Image img(16, 8, {1, 1, 1});
        img.set(3, 2, {1000, 1000, 1000});
        const EnvironmentMap map(img);
        RandomStream rng(31);
        int hits = 0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const DirectionSample s = map.sample(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
            hits += map.lookup(s.direction).x > 500;
        }
        CHECK(hits > n * 0.9);
    }

    TEST_CASE("constant environment: normalized pdf and the floor sampling rate") {
        const auto map = EnvironmentMap::constant({0.5, 0.5, 0.5});
        RandomStream rng(3);
        const int n = 200000;
        double integral = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec3 d = uniform_sphere(rng);
            CHECK(map->lookup(d).x == doctest::Approx(0.5));
            integral += map->pdf(d) * 4.0 * kPi;
        }
        CHECK(integral / n == doctest::Approx(1.0).epsilon(0.02));
        CHECK(map->light_sample_rate() == doctest::Approx(kMinLightSampleRate));
    }

    TEST_CASE("light sampling rate stays within [floor, 1] and grows with peakiness") {
        Image flat(16, 8, {1, 1, 1});
        Image peaked = flat;
        peaked.set(4, 3, {5000, 5000, 5000});
        const EnvironmentMap a(flat), b(peaked);
        CHECK(a.light_sample_rate() >= kMinLightSampleRate);
        CHECK(b.light_sample_rate() <= 1.0);
        CHECK(b.light_sample_rate() > 0.5);
        const EnvironmentMap black(Image(8, 4, {0, 0, 0}));
        CHECK(black.sample(0.3, 0.3, 0.3, 0.3).pdf == 0.0);
    }

    TEST_CASE("HDR round-trip within RGBE precision") {
        testing::TempDir dir("hdr");
        Image img(24, 12);
        RandomStream rng(19);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                img.set(x, y, {rng.log_uniform(1e-3, 1e3), rng.uniform(0.01, 1), rng.uniform(1, 50)});
        write_hdr(dir / "m.hdr", img);
        const Image back = load_hdr(dir / "m.hdr");
        REQUIRE(back.width == img.width);
        REQUIRE(back.height == img.height);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                const Rgb a = img.at(x, y), b = back.at(x, y);
                const double m = max_component(a);
                for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) <= m / 128.0);
            }
        CHECK_THROWS_AS(load_hdr(dir / "missing.hdr"), IoError);
    }

    TEST_CASE("environment light validation") {
        EnvironmentLight l = EnvironmentLight::constant({1, 1, 1});
        CHECK_NOTHROW(l.validate());
        l.intensity_scale = -1;
        CHECK_THROWS_AS(l.validate(), ConfigError);
    }
}

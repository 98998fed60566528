#include <doctest.h>

#include <cmath>

#include "remixsig/geometry.hpp"
#include "remixsig/rng.hpp"

using namespace remixsig;

TEST_CASE("vector algebra basics") {
    Vec3 a{1, 2, 3}, b{-4, 0.5, 2};
    CHECK(dot(a, b) == doctest::Approx(-4 + 1 + 6));
    Vec3 c = cross(a, b);
    CHECK(dot(c, a) == doctest::Approx(0.0));
    CHECK(dot(c, b) == doctest::Approx(0.0));
    CHECK(normalized(a).norm() == doctest::Approx(1.0));
    CHECK(normalized(Vec3{}) == Vec3{});
    CHECK((a - a).norm() == 0.0);
    CHECK(a[0] == 1.0);
    CHECK(a[2] == 3.0);
}

TEST_CASE("Mat3 defaults to the identity") {
    Mat3 m;
    Vec3 v{0.3, -1.5, 2.0};
    CHECK(m.apply(v) == v);
    CHECK(m.orthonormality_defect() == doctest::Approx(0.0));
}

TEST_CASE("axis_angle rotations are orthonormal and compose") {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        Vec3 axis = rng.unit_vector();
        double angle = rng.uniform(-3.0, 3.0);
        Mat3 r = Mat3::axis_angle(axis, angle);
        CHECK(r.orthonormality_defect() < 1e-12);
        // rotation preserves lengths and the axis itself
        Vec3 v = rng.unit_vector() * rng.uniform(0.1, 5.0);
        CHECK(r.apply(v).norm() == doctest::Approx(v.norm()));
        CHECK((r.apply(axis) - axis).norm() < 1e-12);
        // inverse = transpose
        Mat3 rt = r.transpose();
        CHECK((rt.apply(r.apply(v)) - v).norm() < 1e-12);
    }
}

TEST_CASE("axis_angle quarter turn about z") {
    Mat3 r = Mat3::axis_angle({0, 0, 1}, M_PI / 2);
    Vec3 v = r.apply({1, 0, 0});
    CHECK(v.x == doctest::Approx(0.0));
    CHECK(v.y == doctest::Approx(1.0));
    CHECK(v.z == doctest::Approx(0.0));
}

TEST_CASE("rng determinism and ranges") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = r.uniform01_pos();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        std::int64_t k = r.uniform_int(-3, 5);
        CHECK(k >= -3);
        CHECK(k <= 5);
        CHECK(std::abs(r.unit_vector().norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("negative binomial has roughly the requested mean") {
    Rng r(99);
    double sum = 0.0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) sum += double(r.negative_binomial(3, 10.0));
    // sd of the sample mean is sqrt((10 + 100/3)/20000) ~ 0.047
    CHECK(sum / trials == doctest::Approx(10.0).epsilon(0.02));
    CHECK(r.negative_binomial(3, 0.0) == 0);
}

TEST_CASE("fnv1a and mix_seed are stable") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a("abc") != fnv1a("acb"));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(42, 0) == mix_seed(42, 0));
}

#include <doctest.h>

#include "cplab/segments.hpp"
#include "cplab/simulation.hpp"
#include "cplab/stats.hpp"
#include "test_support.hpp"

using namespace cplab;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("gen_errors: zero sigma yields the zero vector") {
    const auto eps = gen_errors(16, NoiseSpec{NoiseKind::gaussian, 0.0, 5}, 7);
    CHECK(eps.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gen_errors: deterministic given the seed") {
    const NoiseSpec noise{NoiseKind::gaussian, 1.0, 5};
    const auto a = gen_errors(64, noise, 123);
    const auto b = gen_errors(64, noise, 123);
    CHECK(testing::bits_equal(a, b));
    const auto c = gen_errors(64, noise, 124);
    CHECK_FALSE(testing::bits_equal(a, c));
}

TEST_CASE("gen_errors: law of large numbers at n = 1e5") {
    const long n = 100000;
    for (const NoiseKind kind : {NoiseKind::gaussian, NoiseKind::laplace, NoiseKind::student_t}) {
        const auto eps = gen_errors(n, NoiseSpec{kind, 1.0, 5}, 2024);
        const double mean = eps.mean();
        const double var = (eps.array() - mean).square().sum() / static_cast<double>(n - 1);
        CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
        CHECK(var == doctest::Approx(1.0).epsilon(0.10));
    }
}

TEST_CASE("gen_errors: student_t with df <= 2 is rejected") {
    CHECK_THROWS_AS(gen_errors(5, NoiseSpec{NoiseKind::student_t, 1.0, 2}, 1), ConfigError);
}

TEST_CASE("simulate: noiseless sample is exactly piecewise") {
    TrueModel model;
    model.phis = {vec2(1.0, 0.0), vec2(-1.0, 2.0)};
    model.changepoints = {32};
    model.u = 0.75;

    DesignSpec design;
    design.p = 2;
    design.n = 64;
    const auto data = simulate(model, design, NoiseSpec{NoiseKind::gaussian, 0.0, 5}, 5);
    for (long i = 0; i < 64; ++i) {
        const double expect = data.x.row(i).dot(model.phis[i < 32 ? 0 : 1]);
        CHECK(data.y[i] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("simulate: K=0 is a plain linear model and reruns identically") {
    TrueModel model;
    model.phis = {vec2(0.5, -0.5)};
    DesignSpec design;
    design.p = 2;
    design.n = 50;
    const NoiseSpec noise{NoiseKind::gaussian, 0.3, 5};
    const auto a = simulate(model, design, noise, 99);
    const auto b = simulate(model, design, noise, 99);
    CHECK(testing::bits_equal(a.x, b.x));
    CHECK(testing::bits_equal(a.y, b.y));
    const Eigen::VectorXd residual = a.y - a.x * model.phis[0];
    CHECK(residual.cwiseAbs().maxCoeff() < 0.3 * 6.0); // noise only
}

TEST_CASE("simulate: rejects coefficient length mismatch") {
    TrueModel model;
    model.phis = {Eigen::VectorXd::Ones(3)};
    DesignSpec design;
    design.p = 2;
    design.n = 30;
    CHECK_THROWS_AS(simulate(model, design, NoiseSpec{}, 1), ShapeError);
}

TEST_CASE("two-segment spec: exact fourth root at n = 10000") {
    TwoSegmentSpec spec;
    spec.n = 10000;
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    const auto phi2 = spec.resolved_phi2();
    CHECK(phi2[0] == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(phi2[1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("two-segment spec: block sizes at n = 4096, u = 0.8, v = 0.2") {
    TwoSegmentSpec spec;
    spec.n = 4096;
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    CHECK(spec.n1() == 777); // ceil(2^9.6)
    CHECK(spec.n2() == 5);   // floor(2^2.4)
}

TEST_CASE("two-segment spec: block sizes respect the rate bounds") {
    TwoSegmentSpec spec;
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    for (long n : {64L, 100L, 1024L, 4096L, 16384L, 100000L}) {
        spec.n = n;
        const double nd = static_cast<double>(n);
        CHECK(static_cast<double>(spec.n1()) >= std::pow(nd, spec.u) - 1e-9);
        CHECK(static_cast<double>(spec.n2()) <= std::pow(nd, spec.v) + 1e-9);
    }
}

TEST_CASE("make_two_segment: null drift gives one homogeneous model") {
    TwoSegmentSpec spec;
    spec.n = 256;
    spec.phi1 = vec2(1.0, -1.0);
    spec.phi3 = vec2(0.0, 0.0);
    DesignSpec design;
    design.p = 2;
    const auto sample = make_two_segment(spec, design, NoiseSpec{NoiseKind::gaussian, 0.0, 5}, 3);
    CHECK(testing::bits_equal(sample.phi2, spec.phi1));
    for (long i = 0; i < sample.data.n(); ++i)
        CHECK(sample.data.y[i] ==
              doctest::Approx(sample.data.x.row(i).dot(spec.phi1)).epsilon(1e-14));
}

TEST_CASE("make_two_segment: fixed alternative requires fixed_phi2") {
    TwoSegmentSpec spec;
    spec.n = 256;
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    spec.alternative = AlternativeKind::fixed;
    DesignSpec design;
    design.p = 2;
    CHECK_THROWS_AS(make_two_segment(spec, design, NoiseSpec{}, 1), ConfigError);
    spec.fixed_phi2 = vec2(2.0, 1.0);
    const auto sample = make_two_segment(spec, design, NoiseSpec{}, 1);
    CHECK(testing::bits_equal(sample.phi2, *spec.fixed_phi2));
    CHECK(sample.data.n() == sample.n1 + sample.n2);
}

TEST_CASE("make_two_segment: spec validation rejects bad rate parameters") {
    TwoSegmentSpec spec;
    spec.n = 256;
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    spec.v = 0.3; // >= 1/4
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.v = 0.2;
    spec.delta = 0.3; // outside (0, u - 3v) = (0, 0.2)
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.delta = 0.05;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("designs: normalized max row norm shrinks with n") {
    // median over 20 seeds of n^{-1} max_i x_i'x_i, for n in {2^8, 2^10, 2^12}
    std::vector<double> medians;
    for (long n : {256L, 1024L, 4096L}) {
        std::vector<double> vals;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            DesignSpec design;
            design.p = 2;
            design.n = n;
            Dataset data;
            data.x = gen_design(design, derive_seed(1234, {seed}));
            data.y = Eigen::VectorXd::Zero(n);
            vals.push_back(assumption_diagnostics(data, {}).max_row_norm_over_n);
        }
        medians.push_back(median(vals));
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
}

TEST_CASE("designs: bounded_uniform stays within its support") {
    DesignSpec design;
    design.kind = DesignKind::bounded_uniform;
    design.p = 3;
    design.n = 500;
    const auto x = gen_design(design, 9);
    CHECK(x.cwiseAbs().maxCoeff() <= std::sqrt(3.0));
    // unit variance target
    CHECK(x.array().square().mean() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("designs: fixed matrix payload is passed through") {
    SplitMix64 rng(14);
    DesignSpec design;
    design.kind = DesignKind::fixed_matrix;
    design.fixed = testing::random_matrix(rng, 8, 2);
    CHECK(testing::bits_equal(gen_design(design, 1), *design.fixed));
    CHECK(testing::bits_equal(gen_design(design, 2), *design.fixed)); // seed is irrelevant

    design.fixed.reset();
    CHECK_THROWS_AS(gen_design(design, 1), ConfigError);

    // a fixed design must supply exactly n1 + n2 rows for the two-segment model
    TwoSegmentSpec spec;
    spec.n = 256; // n1 = 85, n2 = 3
    spec.phi1 = vec2(1.0, 0.0);
    spec.phi3 = vec2(1.0, 1.0);
    design.fixed = testing::random_matrix(rng, 10, 2);
    CHECK_THROWS_AS(make_two_segment(spec, design, NoiseSpec{}, 1), ShapeError);
    design.fixed = testing::random_matrix(rng, spec.n1() + spec.n2(), 2);
    const auto sample = make_two_segment(spec, design, NoiseSpec{}, 1);
    CHECK(testing::bits_equal(sample.data.x, *design.fixed));
}

TEST_CASE("power helpers snap representable powers") {
    CHECK(power_ceil(4096, 0.8) == 777);
    CHECK(power_floor(4096, 0.2) == 5);
    CHECK(power_ceil(10000, 0.5) == 100); // exactly 100, no ceil drift
    CHECK(power_floor(10000, 0.5) == 100);
    CHECK(power_ceil(1024, 1.0) == 1024);
}

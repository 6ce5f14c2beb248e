#include <doctest.h>

#include <cmath>

#include "masi/generator_algebra.hpp"

using namespace masi;

namespace {

double rel_dev(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace

TEST_CASE("sharp transform") {
    SUBCASE("power exponent flips") {
        const auto hs = sharp(builtin_power(0.3));
        CHECK(hs(2.0) == doctest::Approx(1.62450479271247104).epsilon(1e-14));  // 2^0.7
    }
    SUBCASE("arithmetic mean maps to harmonic mean") {
        const auto hs = sharp(builtin_bridge(0.0));  // (1+t)/2
        CHECK(hs(3.0) == doctest::Approx(1.5).epsilon(1e-14));
    }
    SUBCASE("involution") {
        const auto h = builtin_power(0.7);
        const auto twice = sharp(sharp(h));
        for (double t : sample_grid()) {
            CHECK(rel_dev(twice(t), h(t)) < 1e-12);
        }
    }
    SUBCASE("vanishing h is a domain error") {
        const GeneratorFunction touching_zero([](double t) { return t - 1.0; }, "t-1",
                                              std::nullopt, std::nullopt, false, false);
        CHECK_THROWS_AS(sharp(touching_zero), masi::domain_error);
    }
}

TEST_CASE("star transform") {
    SUBCASE("(1+t)/2 is symmetric") {
        const auto h = builtin_bridge(0.0);
        const auto hs = star(h);
        for (double t : {0.25, 1.0, 3.0, 40.0}) {
            CHECK(rel_dev(hs(t), h(t)) < 1e-14);
        }
    }
    SUBCASE("star of the near-identity is the constant") {
        // star(t -> t) = 1; probe through a power close to 1 analytically:
        const GeneratorFunction ident([](double t) { return t; }, "t");
        const auto s = star(ident);
        CHECK(s(0.3) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s(7.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("involution") {
        const auto h = builtin_exotic();
        const auto twice = star(star(h));
        for (double t : sample_grid()) {
            CHECK(rel_dev(twice(t), h(t)) < 1e-12);
        }
    }
}

TEST_CASE("tilde transform") {
    SUBCASE("powers are tilde-invariant") {
        const auto h = builtin_power(0.4);
        const auto ht = tilde(h);
        for (double t : sample_grid()) {
            CHECK(rel_dev(ht(t), h(t)) < 1e-12);
        }
    }
    SUBCASE("tilde of (1+t)/2") {
        const auto ht = tilde(builtin_bridge(0.0));
        CHECK(ht(3.0) == doctest::Approx(1.5).epsilon(1e-14));  // 2t/(1+t) at 3
    }
    SUBCASE("involution") {
        const auto h = builtin_bridge(0.25);
        const auto twice = tilde(tilde(h));
        for (double t : sample_grid()) {
            CHECK(rel_dev(twice(t), h(t)) < 1e-12);
        }
    }
}

TEST_CASE("derivative_at_one") {
    SUBCASE("power rule (finite differences, metadata stripped)") {
        const GeneratorFunction h([](double t) { return std::pow(t, 0.3); }, "p03");
        CHECK(derivative_at_one(h) == doctest::Approx(0.3).epsilon(1e-9));
    }
    SUBCASE("exotic generator: 2 - 2 ln 2") {
        const GeneratorFunction bare([](double t) {
            return std::exp((1.0 + t) * std::log(t) + (1.0 / t - t) * std::log1p(t));
        }, "exotic-bare");
        CHECK(derivative_at_one(bare) ==
              doctest::Approx(0.6137056388801094).epsilon(1e-9));
        CHECK(derivative_at_one(builtin_exotic()) ==
              doctest::Approx(2.0 - 2.0 * std::log(2.0)).epsilon(1e-15));
    }
    SUBCASE("linear generator") {
        CHECK(derivative_at_one(builtin_bridge(0.0)) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("finite-difference instability is reported") {
        const GeneratorFunction jittery(
            [](double t) { return t + 1e-4 * std::sin(3e7 * t); }, "jittery",
            std::nullopt, std::nullopt, false, false);
        CHECK_THROWS_AS(derivative_at_one(jittery), numerical_error);
    }
    SUBCASE("identity h'(1) + (h#)'(1) = 1 for the builtins") {
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, -0.5, 1.5}) {
            const auto h = builtin_power(p);
            CHECK(std::abs(derivative_at_one(h) + derivative_at_one(sharp(h)) - 1.0) < 1e-6);
        }
        for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
            const auto h = builtin_bridge(alpha);
            CHECK(std::abs(derivative_at_one(h) + derivative_at_one(sharp(h)) - 1.0) < 1e-6);
        }
        const auto e = builtin_exotic();
        CHECK(std::abs(derivative_at_one(e) + derivative_at_one(sharp(e)) - 1.0) < 1e-6);
    }
}

TEST_CASE("limit_at_zero") {
    SUBCASE("WY metric function -> 1/4") {
        const GeneratorFunction f([](double t) { return 0.25 * (std::sqrt(t) + 1.0) *
                                                         (std::sqrt(t) + 1.0); },
                                  "wy-f", std::nullopt, std::nullopt, true, true);
        CHECK(limit_at_zero(f) == doctest::Approx(0.25).epsilon(1e-6));
    }
    SUBCASE("(1+t)/2 -> 1/2") {
        const GeneratorFunction h([](double t) { return 0.5 * (1.0 + t); }, "sld-bare");
        CHECK(limit_at_zero(h) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("negative powers diverge") {
        const GeneratorFunction h([](double t) { return std::pow(t, -0.5); }, "inv-sqrt",
                                  std::nullopt, std::nullopt, true, true);
        CHECK(std::isinf(limit_at_zero(h)));
    }
    SUBCASE("analytic override wins") {
        CHECK(limit_at_zero(builtin_power(0.5)) == 0.0);
        CHECK(std::isinf(limit_at_zero(builtin_power(-0.5))));
        CHECK(limit_at_zero(builtin_bridge(0.0)) == 0.5);
    }
    SUBCASE("oscillating samples are reported") {
        const GeneratorFunction h([](double t) { return std::exp(0.5 * std::sin(3.0 * std::log(t))); },
                                  "osc");
        CHECK_THROWS_AS(limit_at_zero(h), numerical_error);
    }
}

TEST_CASE("construct_f") {
    SUBCASE("p = 1/2 closed form (1/4)(sqrt(t)+1)^2") {
        const MetricFunction f = construct_f(builtin_power(0.5), true);
        CHECK(f(4.0) == doctest::Approx(2.25).epsilon(1e-12));
        CHECK(f.metric_constant() == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(f.regular());
        CHECK(f.symmetric());
    }
    SUBCASE("power family matches the two-power closed form") {
        for (double p : {0.1, 0.3, 0.7, 0.9}) {
            const MetricFunction f = construct_f(builtin_power(p), true);
            for (double t : sample_grid()) {
                const double closed = p * (1.0 - p) * (t - 1.0) * (t - 1.0) /
                                      ((std::pow(t, p) - 1.0) * (std::pow(t, 1.0 - p) - 1.0));
                CHECK(rel_dev(f(t), closed) < 1e-10);
            }
        }
    }
    SUBCASE("h = (1+t)/2 reproduces itself with f(0) = 1/2") {
        const MetricFunction f = construct_f(builtin_bridge(0.0), true);
        CHECK(f(3.0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f(0.2) == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(f.metric_constant() == doctest::Approx(0.5).epsilon(1e-8));
    }
    SUBCASE("operator convex power: sign flip under normalization") {
        const MetricFunction raw = construct_f(builtin_power(1.5), false);
        CHECK(raw(2.0) < 0.0);  // raw rule is negative for operator convex h
        const MetricFunction f = construct_f(builtin_power(1.5), true);
        CHECK(f(2.0) > 0.0);
        CHECK(f.metric_constant() <= 1e-7);
        CHECK_FALSE(f.regular());
        CHECK(f.normalization() == doctest::Approx(-0.75).epsilon(1e-12));
    }
    SUBCASE("symmetric in h and h#") {
        for (const auto& h : {builtin_power(0.3), builtin_bridge(0.25), builtin_exotic()}) {
            const MetricFunction a = construct_f(h, true);
            const MetricFunction b = construct_f(sharp(h), true);
            for (double t : sample_grid()) {
                CHECK(rel_dev(a(t), b(t)) < 1e-10);
            }
        }
    }
    SUBCASE("near-1 fallback is continuous across the boundary") {
        for (const auto& h : {builtin_power(0.3), builtin_bridge(0.25), builtin_exotic()}) {
            const MetricFunction f = construct_f(h, true);
            for (double side : {1.0, -1.0}) {
                const double inside = f(1.0 + side * 1e-4 * (1.0 - 1e-6));
                const double outside = f(1.0 + side * 1e-4 * (1.0 + 1e-6));
                CHECK(std::abs(inside - outside) < 1e-6);
            }
            CHECK(f(1.0) == doctest::Approx(1.0).epsilon(1e-12));
            // interior of the fallback window against the sane values nearby
            CHECK(std::abs(f(1.0 + 9e-5) - f(1.0 + 1.1e-4)) < 1e-4);
        }
    }
    SUBCASE("identity and constant generators are rejected") {
        CHECK_THROWS_AS(builtin_power(1.0), validation_error);
        CHECK_THROWS_AS(builtin_power(0.0), validation_error);
        const GeneratorFunction ident([](double t) { return t; }, "ident");
        CHECK_THROWS_AS(construct_f(ident, true), validation_error);
        const GeneratorFunction constant([](double) { return 1.0; }, "one");
        CHECK_THROWS_AS(construct_f(constant, true), validation_error);
    }
    SUBCASE("denominator zero away from t = 1 is a domain error") {
        // crosses 1 again at t = 4
        const GeneratorFunction weird(
            [](double t) { return 1.0 + (t - 1.0) * (t - 4.0) * 0.05; }, "recross");
        const MetricFunction f = construct_f(weird, false);
        CHECK_THROWS_AS(f(4.0), masi::domain_error);
    }
}

TEST_CASE("g_auxiliary") {
    SUBCASE("h = sqrt(t): g = 2/(sqrt(t)+1)") {
        const auto g = g_auxiliary(builtin_power(0.5));
        CHECK(g(4.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(g(1.0) == 1.0);
    }
    SUBCASE("g(1) = 1 for all builtins") {
        for (const auto& h : {builtin_power(0.2), builtin_bridge(0.7), builtin_exotic()}) {
            CHECK(g_auxiliary(h)(1.0) == 1.0);
        }
    }
    SUBCASE("identity f = -(t-1)/(g-1) against the unnormalized rule") {
        const auto h = builtin_power(0.3);
        const auto g = g_auxiliary(h);
        const MetricFunction raw = construct_f(h, false);
        for (double t : {0.5, 2.0, 10.0}) {
            const double via_g = -(t - 1.0) / (g(t) - 1.0);
            CHECK(rel_dev(via_g, raw(t)) < 1e-10);
        }
    }
}

TEST_CASE("symmetry_class") {
    SUBCASE("powers are tilde-symmetric") {
        const SymmetryReport r = symmetry_class(builtin_power(0.3));
        CHECK(r.tilde_symmetric);
        CHECK(r.f_symmetric);
    }
    SUBCASE("exotic generator is tilde-symmetric") {
        const SymmetryReport r = symmetry_class(builtin_exotic());
        CHECK(r.tilde_symmetric);
        CHECK_FALSE(r.star_symmetric);
        CHECK(r.f_symmetric);
    }
    SUBCASE("(1+t)/2 is star-symmetric") {
        const SymmetryReport r = symmetry_class(builtin_bridge(0.0));
        CHECK(r.star_symmetric);
        CHECK(r.f_symmetric);
    }
}

TEST_CASE("builtin_power") {
    CHECK(builtin_power(0.5)(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(builtin_power(1.5)(4.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(builtin_power(1.0), validation_error);
    CHECK_THROWS_AS(builtin_power(2.0), validation_error);
    CHECK_THROWS_AS(builtin_power(-1.0), validation_error);
    CHECK_THROWS_AS(builtin_power(0.5)(-2.0), masi::domain_error);
}

TEST_CASE("builtin_bridge") {
    SUBCASE("endpoints and midpoint") {
        CHECK(builtin_bridge(0.0)(3.0) == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(builtin_bridge(1.0)(3.0) == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(builtin_bridge(0.5)(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("sharp(f_alpha) = f_{1-alpha}") {
        for (double alpha : {0.0, 0.25, 0.4, 0.9}) {
            const auto lhs = sharp(builtin_bridge(alpha));
            const auto rhs = builtin_bridge(1.0 - alpha);
            for (double t : sample_grid()) {
                CHECK(rel_dev(lhs(t), rhs(t)) < 1e-12);
            }
        }
    }
    SUBCASE("alpha out of range") {
        CHECK_THROWS_AS(builtin_bridge(-0.1), validation_error);
        CHECK_THROWS_AS(builtin_bridge(1.1), validation_error);
    }
}

TEST_CASE("builtin_exotic") {
    const auto h = builtin_exotic();
    CHECK(h(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h(2.0) == doctest::Approx(1.5396007178390020).epsilon(1e-14));
    CHECK(h(0.5) == doctest::Approx(0.6495190528383290).epsilon(1e-14));
    SUBCASE("h = h~ functional equation on the grid") {
        for (double t : sample_grid()) {
            CHECK(rel_dev(h(t), 1.0 / h(1.0 / t)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(h(0.0), masi::domain_error);
}

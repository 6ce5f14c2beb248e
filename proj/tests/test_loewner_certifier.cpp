#include <doctest.h>

#include <cmath>

#include "masi/generator_algebra.hpp"
#include "masi/loewner_certifier.hpp"

using namespace masi;

TEST_CASE("loewner_matrix entries") {
    SUBCASE("identity function gives the all-ones matrix") {
        const auto lm = loewner_matrix([](double t) { return t; }, {1.0, 2.0, 5.0});
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                CHECK(lm.entries(i, j) == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
    SUBCASE("square root at (1, 4)") {
        const auto lm = loewner_matrix([](double t) { return std::sqrt(t); }, {1.0, 4.0});
        CHECK(lm.entries(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(lm.entries(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(lm.entries(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(lm.entries(1, 1) == doctest::Approx(0.25).epsilon(1e-9));
        const double det = lm.entries(0, 0) * lm.entries(1, 1) -
                           lm.entries(0, 1) * lm.entries(1, 0);
        CHECK(det == doctest::Approx(0.0138888888888889).epsilon(1e-6));
        CHECK(det > 0.0);
    }
    SUBCASE("square at (1, 2) has negative determinant") {
        const auto lm = loewner_matrix([](double t) { return t * t; }, {1.0, 2.0});
        CHECK(lm.entries(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(lm.entries(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(lm.entries(1, 1) == doctest::Approx(4.0).epsilon(1e-9));
        const double det = lm.entries(0, 0) * lm.entries(1, 1) -
                           lm.entries(0, 1) * lm.entries(1, 0);
        CHECK(det == doctest::Approx(-1.0).epsilon(1e-6));
    }
    SUBCASE("coincident points rejected") {
        CHECK_THROWS_AS(loewner_matrix([](double t) { return t; }, {1.0, 1.0 + 1e-9}),
                        validation_error);
    }
    SUBCASE("nonpositive points rejected") {
        CHECK_THROWS_AS(loewner_matrix([](double t) { return t; }, {1.0, -2.0}),
                        validation_error);
    }
    SUBCASE("non-finite function value rejected") {
        CHECK_THROWS_AS(loewner_matrix([](double t) { return 1.0 / (t - 2.0); }, {1.0, 2.0}),
                        masi::domain_error);
    }
}

TEST_CASE("certify_operator_monotone") {
    SUBCASE("square root is matrix monotone") {
        const auto r = certify_operator_monotone([](double t) { return std::sqrt(t); }, 6,
                                                 200, 7);
        CHECK(r.verdict == Verdict::certified_monotone);
        CHECK(r.worst_eigenvalue >= -kPsdTol);
    }
    SUBCASE("square is rejected with a two-point witness that re-validates") {
        const auto fn = [](double t) { return t * t; };
        const auto r = certify_operator_monotone(fn, 2, 10, 1);
        CHECK(r.verdict == Verdict::rejected);
        REQUIRE(r.witness_points.has_value());
        CHECK(r.witness_points->size() == 2);
        CHECK(recheck_witness(fn, r));
    }
    SUBCASE("constructed metric from power 0.3 is certified") {
        const MetricFunction f = construct_f(builtin_power(0.3), true);
        const auto r = certify_operator_monotone([&f](double t) { return f(t); }, 6, 200, 7);
        CHECK(r.verdict == Verdict::certified_monotone);
    }
    SUBCASE("1/t is certified decreasing") {
        const auto r = certify_operator_monotone([](double t) { return 1.0 / t; }, 6, 100, 3);
        CHECK(r.verdict == Verdict::certified_decreasing);
    }
    SUBCASE("known negatives t^2, t^3, exp at order 2") {
        for (const auto& fn : {std::function<double(double)>([](double t) { return t * t; }),
                               std::function<double(double)>([](double t) { return t * t * t; }),
                               std::function<double(double)>([](double t) { return std::exp(t); })}) {
            const auto r = certify_operator_monotone(fn, 2, 200, 7);
            CHECK(r.verdict == Verdict::rejected);
            CHECK(r.witness_points.has_value());
            CHECK(recheck_witness(fn, r));
        }
    }
    SUBCASE("deterministic per seed") {
        const auto fn = [](double t) { return std::log1p(t); };
        const auto a = certify_operator_monotone(fn, 5, 50, 99);
        const auto b = certify_operator_monotone(fn, 5, 50, 99);
        CHECK(a.verdict == b.verdict);
        CHECK(a.worst_eigenvalue == b.worst_eigenvalue);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(certify_operator_monotone([](double t) { return t; }, 9, 10, 1),
                        validation_error);
        CHECK_THROWS_AS(certify_operator_monotone([](double t) { return t; }, 4, 0, 1),
                        validation_error);
    }
}

TEST_CASE("monotone certification is scale-robust") {
    // Verdict of f at a point set matches the verdict of f(c t)/f(c) at the
    // mapped point set x -> x / c.
    const auto f = [](double t) { return std::sqrt(t); };
    Rng rng(17);
    for (double c : {0.1, 10.0}) {
        const auto g = [c, &f](double t) { return f(c * t) / f(c); };
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> pts(4);
            for (auto& p : pts) p = rng.log_uniform(1e-3, 1e3);
            std::vector<double> mapped = pts;
            for (auto& p : mapped) p /= c;

            auto scaled_min = [](const std::function<double(double)>& fn,
                                 const std::vector<double>& xs) {
                const auto lm = loewner_matrix(fn, xs);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lm.entries,
                                                                  Eigen::EigenvaluesOnly);
                return es.eigenvalues()(0) / lm.entries.cwiseAbs().maxCoeff();
            };
            const bool pass_f = scaled_min(f, pts) >= -kPsdTol;
            const bool pass_g = scaled_min(g, mapped) >= -kPsdTol;
            CHECK(pass_f == pass_g);
        }
    }
}

TEST_CASE("certify_operator_convex") {
    SUBCASE("square is operator convex") {
        const auto r = certify_operator_convex([](double t) { return t * t; }, 4, 50, 5);
        CHECK(r.verdict == Verdict::certified_convex);
    }
    SUBCASE("t^1.5 and its sharp t^-0.5 are operator convex") {
        const auto a = certify_operator_convex([](double t) { return std::pow(t, 1.5); }, 4,
                                               50, 5);
        CHECK(a.verdict == Verdict::certified_convex);
        const auto b = certify_operator_convex([](double t) { return std::pow(t, -0.5); }, 4,
                                               50, 5);
        CHECK(b.verdict == Verdict::certified_convex);
    }
    SUBCASE("square root is concave, rejected with a matrix-pair witness") {
        const auto fn = [](double t) { return std::sqrt(t); };
        const auto r = certify_operator_convex(fn, 3, 50, 5);
        CHECK(r.verdict == Verdict::rejected);
        REQUIRE(r.witness_pair.has_value());
        CHECK(recheck_witness(fn, r));
    }
}

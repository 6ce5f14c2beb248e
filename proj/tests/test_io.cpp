#include <doctest.h>

#include <cmath>

#include "masi/generator_algebra.hpp"
#include "masi/io.hpp"
#include "masi/skew_information.hpp"

using namespace masi;

namespace {

json state_doc() {
    return json{{"kind", "state"},
                {"dim", 2},
                {"re", {{0.75, 0.0}, {0.0, 0.25}}},
                {"im", {{0.0, 0.0}, {0.0, 0.0}}}};
}

} // namespace

TEST_CASE("parse_matrix_json") {
    SUBCASE("valid diagonal state") {
        const ParsedMatrix m = parse_matrix_json(state_doc());
        REQUIRE(std::holds_alternative<DensityMatrix>(m));
        const auto& rho = std::get<DensityMatrix>(m);
        CHECK(rho.dim() == 2);
        CHECK(rho.mat()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-15));
    }
    SUBCASE("observable with complex off-diagonal") {
        json doc{{"kind", "observable"},
                 {"dim", 2},
                 {"re", {{0.0, 0.5}, {0.5, 1.0}}},
                 {"im", {{0.0, -0.25}, {0.25, 0.0}}}};
        const ParsedMatrix m = parse_matrix_json(doc);
        REQUIRE(std::holds_alternative<HermitianMatrix>(m));
        CHECK(std::get<HermitianMatrix>(m).mat()(0, 1) == Complex(0.5, -0.25));
    }
    SUBCASE("trace deficit is named") {
        json doc = state_doc();
        doc["re"] = {{0.55, 0.0}, {0.0, 0.25}};  // trace 0.8
        CHECK_THROWS_WITH_AS(parse_matrix_json(doc), doctest::Contains("trace"),
                             validation_error);
    }
    SUBCASE("small trace drift is renormalized") {
        json doc = state_doc();
        doc["re"] = {{0.7500003, 0.0}, {0.0, 0.25}};
        const ParsedMatrix m = parse_matrix_json(doc);
        const auto& rho = std::get<DensityMatrix>(m);
        CHECK(rho.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("asymmetric observable is named") {
        json doc{{"kind", "observable"},
                 {"dim", 2},
                 {"re", {{0.0, 1.0}, {0.5, 0.0}}},
                 {"im", {{0.0, 0.0}, {0.0, 0.0}}}};
        CHECK_THROWS_WITH_AS(parse_matrix_json(doc), doctest::Contains("asymmetry"),
                             validation_error);
    }
    SUBCASE("negative eigenvalue is rejected") {
        json doc = state_doc();
        doc["re"] = {{1.25, 0.0}, {0.0, -0.25}};
        CHECK_THROWS_WITH_AS(parse_matrix_json(doc), doctest::Contains("eigenvalue"),
                             validation_error);
    }
    SUBCASE("schema violations") {
        CHECK_THROWS_AS(parse_matrix_json(json{{"kind", "state"}}), validation_error);
        json doc = state_doc();
        doc["kind"] = "density";
        CHECK_THROWS_AS(parse_matrix_json(doc), validation_error);
        doc = state_doc();
        doc.erase("im");
        CHECK_THROWS_AS(parse_matrix_json(doc), validation_error);
    }
}

TEST_CASE("matrix round trip preserves every bit") {
    Rng rng(321);
    const DensityMatrix rho = random_density_matrix(4, rng);
    const json doc = matrix_to_json(rho.mat(), "state");
    const json reparsed = json::parse(doc.dump());
    const ParsedMatrix m = parse_matrix_json(reparsed);
    const auto& back = std::get<DensityMatrix>(m);
    CHECK((back.mat() - rho.mat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("report serialization") {
    SUBCASE("skew info report carries terms and diagnostics") {
        CMatrix r(2, 2);
        r << 0.75, 0.0, 0.0, 0.25;
        CMatrix a(2, 2);
        a << 0.0, 1.0, 1.0, 0.0;
        const SkewInfoReport report = wyd_commutator(
            DensityMatrix(HermitianMatrix(std::move(r))), HermitianMatrix(std::move(a)), 0.5);
        const json doc = report_to_json(report);
        CHECK(doc["method"] == "commutator");
        CHECK(doc["value"].get<double>() == doctest::Approx(0.13397459621556135));
        CHECK(doc.contains("diagnostics"));
    }
    SUBCASE("csv flattening emits key,value rows") {
        const json doc{{"a", 1.5}, {"b", {{"c", "x"}}}};
        const std::string csv = json_to_csv(doc);
        CHECK(csv.find("key,value\n") == 0);
        CHECK(csv.find("a,1.5\n") != std::string::npos);
        CHECK(csv.find("b.c,x\n") != std::string::npos);
    }
}

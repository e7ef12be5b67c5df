#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "birkhoff/birkhoff.hpp"
#include "oracles.hpp"

using namespace birkhoff;

namespace {

const char* kSftConfig = R"(# full 2-shift with an indicator
[system]
matrix:
1 1
1 1

[potentials]
potential phi depth=1:
0 0
1 1
potential psi depth=2:
00 0.25
01 -0.5
10 0.125
11 1

[params]
grid 11
alpha 0.3
delta 0.05
)";

const char* kMapConfig = R"([system]
slopes: 2 4 4

[potentials]
potential phi depth=1:
0 0
1 1
2 1
)";

}  // namespace

TEST_CASE("parse_config on a matrix system") {
    const SystemConfig cfg = parse_config(kSftConfig);
    REQUIRE(cfg.sft.has_value());
    CHECK(cfg.sft->alphabet_size() == 2);
    REQUIRE(cfg.potentials.size() == 2);
    CHECK(cfg.find_potential("phi") != nullptr);
    const Potential* psi = cfg.find_potential("psi");
    REQUIRE(psi != nullptr);
    CHECK(psi->depth() == 2);
    const int w[2] = {0, 1};
    CHECK(psi->value(w) == Catch::Approx(-0.5));
    CHECK(cfg.params.grid == 11);
    CHECK(cfg.params.alpha == Catch::Approx(0.3));
    CHECK(cfg.params.delta == Catch::Approx(0.05));
    CHECK_FALSE(cfg.params.gamma.has_value());
}

TEST_CASE("parse_config on an interval map") {
    const SystemConfig cfg = parse_config(kMapConfig);
    REQUIRE(cfg.map.has_value());
    CHECK(cfg.map->branches.size() == 3);
    CHECK(cfg.symbolic_system().alphabet_size() == 3);
    CHECK(cfg.find_potential("phi") != nullptr);
}

TEST_CASE("parse_config rejects malformed input") {
    SECTION("wrong matrix width reports the offending line") {
        try {
            parse_config("[system]\nmatrix:\n1 1\n1\n");
            FAIL("expected a parse error");
        } catch (const ConfigParseError& e) {
            CHECK(e.line == 4);
        }
    }
    SECTION("non-square matrix") {
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n1 1\n"), ConfigParseError);
    }
    SECTION("slope-one branch triggers the expansion invariant") {
        try {
            parse_config("[system]\nslopes: 3 1\n");
            FAIL("expected a validation error");
        } catch (const InvalidModelError& e) {
            CHECK(std::string(e.what()).find("expansion") != std::string::npos);
        }
    }
    SECTION("potential before the system") {
        CHECK_THROWS_AS(parse_config("[potentials]\npotential phi depth=1:\n0 1\n"),
                        ConfigValidationError);
    }
    SECTION("incomplete potential table") {
        CHECK_THROWS_AS(
            parse_config("[system]\nmatrix:\n1 1\n1 1\n\n[potentials]\npotential phi depth=1:\n0 1\n"),
            ConfigValidationError);
    }
    SECTION("inadmissible word in a potential table") {
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n1 1\n1 0\n\n[potentials]\n"
                                     "potential psi depth=2:\n00 1\n01 2\n10 3\n11 4\n"),
                        ConfigValidationError);
    }
    SECTION("parameters are range-checked") {
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n1 1\n1 1\n\n[params]\ngrid 1\n"),
                        ConfigValidationError);
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n1 1\n1 1\n\n[params]\ngamma 1.5\n"),
                        ConfigValidationError);
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n1 1\n1 1\n\n[params]\nbogus 3\n"),
                        ConfigParseError);
    }
    SECTION("non-primitive matrix fails eagerly") {
        CHECK_THROWS_AS(parse_config("[system]\nmatrix:\n0 1\n1 0\n"), NonPrimitiveError);
    }
}

TEST_CASE("render/parse round trip") {
    SECTION("matrix system") {
        const SystemConfig cfg = parse_config(kSftConfig);
        const SystemConfig back = parse_config(render_config(cfg));
        REQUIRE(back.sft.has_value());
        CHECK(*back.sft == *cfg.sft);
        REQUIRE(back.potentials.size() == cfg.potentials.size());
        for (std::size_t i = 0; i < back.potentials.size(); ++i) {
            CHECK(back.potentials[i].first == cfg.potentials[i].first);
            CHECK(back.potentials[i].second == cfg.potentials[i].second);
        }
        CHECK(back.params == cfg.params);
    }
    SECTION("map system with awkward numbers survives exactly") {
        SystemConfig cfg = parse_config(kMapConfig);
        cfg.params.alpha = 0.1 + 0.2;  // 0.30000000000000004
        cfg.params.tolerance = 1e-9;
        const SystemConfig back = parse_config(render_config(cfg));
        REQUIRE(back.map.has_value());
        CHECK(*back.map == *cfg.map);
        CHECK(back.params == cfg.params);
    }
}

TEST_CASE("csv formatting is fixed at 12 significant digits") {
    CHECK(format_csv_number(0.5) == "0.5");
    CHECK(format_csv_number(std::log(2.0)) == "0.69314718056");
    CHECK(format_csv_number(-1.0 / 3.0) == "-0.333333333333");
    CHECK(format_csv_number(1e-9) == "1e-09");
    CHECK(format_csv_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_csv_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "birkhoff/birkhoff.hpp"
#include "oracles.hpp"

using namespace birkhoff;

namespace {
const double kLog2 = std::log(2.0);
const double kGolden = 0.5 * (1.0 + std::sqrt(5.0));
}  // namespace

TEST_CASE("classical pressure closed forms") {
    const SftSystem full = oracles::full_shift(2);
    const SftSystem golden = oracles::golden_mean_shift();

    SECTION("full 2-shift, zero potential") {
        const PressureResult p = classical_pressure(full, Potential::zero(full));
        CHECK(p.value == Catch::Approx(kLog2).margin(1e-12));
        CHECK(p.residual <= 1e-10);
    }
    SECTION("golden mean, zero potential") {
        const PressureResult p = classical_pressure(golden, Potential::zero(golden));
        CHECK(p.value == Catch::Approx(std::log(kGolden)).margin(1e-12));
        CHECK(p.residual <= 1e-10);
        for (double v : p.eigen_right) CHECK(v > 0.0);
        for (double v : p.eigen_left) CHECK(v > 0.0);
    }
    SECTION("full 2-shift, indicator: rows (1,1),(e,e)") {
        const PressureResult p = classical_pressure(full, Potential::indicator(full, 1));
        CHECK(p.value == Catch::Approx(std::log(1.0 + std::exp(1.0))).margin(1e-12));
    }
    SECTION("iteration cap triggers a convergence failure") {
        PressureOptions opts;
        opts.iteration_cap = 1;
        CHECK_THROWS_AS(classical_pressure(golden, Potential::indicator(golden, 1), opts),
                        ConvergenceFailureError);
    }
    SECTION("huge potentials stay finite through max-normalisation") {
        const Potential big = Potential::constant(full, 5000.0);
        CHECK(classical_pressure(full, big).value == Catch::Approx(5000.0 + kLog2).margin(1e-9));
    }
}

TEST_CASE("equilibrium measures from Perron data") {
    const SftSystem full = oracles::full_shift(2);
    const SftSystem golden = oracles::golden_mean_shift();

    SECTION("maximal entropy on the full shift is Bernoulli(1/2)") {
        const MarkovMeasure mu = equilibrium_measure(full, Potential::zero(full));
        CHECK(mu.stationary(0) == Catch::Approx(0.5).margin(1e-12));
        CHECK(mu.transition(0, 1) == Catch::Approx(0.5).margin(1e-12));
        CHECK(mu.entropy() == Catch::Approx(kLog2).margin(1e-12));
    }
    SECTION("maximal entropy on the golden mean shift") {
        const MarkovMeasure mu = equilibrium_measure(golden, Potential::zero(golden));
        CHECK(mu.transition(0, 0) == Catch::Approx(1.0 / kGolden).margin(1e-10));
        CHECK(mu.transition(1, 0) == Catch::Approx(1.0).margin(1e-12));
        CHECK(mu.stationary(1) == Catch::Approx(1.0 / (1.0 + kGolden * kGolden)).margin(1e-10));
    }
    SECTION("tilted full shift gives the Bernoulli closed form") {
        const Potential ind = Potential::indicator(full, 1);
        const MarkovMeasure mu = equilibrium_measure(full, ind);
        const double e = std::exp(1.0);
        CHECK(mu.stationary(1) == Catch::Approx(e / (1.0 + e)).margin(1e-11));
        CHECK(mu.entropy() + mu.integral(full, ind) ==
              Catch::Approx(std::log(1.0 + e)).margin(1e-9));
    }
}

TEST_CASE("pressure gradient") {
    const SftSystem full = oracles::full_shift(2);
    const Potential ind = Potential::indicator(full, 1);
    const Potential zero = Potential::zero(full);

    SECTION("closed forms on the full shift") {
        CHECK(pressure_gradient(full, zero, ind, 0.0) == Catch::Approx(0.5).margin(1e-11));
        const double e = std::exp(1.0);
        CHECK(pressure_gradient(full, zero, ind, 1.0) == Catch::Approx(e / (1.0 + e)).margin(1e-11));
    }
    SECTION("large q approaches the domain endpoints") {
        CHECK(pressure_gradient(full, zero, ind, 40.0) == Catch::Approx(1.0).margin(1e-10));
        CHECK(pressure_gradient(full, zero, ind, -40.0) == Catch::Approx(0.0).margin(1e-10));
    }
    SECTION("matches central finite differences on random systems") {
        std::mt19937 rng(99);
        for (int trial = 0; trial < 12; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 2 + trial % 3);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            const Potential phi = oracles::random_depth1_potential(rng, sft);
            const double q = -1.0 + 0.2 * trial;
            CHECK(pressure_gradient(sft, psi, phi, q) ==
                  Catch::Approx(oracles::fd_pressure_gradient(sft, psi, phi, q)).margin(1e-7));
        }
    }
    SECTION("nondecreasing in q") {
        std::mt19937 rng(123);
        for (int trial = 0; trial < 10; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 3);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            const Potential phi = oracles::random_depth1_potential(rng, sft);
            double prev = pressure_gradient(sft, psi, phi, -3.0);
            for (double q = -2.5; q <= 3.0; q += 0.5) {
                const double g = pressure_gradient(sft, psi, phi, q);
                CHECK(g >= prev - 1e-10);
                prev = g;
            }
        }
    }
}

TEST_CASE("pressure functional identities") {
    std::mt19937 rng(321);

    SECTION("P(psi + c) = P(psi) + c") {
        for (int trial = 0; trial < 20; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 2 + trial % 3);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            const double c = -2.0 + 0.37 * trial;
            const Potential shifted = linear_combination(sft, 1.0, psi, c, Potential::constant(sft, 1.0));
            CHECK(classical_pressure(sft, shifted).value ==
                  Catch::Approx(classical_pressure(sft, psi).value + c).margin(1e-10));
        }
    }
    SECTION("monotone in the potential") {
        for (int trial = 0; trial < 20; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 3);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            std::uniform_real_distribution<double> bump(0.0, 1.0);
            std::vector<double> larger(static_cast<std::size_t>(sft.alphabet_size()));
            for (int s = 0; s < sft.alphabet_size(); ++s) {
                const int w[1] = {s};
                larger[static_cast<std::size_t>(s)] = psi.value(w) + bump(rng);
            }
            const Potential psi2(sft, 1, std::move(larger));
            CHECK(classical_pressure(sft, psi).value <=
                  classical_pressure(sft, psi2).value + 1e-12);
        }
    }
    SECTION("convex in q along any direction") {
        for (int trial = 0; trial < 20; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 2 + trial % 3);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            const Potential phi = oracles::random_depth1_potential(rng, sft);
            std::vector<double> values;
            for (double q = -2.0; q <= 2.0 + 1e-9; q += 0.4)
                values.push_back(
                    classical_pressure(sft, linear_combination(sft, 1.0, psi, q, phi)).value);
            for (std::size_t i = 1; i + 1 < values.size(); ++i)
                CHECK(values[i + 1] - 2.0 * values[i] + values[i - 1] >= -1e-9);
        }
    }
    SECTION("variational principle over random Markov measures") {
        const SftSystem sft = oracles::random_primitive_sft(rng, 3);
        const Potential psi = oracles::random_depth1_potential(rng, sft);
        const double pressure = classical_pressure(sft, psi).value;
        for (int k = 0; k < 200; ++k) {
            const MarkovMeasure mu = oracles::random_markov_measure(rng, sft);
            CHECK(mu.entropy() + mu.integral(sft, psi) <= pressure + 1e-9);
        }
        const MarkovMeasure eq = equilibrium_measure(sft, psi);
        CHECK(eq.entropy() + eq.integral(sft, psi) == Catch::Approx(pressure).margin(1e-8));
    }
    SECTION("recoding invariance of the pressure") {
        for (int trial = 0; trial < 10; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 2);
            const Potential psi = oracles::random_potential(rng, sft, 3);
            const RecodedSystem rec = higher_block_recode(sft, {psi});
            CHECK(classical_pressure(rec.sft, rec.potentials[0]).value ==
                  Catch::Approx(classical_pressure(sft, psi).value).margin(1e-10));
        }
    }
}

TEST_CASE("restricted pressure on subgraphs") {
    const SftSystem golden = oracles::golden_mean_shift();
    const int m = 2;

    SECTION("restricting the golden mean to the 0-loop") {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * m, 0);
        mask[0] = 1;  // only 0 -> 0
        CHECK(restricted_pressure(golden, Potential::zero(golden), mask) ==
              Catch::Approx(0.0).margin(1e-12));
        CHECK(restricted_pressure(golden, Potential::constant(golden, 1.5), mask) ==
              Catch::Approx(1.5).margin(1e-12));
    }
    SECTION("restricting to the two-cycle") {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * m, 0);
        mask[1] = mask[2] = 1;  // 0 -> 1 -> 0
        CHECK(restricted_pressure(golden, Potential::zero(golden), mask) ==
              Catch::Approx(0.0).margin(1e-10));
        const Potential ind = Potential::indicator(golden, 1);
        // spectral radius of [[0, 1],[e, 0]] is sqrt(e)
        CHECK(restricted_pressure(golden, ind, mask) == Catch::Approx(0.5).margin(1e-10));
    }
    SECTION("full mask reproduces the classical pressure") {
        std::vector<std::uint8_t> mask = {1, 1, 1, 0};
        CHECK(restricted_pressure(golden, Potential::zero(golden), mask) ==
              Catch::Approx(std::log(kGolden)).margin(1e-10));
    }
    SECTION("acyclic mask carries no pressure") {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * m, 0);
        mask[1] = 1;  // only 0 -> 1
        CHECK(restricted_pressure(golden, Potential::zero(golden), mask) ==
              -std::numeric_limits<double>::infinity());
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "birkhoff/birkhoff.hpp"
#include "oracles.hpp"

using namespace birkhoff;

namespace {
const double kLog2 = std::log(2.0);
}  // namespace

TEST_CASE("separated-set pressure sums") {
    const SftSystem full = oracles::full_shift(2);
    const SftSystem golden = oracles::golden_mean_shift();

    SECTION("full 2-shift with the zero potential is exactly log 2") {
        const EstimateReport rep = separated_pressure_estimate(full, Potential::zero(full), 10);
        CHECK(rep.value == Catch::Approx(kLog2).margin(1e-12));
        CHECK(rep.word_count == 1024);
        CHECK(rep.exact);
    }
    SECTION("golden mean counts 13 words at length 5") {
        const EstimateReport rep = separated_pressure_estimate(golden, Potential::zero(golden), 5);
        CHECK(rep.word_count == 13);
        CHECK(rep.value == Catch::Approx(std::log(13.0) / 5.0).margin(1e-12));
    }
    SECTION("full 2-shift with an indicator: cyclic sums give the pressure exactly") {
        const Potential ind = Potential::indicator(full, 1);
        const double target = std::log(1.0 + std::exp(1.0));
        const EstimateReport rep2 = separated_pressure_estimate(full, ind, 2);
        CHECK(rep2.value == Catch::Approx(target).margin(1e-12));
        for (int n : {3, 7, 12})
            CHECK(separated_pressure_estimate(full, ind, n).value ==
                  Catch::Approx(target).margin(1e-12));
    }
    SECTION("O(1/n) convergence to the classical pressure off the full shift") {
        const Potential ind = Potential::indicator(golden, 1);
        const double pressure = classical_pressure(golden, ind).value;
        double gap_first = 0.0, gap_last = 0.0;
        for (int n : {6, 10, 14, 18}) {
            const double gap = std::abs(separated_pressure_estimate(golden, ind, n).value - pressure);
            CHECK(gap <= 12.0 / n);  // C/n envelope
            if (n == 6) gap_first = gap;
            if (n == 18) gap_last = gap;
        }
        CHECK(gap_last < gap_first);
    }
    SECTION("budget guard") {
        CHECK_THROWS_AS(separated_pressure_estimate(full, Potential::zero(full), 64),
                        ResourceLimitError);
    }
}

TEST_CASE("level-set pressure estimates") {
    const SftSystem full = oracles::full_shift(2);
    const Potential ind = Potential::indicator(full, 1);
    const Potential zero = Potential::zero(full);

    SECTION("binomial window at n = 20") {
        const EstimateReport rep = level_set_pressure_estimate(full, ind, zero, 0.3, 0.05, 20);
        const double expected =
            std::log(static_cast<double>(oracles::binomial(20, 5) + oracles::binomial(20, 6) +
                                         oracles::binomial(20, 7))) /
            20.0;
        REQUIRE_FALSE(rep.empty);
        CHECK(rep.word_count == oracles::binomial(20, 5) + oracles::binomial(20, 6) + oracles::binomial(20, 7));
        CHECK(rep.value == Catch::Approx(expected).margin(1e-12));
        CHECK(rep.exact);
    }
    SECTION("zero-width window at the central frequency") {
        const EstimateReport rep = level_set_pressure_estimate(full, ind, zero, 0.5, 0.0, 10);
        CHECK(rep.word_count == oracles::binomial(10, 5));
        CHECK(rep.value == Catch::Approx(std::log(static_cast<double>(oracles::binomial(10, 5))) / 10.0)
                               .margin(1e-12));
    }
    SECTION("empty window reports the sentinel state") {
        const EstimateReport rep = level_set_pressure_estimate(full, ind, zero, 2.0, 0.05, 10);
        CHECK(rep.empty);
        CHECK(rep.word_count == 0);
    }
    SECTION("psi weighting inside the window") {
        // With psi = phi = indicator, each word with j ones contributes e^j.
        const EstimateReport rep = level_set_pressure_estimate(full, ind, ind, 0.5, 0.0, 10);
        const double expected =
            std::log(static_cast<double>(oracles::binomial(10, 5)) * std::exp(5.0)) / 10.0;
        CHECK(rep.value == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("covering entropy estimates") {
    const SftSystem full = oracles::full_shift(2);
    const Potential zero = Potential::zero(full);
    const MarkovMeasure fair = MarkovMeasure::from_stochastic(full, {0.5, 0.5, 0.5, 0.5});

    SECTION("uniform cylinders need the ceiling count") {
        const EstimateReport rep = katok_entropy_estimate(full, fair, zero, 0.1, 20);
        CHECK(rep.word_count == 943719);  // ceil(0.9 * 2^20)
        CHECK(rep.value == Catch::Approx(std::log(943719.0) / 20.0).margin(1e-12));
    }
    SECTION("vanishing exclusion keeps every word") {
        const EstimateReport rep = katok_entropy_estimate(full, fair, zero, 1e-9, 12);
        CHECK(rep.word_count == 4096);
        CHECK(rep.value == Catch::Approx(kLog2).margin(1e-12));
        CHECK(rep.value_upper - rep.value_lower <= 1e-9);  // sliver of the last word
    }
    SECTION("biased Bernoulli approaches its entropy") {
        const MarkovMeasure biased = MarkovMeasure::from_stochastic(full, {0.8, 0.2, 0.8, 0.2});
        const double h = oracles::binary_entropy(0.2);
        const EstimateReport rep = katok_entropy_estimate(full, biased, zero, 0.1, 14);
        CHECK(std::abs(rep.value - h) <= 0.08);
        CHECK(rep.value_lower <= rep.value_upper);
    }
    SECTION("monotone nonincreasing in gamma") {
        const MarkovMeasure biased = MarkovMeasure::from_stochastic(full, {0.7, 0.3, 0.55, 0.45});
        double prev = std::numeric_limits<double>::infinity();
        for (double gamma : {0.05, 0.1, 0.2, 0.4, 0.6}) {
            const double v = katok_entropy_estimate(full, biased, zero, gamma, 12).value;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
    SECTION("trend toward the entropy for the fair coin") {
        double prev_gap = std::numeric_limits<double>::infinity();
        for (int n : {10, 14, 18, 22}) {
            const double v = katok_entropy_estimate(full, fair, zero, 0.1, n).value;
            const double gap = std::abs(v - kLog2);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
    }
    SECTION("weighted covering converges to h + int psi") {
        // For psi = c the cost of every word is e^{cn}, so the estimate is
        // the unweighted count shifted by c.
        const Potential c = Potential::constant(full, 0.4);
        const EstimateReport rep = katok_entropy_estimate(full, fair, c, 0.1, 12);
        const EstimateReport plain = katok_entropy_estimate(full, fair, zero, 0.1, 12);
        CHECK(rep.value == Catch::Approx(plain.value + 0.4).margin(1e-12));
    }
}

TEST_CASE("brute-force constrained oracle") {
    const SftSystem full = oracles::full_shift(2);
    const Potential ind = Potential::indicator(full, 1);
    const Potential zero = Potential::zero(full);

    SECTION("binary entropy targets") {
        CHECK(brute_force_constrained(full, ind, zero, 0.3, 200) ==
              Catch::Approx(oracles::binary_entropy(0.3)).margin(1e-3));
        CHECK(brute_force_constrained(full, ind, zero, 0.5, 200) ==
              Catch::Approx(kLog2).margin(1e-4));
    }
    SECTION("golden mean cross-check against duality") {
        const SftSystem golden = oracles::golden_mean_shift();
        const Potential gind = Potential::indicator(golden, 1);
        const Potential gzero = Potential::zero(golden);
        const double dual = constrained_pressure(golden, gind, gzero, 0.25).value;
        CHECK(brute_force_constrained(golden, gind, gzero, 0.25, 400) ==
              Catch::Approx(dual).margin(1e-4));
    }
    SECTION("boundary levels collapse to cycle entropy") {
        CHECK(brute_force_constrained(full, ind, zero, 0.0, 100) == Catch::Approx(0.0).margin(1e-9));
        CHECK(brute_force_constrained(full, ind, zero, 1.0, 100) == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("never exceeds the classical pressure") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            const SftSystem sft = oracles::random_primitive_sft(rng, 3);
            const Potential phi = oracles::random_depth1_potential(rng, sft);
            const Potential psi = oracles::random_depth1_potential(rng, sft);
            const auto [lo, hi] = spectrum_domain(sft, phi);
            const double pressure = classical_pressure(sft, psi).value;
            const double alpha = lo + 0.37 * (hi - lo);
            CHECK(brute_force_constrained(sft, phi, psi, alpha, 100) <= pressure + 1e-9);
        }
    }
    SECTION("scale guard") {
        const SftSystem big = oracles::full_shift(9);
        CHECK_THROWS_AS(
            brute_force_constrained(big, Potential::indicator(big, 0), Potential::zero(big), 0.5, 50),
            OracleScaleExceededError);
    }
    SECTION("out-of-domain level is rejected") {
        CHECK_THROWS_AS(brute_force_constrained(full, ind, zero, 1.2, 50), AlphaOutOfDomainError);
    }
}

TEST_CASE("estimator sandwich trend for the level estimate") {
    const SftSystem full = oracles::full_shift(2);
    const Potential ind = Potential::indicator(full, 1);
    const Potential zero = Potential::zero(full);
    const double target = constrained_pressure(full, ind, zero, 0.3).value;
    // The window mixes levels within delta of alpha, so the estimate
    // approaches the window maximum; the overall trend contracts even
    // though integer window effects wobble between nearby n.
    const double gap10 =
        std::abs(level_set_pressure_estimate(full, ind, zero, 0.3, 0.05, 10).value - target);
    const double gap14 =
        std::abs(level_set_pressure_estimate(full, ind, zero, 0.3, 0.05, 14).value - target);
    const double gap18 =
        std::abs(level_set_pressure_estimate(full, ind, zero, 0.3, 0.05, 18).value - target);
    const double gap22 =
        std::abs(level_set_pressure_estimate(full, ind, zero, 0.3, 0.05, 22).value - target);
    CHECK(gap14 < gap10);
    CHECK(gap18 < gap14);
    CHECK(gap22 < gap14);
    CHECK(gap22 <= 0.06);
}

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sqpe/bounds.hpp"
#include "sqpe/probe.hpp"
#include "sqpe/rng.hpp"

using namespace sqpe;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
const SqueezedThermalProbe kPaperProbe = probe_from_db(5.69, 11.83);
}  // namespace

TEST_SUITE("probe") {

TEST_CASE("vacuum quadrature variance is 1 at every phase") {
    const SqueezedThermalProbe vacuum;
    for (double phi : {0.0, 0.3, 0.7, 1.2, kHalfPi})
        CHECK(quadrature_variance(vacuum, phi) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadrature variance reproduces the calibrated dB noise levels") {
    // Oracle: direct dB -> linear conversion of the measured levels.
    CHECK(quadrature_variance(kPaperProbe, 0.0) ==
          doctest::Approx(std::pow(10.0, -5.69 / 10.0)).epsilon(1e-10));
    CHECK(quadrature_variance(kPaperProbe, kHalfPi) ==
          doctest::Approx(std::pow(10.0, 11.83 / 10.0)).epsilon(1e-10));
    // Spot values quoted to four figures.
    CHECK(quadrature_variance(kPaperProbe, 0.0) == doctest::Approx(0.2698).epsilon(1e-3));
    CHECK(quadrature_variance(kPaperProbe, kHalfPi) == doctest::Approx(15.24).epsilon(1e-3));
}

TEST_CASE("uncertainty product and symmetry properties") {
    for (std::uint64_t k = 0; k < 50; ++k) {
        const double r = 2.0 * (uniform_bits(7, 2 * k) >> 11) * 0x1.0p-53;
        const double n_th = 1.5 * (uniform_bits(7, 2 * k + 1) >> 11) * 0x1.0p-53;
        const SqueezedThermalProbe p{r, n_th};
        const double product = quadrature_variance(p, 0.0) * quadrature_variance(p, kHalfPi);
        const double expected = (2.0 * n_th + 1.0) * (2.0 * n_th + 1.0);
        CHECK(product == doctest::Approx(expected).epsilon(1e-12));
        CHECK(product >= 1.0 - 1e-12);

        const double phi = 1.4 * (uniform_bits(9, k) >> 11) * 0x1.0p-53;
        // Even in phi: exact by construction (only sin^2 phi enters).
        CHECK(quadrature_variance(p, phi) == quadrature_variance(p, -phi));
        // pi-periodic up to argument-reduction rounding.
        CHECK(quadrature_variance(p, phi + std::numbers::pi) ==
              doctest::Approx(quadrature_variance(p, phi)).epsilon(1e-12));
    }
}

TEST_CASE("probe_from_db recovers the generating parameters") {
    SUBCASE("vacuum") {
        const auto p = probe_from_db(0.0, 0.0);
        CHECK(p.r == 0.0);
        CHECK(p.n_th == 0.0);
    }
    SUBCASE("measured squeezing") {
        CHECK(kPaperProbe.r == doctest::Approx(1.0084).epsilon(5e-4));
        CHECK(kPaperProbe.n_th == doctest::Approx(0.5139).epsilon(5e-4));
    }
    SUBCASE("pure 6 dB state") {
        const auto p = probe_from_db(6.0206, 6.0206);
        CHECK(p.r == doctest::Approx(std::numbers::ln2).epsilon(1e-4));
        CHECK(p.n_th == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    SUBCASE("round trip through quadrature_variance") {
        for (auto [sq, as] : {std::pair{5.69, 11.83}, {3.0, 4.5}, {0.5, 0.5}, {6.0206, 6.0206}}) {
            const auto p = probe_from_db(sq, as);
            CHECK(oracles::relative_gap(quadrature_variance(p, 0.0),
                                        std::pow(10.0, -sq / 10.0)) < 1e-12);
            CHECK(oracles::relative_gap(quadrature_variance(p, kHalfPi),
                                        std::pow(10.0, as / 10.0)) < 1e-12);
        }
    }
    SUBCASE("rejects unphysical pairs") {
        CHECK_THROWS_AS(probe_from_db(6.0, 5.0), std::invalid_argument);   // n_th < 0
        CHECK_THROWS_AS(probe_from_db(-3.0, 1.0), std::invalid_argument);  // r < 0
        CHECK_THROWS_AS(probe_from_db(1.0, std::nan("")), std::invalid_argument);
    }
}

TEST_CASE("mean photon number") {
    CHECK(mean_photons({0.0, 0.0}) == 0.0);
    CHECK(mean_photons({0.0, 2.0}) == doctest::Approx(2.0));
    // Recomputed from the rounded dB figures this sits near 3.38; the
    // published energy is 3.30 +- 0.07, so the acceptance window covers
    // both values plus the rounding slack.
    const double n = mean_photons(kPaperProbe);
    CHECK(n > 3.23);
    CHECK(n < 3.45);
    CHECK(n == doctest::Approx(3.3778).epsilon(2e-3));
}

TEST_CASE("Fisher information agrees with the quadrature oracle") {
    CHECK(fisher_info(kPaperProbe, 0.0) == 0.0);
    CHECK(fisher_info({0.3, 1.7}, 0.0) == 0.0);

    // Frozen from the oracle: F(pi/4) for the measured probe.
    const double f_quarter = fisher_info(kPaperProbe, std::numbers::pi / 4.0);
    CHECK(f_quarter == doctest::Approx(1.8633).epsilon(1e-3));
    CHECK(oracles::relative_gap(f_quarter,
                                oracles::fisher_by_quadrature(kPaperProbe, std::numbers::pi / 4.0)) <
          1e-6);

    for (double phi : {0.05, 0.1323, 0.4, 0.9, 1.3, 1.5})
        CHECK(oracles::relative_gap(fisher_info(kPaperProbe, phi),
                                    oracles::fisher_by_quadrature(kPaperProbe, phi)) < 1e-6);
}

TEST_CASE("Fisher information symmetries and thermal independence") {
    const double r = kPaperProbe.r;
    for (double phi : {0.1, 0.45, 0.9, 1.5}) {
        CHECK(fisher_info(kPaperProbe, phi) == fisher_info(kPaperProbe, -phi));
        CHECK(fisher_info(kPaperProbe, phi) ==
              doctest::Approx(fisher_info(kPaperProbe, std::numbers::pi - phi)).epsilon(1e-12));
    }
    for (std::uint64_t k = 0; k < 100; ++k) {
        const double n_th = 3.0 * (uniform_bits(11, k) >> 11) * 0x1.0p-53;
        for (double phi : {0.2, 0.7, 1.1})
            CHECK(fisher_info({r, n_th}, phi) == fisher_info({r, 0.0}, phi));
    }
}

TEST_CASE("Fisher maximum equals the pure-state QFI at the optimal phase") {
    for (double r : {0.3, std::numbers::ln2, kPaperProbe.r}) {
        const SqueezedThermalProbe p{r, 0.37};
        const auto peak = oracles::fisher_grid_max(p, 100'000);
        CHECK(oracles::relative_gap(peak.value, qfi_pure(r)) < 1e-8);
        CHECK(std::abs(peak.phi - optimal_phase(p)) <= kHalfPi / 99'999 + 1e-12);
        // The whole curve stays below the pure QFI.
        for (std::size_t j = 0; j < 200; ++j)
            CHECK(fisher_info(p, kHalfPi * j / 199.0) <= qfi_pure(r) * (1.0 + 1e-12));
    }
}

TEST_CASE("optimal phase") {
    CHECK_THROWS_AS(optimal_phase({0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(optimal_phase({0.0, 1.0}), std::domain_error);
    // r -> 0+ tends to the symmetric limit arctan(1) = pi/4.
    CHECK(optimal_phase({1e-12, 0.0}) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-9));
    CHECK(optimal_phase(kPaperProbe) == doctest::Approx(0.1323).epsilon(1e-3));
    CHECK(optimal_phase(kPaperProbe) > 0.130);
    CHECK(optimal_phase(kPaperProbe) < 0.134);
    // Pure 6 dB probe: frozen from the grid argmax oracle.
    const SqueezedThermalProbe six_db = probe_from_db(6.0206, 6.0206);
    CHECK(optimal_phase(six_db) == doctest::Approx(0.2450).epsilon(1e-3));
    CHECK(std::abs(optimal_phase(six_db) - oracles::fisher_grid_max(six_db, 100'000).phi) <
          2.0 * kHalfPi / 99'999);
}

TEST_CASE("quantum Fisher information") {
    CHECK(qfi_pure(0.0) == 0.0);
    CHECK(qfi_pure(kPaperProbe.r) == doctest::Approx(27.24).epsilon(1e-3));
    CHECK(qfi_coherent(0.0) == 0.0);
    CHECK(qfi_coherent(3.30) == doctest::Approx(13.2));
    CHECK(qfi_coherent(1.0) == doctest::Approx(4.0));
    // Hyperbolic identity 2 sinh^2(2r) = 8 <n>(<n>+1), <n> = sinh^2 r.
    for (std::uint64_t k = 0; k < 100; ++k) {
        const double r = 2.5 * (uniform_bits(13, k) >> 11) * 0x1.0p-53;
        const double n = std::sinh(r) * std::sinh(r);
        CHECK(oracles::relative_gap(qfi_pure(r), 8.0 * n * (n + 1.0)) < 1e-12);
    }
}

TEST_CASE("bounds report") {
    const PhaseGrid grid(256);
    SUBCASE("paper probe at N = 1e4") {
        const auto report = bounds_report(kPaperProbe, 10'000, grid);
        const double n = report.mean_n;
        CHECK(report.sql == doctest::Approx(1.0 / (2e4 * n)).epsilon(1e-12));
        CHECK(report.qcr_coherent == doctest::Approx(1.0 / (4e4 * n)).epsilon(1e-12));
        CHECK(report.ocr == doctest::Approx(3.67e-6).epsilon(2e-2));
        CHECK(report.qcr_pure == doctest::Approx(8.4e-7).epsilon(2e-2));
        // Strict ordering for an impure probe.
        CHECK(report.sql > report.qcr_coherent);
        CHECK(report.qcr_coherent > report.ocr);
        CHECK(report.ocr > report.qcr_pure);
        // Curve endpoints carry no information.
        CHECK(report.fisher_curve.front() == 0.0);
        CHECK(report.fisher_curve.back() < 1e-25);
        for (double f : report.fisher_curve) CHECK(f >= 0.0);
        // Cramer-Rao chain: 1/(N F) >= 1/(N H) everywhere.
        for (double f : report.fisher_curve)
            CHECK(f <= qfi_pure(kPaperProbe.r) * (1.0 + 1e-12));
    }
    SUBCASE("doubling N halves every bound") {
        const auto r1 = bounds_report(kPaperProbe, 5'000, grid);
        const auto r2 = bounds_report(kPaperProbe, 10'000, grid);
        CHECK(r2.sql == doctest::Approx(r1.sql / 2.0).epsilon(1e-12));
        CHECK(r2.qcr_coherent == doctest::Approx(r1.qcr_coherent / 2.0).epsilon(1e-12));
        CHECK(r2.ocr == doctest::Approx(r1.ocr / 2.0).epsilon(1e-12));
        CHECK(r2.qcr_pure == doctest::Approx(r1.qcr_pure / 2.0).epsilon(1e-12));
        CHECK(r2.heisenberg_ref == doctest::Approx(r1.heisenberg_ref / 2.0).epsilon(1e-12));
    }
    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(bounds_report({0.0, 0.0}, 1, grid), std::domain_error);
        CHECK_THROWS_AS(bounds_report(kPaperProbe, 0, grid), std::invalid_argument);
    }
    SUBCASE("pure probe collapses OCR onto the pure QCR") {
        const auto report = bounds_report(probe_from_db(6.0206, 6.0206), 1'000, grid);
        CHECK(oracles::relative_gap(report.ocr, report.qcr_pure) < 1e-9);
    }
}

}  // TEST_SUITE

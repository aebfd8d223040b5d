#include <doctest.h>

#include <cmath>

#include "sel3d/spectral.hpp"
#include "test_helpers.hpp"

using namespace sel3d;
using namespace sel3d::test;

TEST_CASE("grid wavenumbers and dealias mask") {
    TorusGrid grid(16);
    CHECK(grid.wavenumber(0) == 0);
    CHECK(grid.wavenumber(8) == 8);   // Nyquist
    CHECK(grid.wavenumber(9) == -7);
    CHECK(grid.wavenumber(15) == -1);
    // Nyquist row masked, |k| > n/3 masked, low modes kept
    CHECK_FALSE(grid.dealias_keep(grid.index_of_wavevector(8, 0, 0)));
    CHECK_FALSE(grid.dealias_keep(grid.index_of_wavevector(6, 0, 0)));
    CHECK(grid.dealias_keep(grid.index_of_wavevector(5, 0, 0)));
    CHECK(grid.dealias_keep(grid.index_of_wavevector(0, 0, 0)));
    CHECK_THROWS_AS(TorusGrid(7), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(6), std::invalid_argument);
}

TEST_CASE("leray annihilates gradients") {
    TorusGrid grid(16);
    SpectralField g = random_band_limited(grid, 1, 3, 11);
    g.at(0, 0) = {0.0, 0.0}; // zero-mean scalar
    const SpectralField grad = gradient(g);
    const SpectralField projected = leray_project(grad);
    CHECK(max_coeff_abs(projected) <= 1e-13 * std::max(1.0, max_coeff_abs(grad)));
}

TEST_CASE("leray keeps divergence-free fields") {
    TorusGrid grid(16);
    const SpectralField shear = sample_field(grid, 3, [](int c, double, double y, double) {
        return c == 0 ? std::sin(y) : 0.0;
    });
    const SpectralField projected = leray_project(shear);
    CHECK(max_coeff_distance(shear, projected) <= 1e-14);
}

TEST_CASE("leray hand-evaluated single mode") {
    // (I - k k^T/|k|^2) applied to (1,1,0) at k = (1,0,0) gives (0,1,0)
    TorusGrid grid(16);
    SpectralField f(grid, 3);
    f.at_wavevector(0, 1, 0, 0) = {1.0, 0.0};
    f.at_wavevector(1, 1, 0, 0) = {1.0, 0.0};
    f.at_wavevector(0, -1, 0, 0) = {1.0, 0.0};
    f.at_wavevector(1, -1, 0, 0) = {1.0, 0.0};
    const SpectralField p = leray_project(f);
    CHECK(std::abs(p.at_wavevector(0, 1, 0, 0)) <= 1e-15);
    CHECK(p.at_wavevector(1, 1, 0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.at_wavevector(2, 1, 0, 0)) <= 1e-15);
}

TEST_CASE("leray idempotent and divergence-free on random fields") {
    TorusGrid grid(16);
    for (unsigned seed = 0; seed < 5; ++seed) {
        const SpectralField f = random_band_limited(grid, 3, 5, 100 + seed);
        const SpectralField p1 = leray_project(f);
        const SpectralField p2 = leray_project(p1);
        CHECK(max_coeff_distance(p1, p2) <= 1e-14 * std::max(1.0, max_coeff_abs(p1)));
        const double norm = p1.l2_norm() / std::sqrt(grid.volume());
        CHECK(divergence_defect(p1) <= 1e-12 * norm);
        // mean mode unchanged
        for (int c = 0; c < 3; ++c) CHECK(p1.at(c, 0) == f.at(c, 0));
    }
}

TEST_CASE("spectral derivative of single modes is exact") {
    TorusGrid grid(16);
    const SpectralField sinx =
        sample_field(grid, 1, [](int, double x, double, double) { return std::sin(x); });
    const SpectralField dx = derivative(sinx, 0);
    const SpectralField cosx =
        sample_field(grid, 1, [](int, double x, double, double) { return std::cos(x); });
    CHECK(max_coeff_distance(dx, cosx) <= 1e-14);

    SpectralField constant(grid, 1);
    constant.at(0, 0) = {2.5, 0.0};
    CHECK(max_coeff_abs(derivative(constant, 1)) <= 1e-15);
}

TEST_CASE("derivative matches analytic differentiation oracle") {
    TorusGrid grid(16);
    const SpectralField f = sample_field(
        grid, 1, [](int, double x, double y, double) { return std::sin(x) * std::sin(y); });
    const SpectralField dx = derivative(f, 0);
    const SpectralField expected = sample_field(
        grid, 1, [](int, double x, double y, double) { return std::cos(x) * std::sin(y); });
    CHECK(max_coeff_distance(dx, expected) <= 1e-13);
}

TEST_CASE("fractional norm recovers Parseval values") {
    TorusGrid grid(16);
    const SpectralField f = sample_field(grid, 3, [](int c, double x, double, double) {
        return c == 0 ? std::sin(x) : 0.0;
    });
    // ||sin x||_{L2(T^3)} = sqrt(|T^3| / 2) = sqrt(4 pi^3)
    const double expected = std::sqrt(4.0 * pi * pi * pi);
    CHECK(fractional_norm(f, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    // |k| = 1 carries weight 1 at alpha = 1/2
    CHECK(fractional_norm(f, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(fractional_norm(SpectralField::zero(grid, 3), 1.0) == 0.0);
    CHECK_THROWS_AS(fractional_norm(f, -0.1), std::invalid_argument);
}

TEST_CASE("fractional norm monotone in alpha for |k| >= 1 fields") {
    TorusGrid grid(16);
    SpectralField f = random_band_limited(grid, 3, 4, 7);
    for (int c = 0; c < 3; ++c) f.at(c, 0) = {0.0, 0.0};
    double prev = fractional_norm(f, 0.0);
    for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
        const double cur = fractional_norm(f, alpha);
        CHECK(cur >= prev * (1.0 - 1e-12));
        prev = cur;
    }
}

TEST_CASE("dealiased product: multiplying by one is the identity on the band") {
    TorusGrid grid(16);
    SpectralField one(grid, 1);
    one.at(0, 0) = {1.0, 0.0};
    const SpectralField g = random_band_limited(grid, 1, 4, 19);
    const SpectralField prod = dealiased_product(one, g);
    CHECK(max_coeff_distance(prod, g) <= 1e-13 * std::max(1.0, max_coeff_abs(g)));
}

TEST_CASE("dealiased product matches the sin^2 trig identity") {
    TorusGrid grid(16);
    const SpectralField s =
        sample_field(grid, 1, [](int, double x, double, double) { return std::sin(x); });
    const SpectralField prod = dealiased_product(s, s);
    const SpectralField expected = sample_field(
        grid, 1, [](int, double x, double, double) { return 0.5 - 0.5 * std::cos(2.0 * x); });
    CHECK(max_coeff_distance(prod, expected) <= 1e-13);
}

TEST_CASE("dealiased product of masked-band input vanishes") {
    TorusGrid grid(16);
    SpectralField f(grid, 1);
    f.at_wavevector(0, 6, 0, 0) = {1.0, 0.0}; // 6 > 16/3, outside the retained band
    f.enforce_hermitian();
    const SpectralField g = random_band_limited(grid, 1, 4, 23);
    CHECK(max_coeff_abs(dealiased_product(f, g)) <= 1e-15);
    CHECK_THROWS_AS(dealiased_product(f, random_band_limited(TorusGrid(8), 1, 2, 1)),
                    std::invalid_argument);
}

TEST_CASE("hermitian fields have real physical samples") {
    TorusGrid grid(16);
    const SpectralField f = random_band_limited(grid, 3, 5, 31);
    CHECK(f.hermitian_defect() <= 1e-13);
    // roundtrip physical -> spectral -> physical
    const auto phys = f.to_physical_all();
    const SpectralField back = SpectralField::from_physical(grid, 3, phys);
    CHECK(max_coeff_distance(f, back) <= 1e-13 * std::max(1.0, max_coeff_abs(f)));
}

TEST_CASE("laplacian multiplies by -|k|^2") {
    TorusGrid grid(16);
    const SpectralField f = sample_field(
        grid, 1, [](int, double x, double y, double) { return std::sin(x) * std::sin(y); });
    const SpectralField lap = laplacian(f);
    SpectralField expected = f;
    expected *= -2.0; // |k|^2 = 2 on every mode of sin x sin y
    CHECK(max_coeff_distance(lap, expected) <= 1e-13);
}

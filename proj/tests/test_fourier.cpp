#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "mslab/fourier.hpp"
#include "support.hpp"

using namespace mslab;

TEST_CASE("sampling resolves single frequencies exactly") {
    CircleGrid grid(32);
    BoundaryFunction f = BoundaryFunction::sample(grid, [](cplx z) { return z; });
    CHECK(std::abs(f.coefficient(1) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(f.coefficient(0)) < 1e-14);
    CHECK(std::abs(f.coefficient(-1)) < 1e-14);

    BoundaryFunction g = BoundaryFunction::sample(grid, [](cplx z) { return std::conj(z); });
    CHECK(std::abs(g.coefficient(-1) - cplx(1.0)) < 1e-14);
    CHECK(g.negative_leakage() == doctest::Approx(1.0));
}

TEST_CASE("signed coefficient indexing round trips") {
    CircleGrid grid(64);
    std::vector<cplx> coeffs(64, cplx(0.0));
    coeffs[3] = cplx(2.0, -1.0);
    coeffs[62] = cplx(0.5, 0.25); // frequency -2
    BoundaryFunction f = BoundaryFunction::from_coefficients(grid, coeffs);
    CHECK(std::abs(f.coefficient(3) - cplx(2.0, -1.0)) < 1e-15);
    CHECK(std::abs(f.coefficient(-2) - cplx(0.5, 0.25)) < 1e-15);
    for (std::size_t j = 0; j < 64; ++j) {
        const cplx z = grid.node(j);
        const cplx expect = cplx(2.0, -1.0) * z * z * z +
                            cplx(0.5, 0.25) * std::conj(z) * std::conj(z);
        CHECK(std::abs(f.samples()[j] - expect) < 1e-13);
    }
}

TEST_CASE("norm satisfies Parseval") {
    CircleGrid grid(128);
    std::mt19937_64 rng(11);
    BoundaryFunction f = support::random_trig(grid, 20, rng);
    double sum = 0.0;
    for (const cplx c : f.coefficients()) sum += std::norm(c);
    CHECK(f.norm() == doctest::Approx(std::sqrt(sum)).epsilon(1e-13));
}

TEST_CASE("inner product reproduces the Szego pairing") {
    CircleGrid grid(64);
    BoundaryFunction k3 =
        BoundaryFunction::sample(grid, [](cplx z) { return 1.0 / (1.0 - 0.3 * z); });
    BoundaryFunction k5 =
        BoundaryFunction::sample(grid, [](cplx z) { return 1.0 / (1.0 - 0.5 * z); });
    // <k_a, k_b> = 1 / (1 - b conj(a)) for interior kernel parameters.
    CHECK(std::abs(inner_product(k3, k5) - cplx(1.0 / 0.85)) < 1e-13);
    CHECK(std::abs(inner_product(k5, k3) - std::conj(inner_product(k3, k5))) < 1e-15);
}

TEST_CASE("projection onto nonnegative frequencies is idempotent") {
    CircleGrid grid(32);
    BoundaryFunction f = BoundaryFunction::sample(
        grid, [](cplx z) { return 1.0 + z + std::conj(z) * 2.0; });
    BoundaryFunction p = riesz_project(f);
    CHECK(p.negative_leakage() == 0.0);
    CHECK(std::abs(p.coefficient(0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(p.coefficient(1) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(p.coefficient(-1)) == 0.0);
    BoundaryFunction pp = riesz_project(p);
    for (std::size_t j = 0; j < 32; ++j)
        CHECK(std::abs(pp.samples()[j] - p.samples()[j]) < 1e-15);
}

TEST_CASE("pointwise algebra matches coefficient algebra") {
    CircleGrid grid(32);
    BoundaryFunction a = BoundaryFunction::sample(grid, [](cplx z) { return 1.0 + z; });
    BoundaryFunction b = BoundaryFunction::sample(grid, [](cplx z) { return 1.0 - z; });
    BoundaryFunction prod = a.pointwise_product(b);
    CHECK(std::abs(prod.coefficient(0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(prod.coefficient(1)) < 1e-14);
    CHECK(std::abs(prod.coefficient(2) + cplx(1.0)) < 1e-14);

    BoundaryFunction sum = a.plus(b.scaled(cplx(0.0, 1.0)));
    CHECK(std::abs(sum.coefficient(0) - cplx(1.0, 1.0)) < 1e-14);
    CHECK(std::abs(sum.coefficient(1) - cplx(1.0, -1.0)) < 1e-14);

    BoundaryFunction conj2 = BoundaryFunction::sample(
        grid, [](cplx z) { return z * z; }).conjugated();
    CHECK(std::abs(conj2.coefficient(-2) - cplx(1.0)) < 1e-14);
}

TEST_CASE("mixed grids are rejected") {
    BoundaryFunction a = BoundaryFunction::sample(CircleGrid(32), [](cplx z) { return z; });
    BoundaryFunction b = BoundaryFunction::sample(CircleGrid(64), [](cplx z) { return z; });
    CHECK_THROWS_AS(a.pointwise_product(b), GridMismatchError);
    CHECK_THROWS_AS(a.plus(b), GridMismatchError);
    CHECK_THROWS_AS(inner_product(a, b), GridMismatchError);
    CHECK_THROWS_AS(BoundaryFunction(CircleGrid(32), std::vector<cplx>(16)),
                    GridMismatchError);
}

TEST_CASE("transforms invert each other") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> x(64);
    for (cplx& v : x) v = cplx(gauss(rng), gauss(rng));
    std::vector<cplx> y, back;
    fft::forward(x, y);
    fft::backward(y, back);
    for (std::size_t j = 0; j < x.size(); ++j)
        CHECK(std::abs(back[j] / 64.0 - x[j]) < 1e-13);

    std::vector<cplx> delta(16, cplx(0.0));
    delta[0] = 1.0;
    fft::forward(delta, y);
    for (const cplx v : y) CHECK(std::abs(v - cplx(1.0)) < 1e-14);
}

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "mslab/hardy.hpp"

using namespace mslab;

TEST_CASE("admission gates on negative-frequency content") {
    CircleGrid grid(32);
    BoundaryFunction ok =
        BoundaryFunction::sample(grid, [](cplx z) { return 1.0 + 0.5 * z; });
    HardyEvaluator f(ok);
    CHECK(f.norm() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));

    BoundaryFunction bad =
        BoundaryFunction::sample(grid, [](cplx z) { return std::conj(z); });
    CHECK_THROWS_AS(HardyEvaluator{bad}, AnalyticityError);
}

TEST_CASE("interior evaluation matches the generating function") {
    CircleGrid grid(128);
    BoundaryFunction bf =
        BoundaryFunction::sample(grid, [](cplx z) { return 1.0 / (1.0 - 0.5 * z); });
    HardyEvaluator f(bf);
    CHECK(std::abs(cauchy_eval(f, cplx(0.4)) - cplx(1.0 / 0.8)) < 1e-13);
    CHECK(std::abs(cauchy_eval(f, cplx(0.0)) - cplx(1.0)) < 1e-14);
    // Boundary points evaluate the kept series directly.
    const cplx zi(0.0, 1.0);
    CHECK(std::abs(series_eval(f, zi) - 1.0 / (1.0 - 0.5 * zi)) < 1e-13);

    CHECK_THROWS_AS(cauchy_eval(f, cplx(1.0)), DiskDomainError);
    CHECK_THROWS_AS(series_eval(f, cplx(1.5)), DiskDomainError);
}

TEST_CASE("tail norm sums the kept spectrum past the cutoff") {
    CircleGrid grid(128);
    BoundaryFunction bf =
        BoundaryFunction::sample(grid, [](cplx z) { return 1.0 / (1.0 - 0.5 * z); });
    HardyEvaluator f(bf);
    // sum_{k >= 2} 4^{-k} = (1/16)/(3/4).
    CHECK(tail_norm(f, 2) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));
    CHECK(tail_norm(f, 0) == doctest::Approx(f.norm()).epsilon(1e-12));
    CHECK(tail_norm(f, 64) == 0.0);
}

TEST_CASE("outer construction recovers an outer polynomial") {
    CircleGrid grid(64);
    std::vector<double> w(64);
    for (std::size_t j = 0; j < 64; ++j)
        w[j] = std::abs(1.0 - 0.5 * grid.node(j));
    HardyEvaluator f = outer_from_modulus(grid, w);

    // 1 - z/2 is outer and positive at 0, so it is the unique answer.
    for (std::size_t j = 0; j < 64; ++j)
        CHECK(std::abs(std::abs(f.source().samples()[j]) - w[j]) < 1e-12);
    CHECK(std::abs(f.source().coefficient(0) - cplx(1.0)) < 1e-10);
    CHECK(std::abs(f.source().coefficient(1) - cplx(-0.5)) < 1e-10);
    CHECK(std::abs(f.source().coefficient(2)) < 1e-10);
    CHECK(cauchy_eval(f, cplx(0.0)).real() > 0.0);
    CHECK(std::abs(cauchy_eval(f, cplx(0.0)).imag()) < 1e-12);
}

TEST_CASE("outer construction rejects degenerate moduli") {
    CircleGrid grid(32);
    std::vector<double> w(32, 1.0);
    w[7] = 1e-9;
    CHECK_THROWS_AS(outer_from_modulus(grid, w), DegenerateModulusError);
    CHECK_THROWS_AS(outer_from_modulus(grid, std::vector<double>(16, 1.0)),
                    GridMismatchError);
}

TEST_CASE("grid policy tracks the deepest zero") {
    CHECK(required_grid_size(0.0) == 16);
    CHECK(required_grid_size(0.5) == 64);
    CHECK(required_grid_size(0.99609375) == 8192);
    CHECK_THROWS_AS(required_grid_size(0.99999), ResolutionError);
}

TEST_CASE("top octave magnitude reads the resolution indicator") {
    CircleGrid grid(64);
    std::vector<cplx> coeffs(64, cplx(0.0));
    coeffs[20] = cplx(0.25);
    HardyEvaluator f{BoundaryFunction::from_coefficients(grid, coeffs)};
    CHECK(f.top_octave_magnitude() == doctest::Approx(0.25));

    std::vector<cplx> low(64, cplx(0.0));
    low[10] = cplx(1.0);
    HardyEvaluator g{BoundaryFunction::from_coefficients(grid, low)};
    CHECK(g.top_octave_magnitude() == 0.0);
}

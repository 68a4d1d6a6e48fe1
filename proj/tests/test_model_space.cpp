#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "mslab/hardy.hpp"
#include "mslab/model_space.hpp"
#include "support.hpp"

using namespace mslab;

namespace {

std::shared_ptr<const TMBasis> make_basis(std::vector<cplx> zeros, std::size_t grid) {
    return std::make_shared<const TMBasis>(InnerFunction::blaschke(std::move(zeros)),
                                           CircleGrid(grid));
}

} // namespace

TEST_CASE("monomial basis for a pure power of z") {
    auto basis = make_basis({cplx(0.0), cplx(0.0)}, 32);
    REQUIRE(basis->degree() == 2);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(std::abs(basis->sample_table()(j, 0) - cplx(1.0)) < 1e-14);
        CHECK(std::abs(basis->sample_table()(j, 1) - basis->grid().node(j)) < 1e-14);
    }
    CHECK(std::abs(basis->eval_basis(0, cplx(0.3, 0.1)) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(basis->eval_basis(1, cplx(0.3, 0.1)) - cplx(0.3, 0.1)) < 1e-15);
    CHECK((basis->gram() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("origin zeros are ordered first") {
    auto basis = make_basis({cplx(0.5), cplx(0.0)}, 64);
    REQUIRE(basis->ordered_zeros().size() == 2);
    CHECK(basis->ordered_zeros()[0] == cplx(0.0));
    CHECK(basis->ordered_zeros()[1] == cplx(0.5));
    for (std::size_t j = 0; j < 8; ++j)
        CHECK(std::abs(basis->sample_table()(j, 0) - cplx(1.0)) < 1e-14);
}

TEST_CASE("sampled frame is orthonormal at the policy grid") {
    const std::vector<cplx> zeros{cplx(0.0), cplx(0.3, 0.2), cplx(0.0, -0.5),
                                  cplx(0.7), cplx(-0.25)};
    auto basis = make_basis(zeros, required_grid_size(0.7));
    const Eigen::MatrixXcd g = basis->gram();
    CHECK((g - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("basis construction rejects degenerate inner functions") {
    CHECK_THROWS_AS(TMBasis(InnerFunction::atom(cplx(1.0), 1.0), CircleGrid(32)),
                    std::invalid_argument);
    CHECK_THROWS_AS(TMBasis(InnerFunction::blaschke({}), CircleGrid(32)),
                    std::invalid_argument);
}

TEST_CASE("kernel evaluation and its removable point") {
    InnerFunction z2 = InnerFunction::blaschke({cplx(0.0), cplx(0.0)});
    // (1 - conj(I(1/2)) I(1/4)) / (1 - z/8) with I = z^2.
    CHECK(std::abs(kernel_eval(z2, cplx(0.5), cplx(0.25)) - cplx(0.984375 / 0.875)) <
          1e-14);
    CHECK(kernel_eval(z2, cplx(0.5), cplx(0.5)).real() ==
          doctest::Approx(kernel_norm_sq(z2, cplx(0.5))).epsilon(1e-14));
    CHECK(std::abs(kernel_eval(z2, cplx(0.5), cplx(0.5 + 1e-9)) - cplx(1.25)) < 1e-6);
    CHECK_THROWS_AS(kernel_eval(z2, cplx(1.0), cplx(0.0)), DiskDomainError);
}

TEST_CASE("kernels reproduce point evaluation") {
    const std::vector<cplx> zeros{cplx(0.0), cplx(0.3, 0.2), cplx(0.0, -0.5),
                                  cplx(0.7), cplx(-0.25)};
    auto basis = make_basis(zeros, 128);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mod(0.0, 0.6);
    std::uniform_real_distribution<double> arg(0.0, 6.283185307179586);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd c(5);
        for (int k = 0; k < 5; ++k) c(k) = cplx(gauss(rng), gauss(rng));
        ModelSpaceElement f(basis, c);
        const cplx lambda = std::polar(mod(rng), arg(rng));
        const BoundaryFunction kernel = BoundaryFunction::sample(
            basis->grid(),
            [&](cplx z) { return kernel_eval(basis->inner(), lambda, z); });
        const cplx paired = inner_product(f.samples(), kernel);
        CHECK(std::abs(paired - eval_element(f, lambda)) < 1e-12 * f.norm());
    }
}

TEST_CASE("boundary kernels collect conjugated basis values") {
    auto basis = make_basis({cplx(0.0), cplx(0.0)}, 32);
    ModelSpaceElement k1 = boundary_kernel(basis, cplx(1.0));
    CHECK(std::abs(k1.coeffs()(0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(k1.coeffs()(1) - cplx(1.0)) < 1e-14);

    ModelSpaceElement ki = boundary_kernel(basis, cplx(0.0, 1.0));
    CHECK(std::abs(ki.coeffs()(0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(ki.coeffs()(1) - cplx(0.0, -1.0)) < 1e-14);

    // Value at its own point is the basis energy sum, here 2.
    CHECK(std::abs(eval_element(k1, cplx(1.0)) - cplx(2.0)) < 1e-12);

    CHECK_THROWS_AS(boundary_kernel(basis, cplx(0.5)), DiskDomainError);
}

TEST_CASE("projection keeps the space and kills its complements") {
    auto basis = make_basis({cplx(0.0), cplx(0.0)}, 32);
    BoundaryFunction mixed = BoundaryFunction::sample(basis->grid(), [](cplx z) {
        return 1.0 + 2.0 * z + z * z * z + std::conj(z);
    });
    ModelSpaceElement p = project(basis, mixed);
    CHECK(std::abs(p.coeffs()(0) - cplx(1.0)) < 1e-13);
    CHECK(std::abs(p.coeffs()(1) - cplx(2.0)) < 1e-13);

    BoundaryFunction wrong = BoundaryFunction::sample(CircleGrid(64), [](cplx z) {
        return z;
    });
    CHECK_THROWS_AS(project(basis, wrong), GridMismatchError);
}

TEST_CASE("coordinates are isometric") {
    auto basis = make_basis({cplx(0.0), cplx(0.4, -0.3)}, 64);
    Eigen::VectorXcd c(2);
    c << cplx(3.0), cplx(0.0, 4.0);
    ModelSpaceElement x(basis, c);
    CHECK(x.norm() == doctest::Approx(5.0));
    CHECK(x.samples().norm() == doctest::Approx(5.0).epsilon(1e-12));
    // Interior evaluation agrees with the series of the boundary samples.
    HardyEvaluator h(x.samples());
    const cplx z(0.1, 0.3);
    CHECK(std::abs(eval_element(x, z) - cauchy_eval(h, z)) < 1e-10);
}

#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "mslab/nearly_invariant.hpp"
#include "support.hpp"

using namespace mslab;

namespace {

HardyEvaluator constant(const CircleGrid& grid, cplx value) {
    return HardyEvaluator(
        BoundaryFunction(grid, std::vector<cplx>(grid.size(), value)));
}

SarasonPair trivial_pair(const CircleGrid& grid) {
    return SarasonPair(constant(grid, cplx(1.0)), constant(grid, cplx(0.0)));
}

// a = 0.45 (1 - z); b the outer completion of sqrt(1 - |a|^2). The
// multiplier g = a / (1 - I b) then vanishes at z = 1.
SarasonPair vanishing_pair(const CircleGrid& grid) {
    auto a = BoundaryFunction::sample(grid, [](cplx z) { return 0.45 * (1.0 - z); });
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        w[j] = std::sqrt(std::max(0.0, 1.0 - std::norm(a.samples()[j])));
    HardyEvaluator b = outer_from_modulus(grid, w);
    return SarasonPair(HardyEvaluator(std::move(a)), std::move(b));
}

InnerFunction test_inner() {
    return InnerFunction::blaschke({cplx(0.0), cplx(0.5)});
}

std::shared_ptr<const NearlyInvariantSpace> vanishing_space(std::size_t initial = 0) {
    BuildOptions options;
    options.initial_grid = initial;
    return build_space(test_inner(), vanishing_pair, options);
}

} // namespace

TEST_CASE("pair gates: unit circle identity and the closed ball") {
    CircleGrid grid(64);
    SarasonPair ok = trivial_pair(grid);
    CHECK(ok.unit_defect() == 0.0);

    CHECK_THROWS_AS(SarasonPair(constant(grid, cplx(1.0)), constant(grid, cplx(0.1))),
                    ValidationError);
    CHECK_THROWS_AS(SarasonPair(constant(grid, cplx(1.2)), constant(grid, cplx(0.0))),
                    ValidationError);
    CHECK_THROWS_AS(
        SarasonPair(constant(grid, cplx(1.0)), constant(CircleGrid(128), cplx(0.0))),
        GridMismatchError);
}

TEST_CASE("trivial pair builds the model space itself") {
    auto space = build_space(test_inner(), trivial_pair, {});
    CHECK(space->grid_size() == 64); // policy grid for a deepest zero at 1/2
    CHECK(space->g_zero() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(space->min_denominator() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(space->isometry_residual() < 1e-12);
    CHECK(space->norm_defect() < 1e-12);
    CHECK_FALSE(space->rotated());
}

TEST_CASE("vanishing pair settles deterministically") {
    auto space = vanishing_space();
    CHECK(space->grid_size() == 1024);
    // g(0) = a(0) because the inner function vanishes at the origin.
    CHECK(space->g_zero() == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(space->min_denominator() ==
          doctest::Approx(0.08445239300430235).epsilon(1e-9));
    CHECK(space->isometry_residual() < 1e-8);
    CHECK(space->norm_defect() < 1e-8);
}

TEST_CASE("degenerate builds are refused") {
    // b = 1 makes 1 - I b vanish at the node z = 1 for I = z^2.
    PairSampler unit_b = [](const CircleGrid& grid) {
        return SarasonPair(constant(grid, cplx(0.0)), constant(grid, cplx(1.0)));
    };
    CHECK_THROWS_AS(
        build_space(InnerFunction::blaschke({cplx(0.0), cplx(0.0)}), unit_b, {}),
        DegenerateDenominatorError);

    // Single-shot build on a grid too coarse for the frame to be orthonormal.
    CHECK_THROWS_AS(build_space(test_inner(), trivial_pair(CircleGrid(16))),
                    ValidationError);

    // The basis needs an origin zero for the kernel-at-zero frame anchor.
    CHECK_THROWS_AS(
        build_space(InnerFunction::blaschke({cplx(0.5)}), trivial_pair, {}),
        std::invalid_argument);
}

TEST_CASE("a rotation-only pair builds a space whose bound degenerates") {
    // a = z: every element of z K_I vanishes at the origin, so the extremal
    // bound collapses to zero; the build normalizes the junk phase away.
    PairSampler rotation = [](const CircleGrid& grid) {
        auto a = BoundaryFunction::sample(grid, [](cplx z) { return z; });
        return SarasonPair(HardyEvaluator(std::move(a)), constant(grid, cplx(0.0)));
    };
    auto space = build_space(test_inner(), rotation, {});
    CHECK(std::abs(space->g_zero()) < 1e-14);
    CHECK(space->isometry_residual() < 1e-12);
    ExtremalityReport rep = extremality_check(*space, 200, 5);
    CHECK_FALSE(rep.violation);
    CHECK(rep.max_attained <= 1e-12);
}

TEST_CASE("projection and evaluation agree on frame elements") {
    auto space = vanishing_space();
    const std::size_t dim = space->basis()->degree();
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    c(1) = cplx(1.0);
    BoundaryFunction f = samples_M(*space, c);
    Eigen::VectorXcd back = project_M(*space, f);
    CHECK((back - c).norm() < 1e-8);
    const cplx z(0.3, -0.2);
    CHECK(std::abs(eval_M(*space, c, z) -
                   cauchy_eval(HardyEvaluator(samples_M(*space, c)), z)) < 1e-9);
}

TEST_CASE("kernels of the subspace reproduce evaluation") {
    auto space = vanishing_space();
    std::mt19937_64 rng(71);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mod(0.0, 0.8);
    std::uniform_real_distribution<double> arg(0.0, 6.283185307179586);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd c(2);
        c << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng));
        c /= c.norm();
        const cplx lambda = std::polar(mod(rng), arg(rng));
        const cplx paired =
            inner_product(samples_M(*space, c), kernel_samples_M(*space, lambda));
        CHECK(std::abs(paired - eval_M(*space, c, lambda)) < 1e-9);
    }
    // Removable diagonal point of the kernel.
    const cplx lambda(0.41, 0.2);
    const cplx gl = space->g_at(lambda);
    CHECK(std::abs(kernel_M(*space, lambda, lambda) -
                   std::norm(gl) * kernel_norm_sq(space->inner(), lambda)) <
          1e-10 * std::abs(kernel_M(*space, lambda, lambda)));
    CHECK_THROWS_AS(kernel_M(*space, cplx(1.0), cplx(0.0)), DiskDomainError);
}

TEST_CASE("compressions act in the transported frame") {
    auto space = vanishing_space();
    BoundaryFunction z = BoundaryFunction::sample(space->grid(),
                                                  [](cplx w) { return w; });
    OperatorMatrix am = assemble_AM(*space, z);
    CHECK(am.frame == Frame::transported);
    CHECK((shift_M(*space).frame == Frame::transported));

    BoundaryFunction wrong = BoundaryFunction::sample(CircleGrid(64),
                                                      [](cplx w) { return w; });
    CHECK_THROWS_AS(assemble_AM(*space, wrong), GridMismatchError);
}

TEST_CASE("the compression equals the weighted model compression") {
    auto space = vanishing_space();
    std::mt19937_64 rng(73);
    const CircleGrid& grid = space->grid();
    std::vector<BoundaryFunction> symbols;
    symbols.push_back(BoundaryFunction::sample(grid, [](cplx) { return cplx(1.0); }));
    symbols.push_back(BoundaryFunction::sample(grid, [](cplx w) { return w; }));
    symbols.push_back(
        BoundaryFunction::sample(grid, [](cplx w) { return std::conj(w); }));
    symbols.push_back(support::random_trig(grid, 5, rng));
    for (const BoundaryFunction& phi : symbols)
        CHECK(spatial_isomorphism_residual(*space, phi) < 1e-6);

    // The trivial pair gives |g|^2 = 1, where the residual is pure rounding.
    auto model = build_space(test_inner(), trivial_pair, {});
    BoundaryFunction zz = BoundaryFunction::sample(model->grid(),
                                                   [](cplx w) { return w; });
    CHECK(spatial_isomorphism_residual(*model, zz) < 1e-10);
}

TEST_CASE("conjugation transports without changing its matrix") {
    auto space = vanishing_space();
    ConjugationMap cg = conjugation_g(*space);
    ConjugationMap cm = conjugation(space->basis());
    CHECK(cg.frame == Frame::transported);
    CHECK((cg.j - cm.j).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cg.involution_residual() < 1e-10);
}

TEST_CASE("boundary rank-one transports as well") {
    auto space = vanishing_space();
    OperatorMatrix w = selfadjoint_rank_one_M(*space, cplx(1.0));
    CHECK(w.frame == Frame::transported);
    CHECK(spectral_norm(w.entries - w.entries.adjoint().eval()) < 1e-12);
}

TEST_CASE("backward-shift tails on a monomial model space") {
    auto space = build_space(
        InnerFunction::blaschke({cplx(0.0), cplx(0.0)}),
        trivial_pair, {});
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2);
    c(1) = cplx(1.0);
    CHECK(q_tail(*space, 0, c) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_tail(*space, 1, c) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_tail(*space, 2, c) < 1e-12);
}

TEST_CASE("tails decrease monotonically") {
    auto space = vanishing_space();
    std::mt19937_64 rng(79);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd c(2);
    c << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng));
    double prev = q_tail(*space, 0, c);
    for (std::size_t n = 1; n <= 4; ++n) {
        const double q = q_tail(*space, n, c);
        CHECK(q <= prev + 1e-12);
        prev = q;
    }
}

TEST_CASE("extremal bound holds and the multiplier attains it") {
    auto space = build_space(test_inner(), trivial_pair, {});
    ExtremalityReport rep = extremality_check(*space, 500, 97);
    CHECK(rep.trials == 500);
    CHECK(rep.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(rep.violation);
    CHECK(rep.attained_by_multiplier);
    CHECK(rep.max_attained <= rep.bound + 1e-9);

    auto shifted = vanishing_space();
    ExtremalityReport rep2 = extremality_check(*shifted, 500, 97);
    CHECK_FALSE(rep2.violation);
    CHECK(rep2.bound == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(rep2.max_attained <= rep2.bound + 1e-9);
}

TEST_CASE("a half-percent multiplier perturbation trips the frame gate") {
    auto basis = std::make_shared<const TMBasis>(
        InnerFunction::blaschke({cplx(0.0), cplx(0.0)}), CircleGrid(64));
    // Gram of {g e_k} is the compression of |g|^2; g = 1 gives the identity.
    BoundaryFunction clean = BoundaryFunction::sample(
        basis->grid(), [](cplx) { return cplx(1.0); });
    const Eigen::MatrixXcd g0 = assemble(basis, clean).entries;
    CHECK(spectral_norm(g0 - Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);

    BoundaryFunction bumped = BoundaryFunction::sample(basis->grid(), [](cplx z) {
        const double c = (z + std::conj(z)).real() / 2.0;
        const double m = 1.0 + 0.005 * c;
        return cplx(m * m);
    });
    const Eigen::MatrixXcd g1 = assemble(basis, bumped).entries;
    CHECK(spectral_norm(g1 - Eigen::MatrixXcd::Identity(2, 2)) > 1e-4);
}

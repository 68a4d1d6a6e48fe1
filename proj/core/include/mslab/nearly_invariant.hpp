#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>

#include <Eigen/Core>

#include "mslab/disk_geometry.hpp"
#include "mslab/fourier.hpp"
#include "mslab/hardy.hpp"
#include "mslab/inner_function.hpp"
#include "mslab/model_space.hpp"
#include "mslab/truncated_toeplitz.hpp"

namespace mslab {

// Coefficient pair (a, b) of an isometric multiplier: both in the closed
// unit ball of H-infinity with |a|^2 + |b|^2 = 1 on the circle.
class SarasonPair {
public:
    SarasonPair(HardyEvaluator a, HardyEvaluator b);

    const HardyEvaluator& a() const { return a_; }
    const HardyEvaluator& b() const { return b_; }
    const CircleGrid& grid() const { return a_.source().grid(); }

    // Largest grid deviation of |a|^2 + |b|^2 from 1.
    double unit_defect() const { return unit_defect_; }

private:
    HardyEvaluator a_;
    HardyEvaluator b_;
    double unit_defect_ = 0.0;
};

// Subspace g K_I for g = a / (1 - I b), carrying the model-space basis on
// the settled grid, the multiplier samples, and the transported frame
// {g e_k}. Immutable after construction.
class NearlyInvariantSpace {
public:
    const InnerFunction& inner() const { return inner_; }
    const std::shared_ptr<const TMBasis>& basis() const { return basis_; }
    const SarasonPair& pair() const { return *pair_; }
    const HardyEvaluator& g() const { return g_; }
    const CircleGrid& grid() const { return basis_->grid(); }
    std::size_t grid_size() const { return basis_->grid().size(); }

    // Value at the origin after extremal normalization; real and positive.
    double g_zero() const { return g_zero_; }
    // Whether normalization had to rotate the pair by a unimodular constant.
    bool rotated() const { return rotated_; }
    // Smallest grid modulus of 1 - I b encountered during the build.
    double min_denominator() const { return min_denominator_; }
    // Largest deviation of the Gram matrix of {g e_k} from the identity.
    double isometry_residual() const { return isometry_residual_; }
    // Deviation of the multiplier norm from 1.
    double norm_defect() const { return norm_defect_; }

    // N x n table of samples of g e_k.
    const Eigen::MatrixXcd& m_table() const { return m_table_; }

    // Value of g at an interior point, via the coefficient series.
    cplx g_at(cplx lambda) const { return cauchy_eval(g_, lambda); }

    // Internal: assembled by the build functions after gate validation.
    NearlyInvariantSpace(InnerFunction inner, std::shared_ptr<const TMBasis> basis,
                         std::shared_ptr<const SarasonPair> pair, HardyEvaluator g,
                         bool rotated, double min_denominator);

private:

    InnerFunction inner_;
    std::shared_ptr<const TMBasis> basis_;
    std::shared_ptr<const SarasonPair> pair_;
    HardyEvaluator g_;
    Eigen::MatrixXcd m_table_;
    double g_zero_ = 0.0;
    bool rotated_ = false;
    double min_denominator_ = 0.0;
    double isometry_residual_ = 0.0;
    double norm_defect_ = 0.0;
};

// Produces the pair on a requested grid; called repeatedly as the build
// refines resolution.
using PairSampler = std::function<SarasonPair(const CircleGrid&)>;

struct BuildOptions {
    // 0 selects the resolution-policy grid for the inner function.
    std::size_t initial_grid = 0;
    std::size_t max_grid = grid_size_cap;
    // Optional convergence gate evaluated on the candidate space; returning
    // false doubles the grid like an unresolved build.
    std::function<bool(const NearlyInvariantSpace&)> extra_gate;
};

// Builds the space, doubling the grid until the analyticity, unit-norm and
// orthonormality gates settle. Throws DegenerateDenominatorError when
// 1 - I b comes within 1e-6 of zero, NonExtremalError when the settled
// multiplier norm deviates from 1 beyond 1e-6, ResolutionError at the cap.
std::shared_ptr<const NearlyInvariantSpace>
build_space(const InnerFunction& inner, const PairSampler& sampler,
            const BuildOptions& options = {});

// Single-shot build on the pair's own grid; gate failures throw instead of
// refining.
std::shared_ptr<const NearlyInvariantSpace> build_space(const InnerFunction& inner,
                                                        SarasonPair pair);

// Coefficients of the orthogonal projection onto the space in the frame
// {g e_k}: entries <f, g e_k>.
Eigen::VectorXcd project_M(const NearlyInvariantSpace& space, const BoundaryFunction& f);

// Boundary samples of the element with the given frame coefficients.
BoundaryFunction samples_M(const NearlyInvariantSpace& space,
                           const Eigen::VectorXcd& coeffs);

// Interior evaluation of the element with the given frame coefficients.
cplx eval_M(const NearlyInvariantSpace& space, const Eigen::VectorXcd& coeffs,
            cplx z);

// Reproducing kernel conj(g(lambda)) g(z) k_lambda of the space; |lambda| < 1
// and |z| <= 1 (boundary z evaluated through the coefficient series).
cplx kernel_M(const NearlyInvariantSpace& space, cplx lambda, cplx z);

// Grid samples of the reproducing kernel of M at an interior point; built
// from the stored multiplier samples, so it costs one pass over the grid.
BoundaryFunction kernel_samples_M(const NearlyInvariantSpace& space, cplx lambda);

// Compression of multiplication by the symbol to the space, in the
// transported frame: entries <phi g e_j, g e_k>.
OperatorMatrix assemble_AM(const NearlyInvariantSpace& space,
                           const BoundaryFunction& symbol);

// Operator-norm gap between the compression on the space and the model-space
// compression of |g|^2 phi; the spatial isomorphism makes it vanish.
double spatial_isomorphism_residual(const NearlyInvariantSpace& space,
                                    const BoundaryFunction& symbol);

// Conjugation of the space in the transported frame; the matrix coincides
// with the model-space conjugation.
ConjugationMap conjugation_g(const NearlyInvariantSpace& space);

// Compressed shift on the space in the transported frame.
OperatorMatrix shift_M(const NearlyInvariantSpace& space);

// Self-adjoint rank-one operator attached to a boundary point.
OperatorMatrix selfadjoint_rank_one_M(const NearlyInvariantSpace& space, cplx zeta);

// Norm of the N-th backward-shift tail of the element with the given frame
// coefficients; equals the Fourier tail of the transported element.
double q_tail(const NearlyInvariantSpace& space, std::size_t n,
              const Eigen::VectorXcd& coeffs);

struct ExtremalityReport {
    std::size_t trials = 0;
    // Largest real part at the origin over sampled unit-norm elements.
    double max_attained = 0.0;
    // The bound g(0).
    double bound = 0.0;
    bool attained_by_multiplier = false;
    bool violation = false;
};

// Monte-Carlo check that Re f(0) over unit-norm elements of the space never
// exceeds g(0), which the multiplier itself attains.
ExtremalityReport extremality_check(const NearlyInvariantSpace& space,
                                    std::size_t trials, std::uint64_t seed);

} // namespace mslab

#pragma once

#include <complex>
#include <cstddef>
#include <memory>

#include <Eigen/Core>

#include "mslab/fourier.hpp"
#include "mslab/model_space.hpp"

namespace mslab {

// Coordinate frame a matrix acts in: "model" for Takenaka-Malmquist
// coordinates of the model space itself, "transported" for the image
// frame of a nearly invariant subspace (coordinates pulled back by the
// canonical isometry). Mixing frames is a caller error.
enum class Frame { model, transported };

// Dense matrix of an operator in a tagged coordinate frame.
struct OperatorMatrix {
    std::shared_ptr<const TMBasis> basis;
    Frame frame = Frame::model;
    Eigen::MatrixXcd entries;
};

// Antilinear conjugation in matrix form; acts as coeffs -> j * conj(coeffs).
struct ConjugationMap {
    std::shared_ptr<const TMBasis> basis;
    Frame frame = Frame::model;
    Eigen::MatrixXcd j;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& coeffs) const {
        return j * coeffs.conjugate();
    }
    // Deviation of the squared map from the identity.
    double involution_residual() const;
};

// Largest singular value of a dense matrix.
double spectral_norm(const Eigen::MatrixXcd& m);

// Compression of multiplication by the symbol to the model space:
// entries M_{kj} = <phi e_j, e_k> on the basis grid.
OperatorMatrix assemble(const std::shared_ptr<const TMBasis>& basis,
                        const BoundaryFunction& symbol);

// Compression of multiplication by the independent variable.
OperatorMatrix compressed_shift(const std::shared_ptr<const TMBasis>& basis);

// Matrix of the canonical conjugation f -> conj(z f) I on the basis grid.
ConjugationMap conjugation(const std::shared_ptr<const TMBasis>& basis);

// Operator-norm deviation of C A C from the adjoint of A.
double complex_symmetry_residual(const OperatorMatrix& a, const ConjugationMap& c);
double complex_symmetry_residual(const std::shared_ptr<const TMBasis>& basis,
                                 const BoundaryFunction& symbol);

// Operator norm of the compression; near zero exactly when the symbol
// splits as I p + conj(I q) with p, q in the Hardy space.
double zero_symbol_residual(const std::shared_ptr<const TMBasis>& basis,
                            const BoundaryFunction& symbol);

// Defect A - A_z A A_z^* decomposed as phi1 (x) k_0 + k_0 (x) phi2,
// with the gauge <phi2, k_0> = 0 pinning the splitting.
struct SarasonDefect {
    OperatorMatrix defect;
    std::size_t rank_estimate = 0;
    ModelSpaceElement phi1;
    ModelSpaceElement phi2;
    // Norm of the part of the defect outside the rank-two template,
    // relative thresholds applied by callers.
    double reconstruction_residual = 0.0;
};

// Requires an origin zero (so the kernel at 0 is the first basis vector).
// Throws ValidationError if the defect rank exceeds two.
SarasonDefect sarason_defect(const std::shared_ptr<const TMBasis>& basis,
                             const BoundaryFunction& symbol);

enum class RankOneKind { kernel_conjugate_kernel, conjugate_kernel_kernel, boundary };

// Rank-one operators attached to a point: k (x) Ck and Ck (x) k for an
// interior point, k_zeta (x) k_zeta for a unimodular point.
OperatorMatrix rank_one(const std::shared_ptr<const TMBasis>& basis, RankOneKind kind,
                        cplx point);

// Apply a matrix to an element; frames must agree with the element's use.
ModelSpaceElement apply(const OperatorMatrix& op, const ModelSpaceElement& x);

} // namespace mslab

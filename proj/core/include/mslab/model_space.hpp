#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "mslab/disk_geometry.hpp"
#include "mslab/errors.hpp"
#include "mslab/fourier.hpp"
#include "mslab/inner_function.hpp"

namespace mslab {

// Takenaka-Malmquist orthonormal basis of the model space attached to a
// finite Blaschke product. Zeros are reordered so origin zeros come first;
// with an origin zero present, e_1 == 1 and the kernel at 0 is e_1.
class TMBasis {
public:
    // Rejects inner functions with singular atoms (infinite-dimensional
    // model space) and degree-zero products (trivial space).
    TMBasis(InnerFunction inner, CircleGrid grid);

    const InnerFunction& inner() const { return inner_; }
    const CircleGrid& grid() const { return grid_; }
    std::size_t degree() const { return zeros_.size(); }

    // Zeros in basis order (origin zeros first, otherwise input order).
    const std::vector<cplx>& ordered_zeros() const { return zeros_; }

    // N x n table; column k holds e_{k+1} sampled on the grid.
    const Eigen::MatrixXcd& sample_table() const { return table_; }

    // e_{k+1}(z) for |z| <= 1, evaluated from the closed form.
    cplx eval_basis(std::size_t k, cplx z) const;

    // Gram matrix of the sampled basis; identity up to aliasing.
    Eigen::MatrixXcd gram() const;

private:
    InnerFunction inner_;
    CircleGrid grid_;
    std::vector<cplx> zeros_;
    Eigen::MatrixXcd table_;
};

// Element of a model space in Takenaka-Malmquist coordinates. Coordinates
// are isometric: norm() is the l2 norm of the coefficient vector.
class ModelSpaceElement {
public:
    ModelSpaceElement(std::shared_ptr<const TMBasis> basis, Eigen::VectorXcd coeffs);

    const TMBasis& basis() const { return *basis_; }
    const std::shared_ptr<const TMBasis>& basis_ptr() const { return basis_; }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    double norm() const { return coeffs_.norm(); }

    // Boundary samples on the basis grid.
    BoundaryFunction samples() const;

private:
    std::shared_ptr<const TMBasis> basis_;
    Eigen::VectorXcd coeffs_;
};

// Reproducing kernel (1 - conj(I(lambda)) I(z)) / (1 - conj(lambda) z) of
// the model space; the removable point z == lambda returns kernel_norm_sq.
// Requires |lambda| < 1 and |z| <= 1.
cplx kernel_eval(const InnerFunction& inner, cplx lambda, cplx z);

// Boundary reproducing kernel at a unimodular point: coefficients are
// conj(e_k(zeta)). Finite Blaschke products only; every boundary point
// carries an angular derivative then.
ModelSpaceElement boundary_kernel(const std::shared_ptr<const TMBasis>& basis, cplx zeta);

// Orthogonal projection onto the model space in basis coordinates:
// c_k = <f, e_k>. Requires f to live on the basis grid.
ModelSpaceElement project(const std::shared_ptr<const TMBasis>& basis,
                          const BoundaryFunction& f);

// Pointwise evaluation sum c_k e_k(z) for |z| <= 1.
cplx eval_element(const ModelSpaceElement& x, cplx z);

} // namespace mslab

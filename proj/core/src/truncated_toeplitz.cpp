#include "mslab/truncated_toeplitz.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "mslab/errors.hpp"

namespace mslab {

namespace {

void require_basis(const std::shared_ptr<const TMBasis>& basis) {
    if (!basis)
        throw std::invalid_argument("operation requires a basis");
}

Eigen::VectorXcd kernel_coords(const TMBasis& basis, cplx lambda) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.degree()));
    for (std::size_t k = 0; k < basis.degree(); ++k)
        v(static_cast<Eigen::Index>(k)) = std::conj(basis.eval_basis(k, lambda));
    return v;
}

} // namespace

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0)
        return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double ConjugationMap::involution_residual() const {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(j.rows(), j.cols());
    return spectral_norm(j * j.conjugate() - id);
}

OperatorMatrix assemble(const std::shared_ptr<const TMBasis>& basis,
                        const BoundaryFunction& symbol) {
    require_basis(basis);
    if (!(symbol.grid() == basis->grid()))
        throw GridMismatchError("symbol must live on the basis grid");
    const Eigen::Map<const Eigen::VectorXcd> phi(symbol.samples().data(),
                                                 static_cast<Eigen::Index>(symbol.size()));
    const Eigen::MatrixXcd& table = basis->sample_table();
    Eigen::MatrixXcd m = (table.adjoint() * phi.asDiagonal() * table) /
                         static_cast<double>(symbol.size());
    return OperatorMatrix{basis, Frame::model, std::move(m)};
}

OperatorMatrix compressed_shift(const std::shared_ptr<const TMBasis>& basis) {
    require_basis(basis);
    return assemble(basis,
                    BoundaryFunction::sample(basis->grid(), [](cplx z) { return z; }));
}

ConjugationMap conjugation(const std::shared_ptr<const TMBasis>& basis) {
    require_basis(basis);
    const CircleGrid& grid = basis->grid();
    const std::size_t n = grid.size();
    Eigen::VectorXcd twist(static_cast<Eigen::Index>(n));
    for (std::size_t jdx = 0; jdx < n; ++jdx) {
        const cplx z = grid.node(jdx);
        twist(static_cast<Eigen::Index>(jdx)) = std::conj(z) * basis->inner().eval(z);
    }
    // Column j holds the coordinates of conj(z e_j) I: with samples
    // conj(E_{., j}) .* twist, coordinates are E^* diag(twist) conj(E) / N.
    const Eigen::MatrixXcd& table = basis->sample_table();
    Eigen::MatrixXcd j = (table.adjoint() * twist.asDiagonal() * table.conjugate()) /
                         static_cast<double>(n);
    return ConjugationMap{basis, Frame::model, std::move(j)};
}

double complex_symmetry_residual(const OperatorMatrix& a, const ConjugationMap& c) {
    if (a.basis != c.basis || a.frame != c.frame)
        throw std::invalid_argument("operator and conjugation frames must agree");
    const Eigen::MatrixXcd lhs = c.j * a.entries.conjugate() * c.j.conjugate();
    return spectral_norm(lhs - a.entries.adjoint());
}

double complex_symmetry_residual(const std::shared_ptr<const TMBasis>& basis,
                                 const BoundaryFunction& symbol) {
    return complex_symmetry_residual(assemble(basis, symbol), conjugation(basis));
}

double zero_symbol_residual(const std::shared_ptr<const TMBasis>& basis,
                            const BoundaryFunction& symbol) {
    return spectral_norm(assemble(basis, symbol).entries);
}

SarasonDefect sarason_defect(const std::shared_ptr<const TMBasis>& basis,
                             const BoundaryFunction& symbol) {
    require_basis(basis);
    if (basis->ordered_zeros().front() != cplx(0.0))
        throw std::invalid_argument("defect decomposition requires an origin zero");
    const OperatorMatrix a = assemble(basis, symbol);
    const OperatorMatrix az = compressed_shift(basis);
    Eigen::MatrixXcd d = a.entries - az.entries * a.entries * az.entries.adjoint();

    const Eigen::Index n = d.rows();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
    const double dnorm = n > 0 ? svd.singularValues()(0) : 0.0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-8 * dnorm)
            ++rank;
    if (rank > 2)
        throw ValidationError("defect rank exceeds two; assembly or grid fault");

    // With the kernel at 0 equal to the first basis vector, the template
    // phi1 e_1^* + e_1 phi2^* occupies column 0 and row 0; the gauge
    // phi2_0 = 0 makes the split unique.
    Eigen::VectorXcd phi1 = d.col(0);
    Eigen::VectorXcd phi2 = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index jdx = 1; jdx < n; ++jdx)
        phi2(jdx) = std::conj(d(0, jdx));

    Eigen::MatrixXcd residual = d;
    residual.col(0).setZero();
    residual.row(0).setZero();

    SarasonDefect out{OperatorMatrix{basis, Frame::model, std::move(d)},
                      rank,
                      ModelSpaceElement(basis, std::move(phi1)),
                      ModelSpaceElement(basis, std::move(phi2)),
                      spectral_norm(residual)};
    return out;
}

OperatorMatrix rank_one(const std::shared_ptr<const TMBasis>& basis, RankOneKind kind,
                        cplx point) {
    require_basis(basis);
    if (kind == RankOneKind::boundary) {
        const Eigen::VectorXcd w = boundary_kernel(basis, point).coeffs();
        return OperatorMatrix{basis, Frame::model, w * w.adjoint()};
    }
    if (std::abs(point) >= 1.0)
        throw DiskDomainError("interior rank-one kinds require |point| < 1");
    const Eigen::VectorXcd v = kernel_coords(*basis, point);
    const Eigen::VectorXcd cv = conjugation(basis).apply(v);
    if (kind == RankOneKind::kernel_conjugate_kernel)
        return OperatorMatrix{basis, Frame::model, v * cv.adjoint()};
    return OperatorMatrix{basis, Frame::model, cv * v.adjoint()};
}

ModelSpaceElement apply(const OperatorMatrix& op, const ModelSpaceElement& x) {
    if (op.basis != x.basis_ptr())
        throw std::invalid_argument("operator and element bases must agree");
    return ModelSpaceElement(x.basis_ptr(), op.entries * x.coeffs());
}

} // namespace mslab

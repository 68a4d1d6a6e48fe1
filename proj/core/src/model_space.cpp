#include "mslab/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mslab {

namespace {

cplx blaschke_factor(cplx a, cplx z) {
    if (a == cplx(0.0))
        return z;
    return (std::conj(a) / std::abs(a)) * (a - z) / (1.0 - std::conj(a) * z);
}

} // namespace

TMBasis::TMBasis(InnerFunction inner, CircleGrid grid)
    : inner_(std::move(inner)), grid_(grid), zeros_(inner_.blaschke_zeros()) {
    if (!inner_.is_finite_blaschke())
        throw std::invalid_argument("model-space basis requires a finite Blaschke product");
    if (zeros_.empty())
        throw std::invalid_argument("model space of a constant inner function is trivial");
    std::stable_partition(zeros_.begin(), zeros_.end(),
                          [](cplx a) { return a == cplx(0.0); });

    const std::size_t n = grid_.size();
    const std::size_t d = zeros_.size();
    table_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::VectorXcd nodes(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        nodes(static_cast<Eigen::Index>(j)) = grid_.node(j);

    // Running partial Blaschke product; column k is the unimodular-history
    // times the k-th normalized Cauchy kernel.
    Eigen::VectorXcd partial = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < d; ++k) {
        const cplx a = zeros_[k];
        const double scale = std::sqrt(1.0 - std::norm(a));
        for (Eigen::Index j = 0; j < nodes.size(); ++j) {
            const cplx z = nodes(j);
            table_(j, static_cast<Eigen::Index>(k)) =
                scale / (1.0 - std::conj(a) * z) * partial(j);
            partial(j) *= blaschke_factor(a, z);
        }
    }
}

cplx TMBasis::eval_basis(std::size_t k, cplx z) const {
    if (k >= zeros_.size())
        throw std::out_of_range("basis index exceeds degree");
    if (std::abs(z) > 1.0 + 1e-12)
        throw DiskDomainError("basis evaluation requires |z| <= 1");
    cplx partial = 1.0;
    for (std::size_t j = 0; j < k; ++j)
        partial *= blaschke_factor(zeros_[j], z);
    const cplx a = zeros_[k];
    return std::sqrt(1.0 - std::norm(a)) / (1.0 - std::conj(a) * z) * partial;
}

Eigen::MatrixXcd TMBasis::gram() const {
    const double n = static_cast<double>(grid_.size());
    return (table_.adjoint() * table_) / n;
}

ModelSpaceElement::ModelSpaceElement(std::shared_ptr<const TMBasis> basis,
                                     Eigen::VectorXcd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (!basis_)
        throw std::invalid_argument("element requires a basis");
    if (static_cast<std::size_t>(coeffs_.size()) != basis_->degree())
        throw std::invalid_argument("coefficient count must match basis degree");
}

BoundaryFunction ModelSpaceElement::samples() const {
    const Eigen::VectorXcd s = basis_->sample_table() * coeffs_;
    std::vector<cplx> out(s.data(), s.data() + s.size());
    return BoundaryFunction(basis_->grid(), std::move(out));
}

cplx kernel_eval(const InnerFunction& inner, cplx lambda, cplx z) {
    if (std::abs(lambda) >= 1.0)
        throw DiskDomainError("kernel parameter must be an interior point");
    if (std::abs(z) > 1.0 + 1e-12)
        throw DiskDomainError("kernel argument must satisfy |z| <= 1");
    if (z == lambda)
        return kernel_norm_sq(inner, lambda);
    return (1.0 - std::conj(inner.eval(lambda)) * inner.eval(z)) /
           (1.0 - std::conj(lambda) * z);
}

ModelSpaceElement boundary_kernel(const std::shared_ptr<const TMBasis>& basis, cplx zeta) {
    if (!basis)
        throw std::invalid_argument("boundary kernel requires a basis");
    if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
        throw DiskDomainError("boundary kernel requires a unimodular point");
    const std::size_t d = basis->degree();
    Eigen::VectorXcd c(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k)
        c(static_cast<Eigen::Index>(k)) = std::conj(basis->eval_basis(k, zeta));
    return ModelSpaceElement(basis, std::move(c));
}

ModelSpaceElement project(const std::shared_ptr<const TMBasis>& basis,
                          const BoundaryFunction& f) {
    if (!basis)
        throw std::invalid_argument("projection requires a basis");
    if (!(f.grid() == basis->grid()))
        throw GridMismatchError("projection requires the basis grid");
    const Eigen::Map<const Eigen::VectorXcd> s(f.samples().data(),
                                               static_cast<Eigen::Index>(f.size()));
    Eigen::VectorXcd c =
        (basis->sample_table().adjoint() * s) / static_cast<double>(f.size());
    return ModelSpaceElement(basis, std::move(c));
}

cplx eval_element(const ModelSpaceElement& x, cplx z) {
    const TMBasis& basis = x.basis();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < basis.degree(); ++k)
        acc += x.coeffs()(static_cast<Eigen::Index>(k)) * basis.eval_basis(k, z);
    return acc;
}

} // namespace mslab

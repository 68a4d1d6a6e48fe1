#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mslab/disk_geometry.hpp"
#include "mslab/errors.hpp"

namespace mslab {

/// L^2(T, dtheta/2pi) function represented by uniform grid samples with
/// cached Fourier coefficients.
///
/// Conventions: samples f_j at theta_j = 2*pi*j/N; coefficients
/// c_k = (1/N) sum_j f_j e^{-ik theta_j}, stored in transform order
/// (index k holds frequency k for k < N/2 and k - N for k >= N/2; the
/// bin N/2 counts as negative frequency -N/2). Parseval:
/// (1/N) sum |f_j|^2 = sum |c_k|^2.
class BoundaryFunction {
public:
    /// From samples; coefficients computed eagerly.
    BoundaryFunction(CircleGrid grid, std::vector<cplx> samples);

    /// From transform-order coefficients; samples computed eagerly.
    static BoundaryFunction from_coefficients(CircleGrid grid, std::vector<cplx> coefficients);

    /// Sample a pointwise function at the grid nodes.
    static BoundaryFunction sample(CircleGrid grid, const std::function<cplx(cplx)>& f);

    const CircleGrid& grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }

    const std::vector<cplx>& samples() const { return samples_; }
    const std::vector<cplx>& coefficients() const { return coeffs_; }

    /// Coefficient of frequency k, addressed by signed index in
    /// [-N/2, N/2).
    cplx coefficient(long k) const;

    /// sqrt((1/N) sum |f_j|^2), compensated accumulation.
    double norm() const;

    /// max |c_k| over negative frequencies (transform indices N/2..N-1).
    double negative_leakage() const;

    BoundaryFunction conjugated() const;
    BoundaryFunction pointwise_product(const BoundaryFunction& other) const;
    BoundaryFunction scaled(cplx factor) const;
    BoundaryFunction plus(const BoundaryFunction& other) const;

private:
    BoundaryFunction(CircleGrid grid, std::vector<cplx> samples, std::vector<cplx> coeffs);

    CircleGrid grid_;
    std::vector<cplx> samples_;
    std::vector<cplx> coeffs_;
};

/// (1/N) sum_j f_j conj(g_j); conjugate-symmetric, positive-definite.
cplx inner_product(const BoundaryFunction& f, const BoundaryFunction& g);

/// Orthogonal projection of L^2 onto H^2: zeroes every negative-frequency
/// coefficient (the N/2 bin included).
BoundaryFunction riesz_project(const BoundaryFunction& f);

namespace fft {

/// Unnormalized DFT: out_k = sum_j in_j e^{-2pi i jk/N}. Deterministic.
void forward(const std::vector<cplx>& in, std::vector<cplx>& out);

/// Unnormalized inverse DFT: out_j = sum_k in_k e^{+2pi i jk/N}.
void backward(const std::vector<cplx>& in, std::vector<cplx>& out);

} // namespace fft

} // namespace mslab

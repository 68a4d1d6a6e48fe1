#pragma once

#include <cstddef>

#include "mslab/fourier.hpp"

namespace mslab {

/// H^2 element given by boundary samples. Admission requires the
/// negative-frequency content to be below 1e-8 * norm; interior values
/// come from the truncated coefficient series.
class HardyEvaluator {
public:
    explicit HardyEvaluator(BoundaryFunction source);

    const BoundaryFunction& source() const { return source_; }
    double norm() const { return norm_; }

    /// Largest coefficient magnitude in the top kept octave
    /// [N/4, N/2); the resolution indicator used by deep-probe gates.
    double top_octave_magnitude() const;

    static constexpr double leakage_gate = 1e-8;

private:
    BoundaryFunction source_;
    double norm_;
};

/// sum_{0 <= k < N/2} c_k lambda^k by Horner; the Cauchy/Szego pairing
/// <f, k_lambda> on the kept spectrum. Interior points only.
cplx cauchy_eval(const HardyEvaluator& f, cplx lambda);

/// Same truncated series on the closed disk: boundary points evaluate the
/// kept spectrum directly.
cplx series_eval(const HardyEvaluator& f, cplx z);

/// Outer function with prescribed boundary modulus w: analytic completion
/// of log w in coefficient space (double positive frequencies, drop
/// negatives, keep mean; the Nyquist cosine bin is kept so the sampled
/// modulus reproduces w exactly at the nodes). Positive at 0; verified
/// zero-free on |z| = 0.99 by winding count.
HardyEvaluator outer_from_modulus(const CircleGrid& grid, const std::vector<double>& w);

/// sqrt(sum_{j >= N} |c_j|^2) over the kept positive spectrum.
double tail_norm(const HardyEvaluator& f, std::size_t n);

/// Grid-resolution policy: smallest power-of-two N >= 16 with
/// max_zero_modulus^N < 1e-12, capped at 2^20 (ResolutionError above).
std::size_t required_grid_size(double max_zero_modulus);

constexpr std::size_t grid_size_cap = std::size_t{1} << 20;

} // namespace mslab

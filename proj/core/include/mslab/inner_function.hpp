#pragma once

#include <cstddef>
#include <vector>

#include "mslab/disk_geometry.hpp"

namespace mslab {

/// Point mass of a singular inner factor exp(-s (zeta+z)/(zeta-z)).
struct SingularAtom {
    cplx zeta;
    double mass;
};

/// Inner function: unimodular phase times a finite Blaschke product times
/// finitely many singular atoms. Interior modulus < 1; boundary modulus 1
/// away from atom locations.
class InnerFunction {
public:
    InnerFunction(cplx phase, std::vector<cplx> blaschke_zeros,
                  std::vector<SingularAtom> atoms);

    /// Finite Blaschke product with the given zeros, phase 1.
    static InnerFunction blaschke(std::vector<cplx> zeros);

    /// Single singular atom, phase 1.
    static InnerFunction atom(cplx zeta, double mass);

    cplx phase() const { return phase_; }
    const std::vector<cplx>& blaschke_zeros() const { return zeros_; }
    const std::vector<SingularAtom>& atoms() const { return atoms_; }

    std::size_t degree() const { return zeros_.size(); }
    bool is_finite_blaschke() const { return atoms_.empty(); }
    double max_zero_modulus() const;

    /// Product by concatenating zero and atom lists; phases multiply.
    InnerFunction times(const InnerFunction& other) const;

    /// Factor-wise evaluation with compensated log-space accumulation:
    /// b_a(z) = (conj(a)/|a|)(a-z)/(1-conj(a)z), b_0(z) = z, atoms
    /// exp(-s (zeta+z)/(zeta-z)). Throws at atom locations.
    cplx eval(cplx z) const;

    /// log|I(z)| for interior z, accurate when |I(z)| underflows.
    double log_modulus(cplx z) const;

private:
    cplx phase_;
    std::vector<cplx> zeros_;
    std::vector<SingularAtom> atoms_;
};

/// ||k_lambda^I||^2 = (1 - |I(lambda)|^2)/(1 - |lambda|^2), evaluated
/// through log|I| and expm1 so near-unimodular and underflowing moduli
/// are both exact.
double kernel_norm_sq(const InnerFunction& inner, cplx lambda);

/// One kernel-norm sample on a Stolz ray.
struct AdcSample {
    std::size_t ray;
    cplx point;
    double norm_sq;
};

/// Kernel-norm growth probe along a Stolz sweep.
struct AdcVerdict {
    bool bounded;
    double sup_norm_sq;
    std::vector<AdcSample> samples;
    double growth_exponent_estimate;
};

/// Samples kernel_norm_sq over stolz_rays(zeta, alpha, depths): bounded
/// iff the least-squares slope of log norm^2 against log 1/(1-r) over the
/// deepest depth-decade stays below log10(1.05); the exponent estimate is
/// the slope over all samples.
AdcVerdict adc_probe(const InnerFunction& inner, cplx zeta, double alpha,
                     const std::vector<double>& depths);

/// Finite Blaschke product with zeros {1 - q^n : n = 1..count}, positive
/// at the origin. Rejects runs whose deepest zero exceeds the grid policy.
InnerFunction blaschke_lambda(double q, std::size_t count);

} // namespace mslab

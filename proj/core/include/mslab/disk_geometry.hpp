#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mslab/errors.hpp"

namespace mslab {

using cplx = std::complex<double>;

/// Non-tangential approach region at a boundary vertex:
/// { z : |z - vertex| / (1 - |z|) < aperture }, aperture > 1.
struct StolzRegion {
    cplx vertex;
    double aperture;

    StolzRegion(cplx vertex, double aperture);
};

/// Finitely many points converging to a boundary vertex inside a Stolz
/// region, ordered with |points[i] - vertex| strictly decreasing.
struct ApproachSequence {
    std::vector<cplx> points;
    cplx vertex;
};

/// Uniform circle grid theta_j = 2*pi*j/N with N a power of two, N >= 16.
struct CircleGrid {
    explicit CircleGrid(std::size_t size);

    std::size_t size() const { return size_; }
    double theta(std::size_t j) const;
    cplx node(std::size_t j) const;

    bool operator==(const CircleGrid& other) const { return size_ == other.size_; }

private:
    std::size_t size_;
};

/// rho(z, w) = |z - w| / |1 - conj(w) z|, the automorphism-invariant metric
/// on the open disk. Symmetric; values in [0, 1).
double pseudohyperbolic_distance(cplx z, cplx w);

/// Membership test |z - vertex| / (1 - |z|) < aperture for interior z.
bool stolz_contains(const StolzRegion& region, cplx z);

/// Deterministic Stolz sweep organized ray-by-ray: rays are equispaced in
/// angle over 95% of the admissible sector (ray 0 is radial), and the point
/// at depth r on a ray with slope beta = 1/cos(phi) sits on |z| = r with
/// |z - vertex|/(1 - |z|) = beta exactly. Ray/depth combinations with
/// beta >= (1+r)/(1-r) (unreachable on that circle) are omitted.
std::vector<std::vector<cplx>> stolz_rays(const StolzRegion& region,
                                          std::size_t rays,
                                          const std::vector<double>& depths);

/// Flattened approach sequence over all rays and depths, sorted by
/// |z - vertex| strictly decreasing; ties in the chord are broken by a
/// deterministic depth nudge. Every point is re-checked for membership.
ApproachSequence stolz_sample(const StolzRegion& region,
                              std::size_t rays,
                              const std::vector<double>& depths);

} // namespace mslab

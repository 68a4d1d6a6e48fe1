#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "mslab/fourier.hpp"

namespace support {

using mslab::cplx;

// Trigonometric polynomial with Gaussian coefficients on frequencies
// [-degree, degree]. degree must stay below grid.size() / 2.
inline mslab::BoundaryFunction random_trig(const mslab::CircleGrid& grid, long degree,
                                           std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> coeffs(grid.size(), cplx(0.0));
    const long n = static_cast<long>(grid.size());
    for (long k = -degree; k <= degree; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k >= 0 ? k : k + n);
        coeffs[idx] = cplx(gauss(rng), gauss(rng));
    }
    return mslab::BoundaryFunction::from_coefficients(grid, std::move(coeffs));
}

// Analytic polynomial with Gaussian coefficients on frequencies [0, degree].
inline mslab::BoundaryFunction random_poly(const mslab::CircleGrid& grid, long degree,
                                           std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> coeffs(grid.size(), cplx(0.0));
    for (long k = 0; k <= degree; ++k)
        coeffs[static_cast<std::size_t>(k)] = cplx(gauss(rng), gauss(rng));
    return mslab::BoundaryFunction::from_coefficients(grid, std::move(coeffs));
}

// Geometric depth schedule 1 - first * ratio^k, k < count.
inline std::vector<double> geometric_depths(double first, double ratio, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    double gap = first;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(1.0 - gap);
        gap *= ratio;
    }
    return out;
}

} // namespace support

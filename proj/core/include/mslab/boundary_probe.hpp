#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mslab/disk_geometry.hpp"
#include "mslab/hardy.hpp"
#include "mslab/inner_function.hpp"
#include "mslab/nearly_invariant.hpp"

namespace mslab {

struct ProbeSample {
    std::size_t aperture_index = 0;
    std::size_t ray = 0;
    cplx point;
    cplx value;
};

// Estimate of a non-tangential limit from Stolz-region sampling.
struct LimitEstimate {
    bool converged = false;
    // Deepest sample on the radial ray.
    cplx value;
    // Largest pairwise deviation among the deepest samples of every ray
    // and aperture; convergence means residual < tolerance.
    double residual = 0.0;
    double tolerance = 0.0;
    std::vector<ProbeSample> samples;
};

// Samples the evaluator over Stolz regions at each aperture and declares a
// limit when the deepest three values of every ray agree across all rays
// and apertures within 1e-6 * (1 + |deepest value|). Requires at least
// three depths.
LimitEstimate nt_limit(const std::function<cplx(cplx)>& evaluator, cplx zeta,
                       const std::vector<double>& apertures,
                       const std::vector<double>& depths);

// Pointwise evaluator for a Hardy-space function that refuses depths the
// coefficient resolution cannot support: the extrapolated coefficient-tail
// bound at the sample radius must stay below 1e-4 * (1 + norm), else
// ResolutionError.
std::function<cplx(cplx)> guarded_evaluator(const HardyEvaluator& f);

struct MntlReport {
    // Existence of the multiplier's non-tangential limit.
    LimitEstimate multiplier_limit;
    // Uniform boundedness verdict for the squared kernel norms.
    bool kernel_bounded = false;
    double kernel_sup_norm_sq = 0.0;
    // Log-log slope of the squared kernel norm over the deepest depth decade.
    double kernel_decade_slope = 0.0;
};

// Checks the two limit conditions at a boundary point: the multiplier limit
// and uniform boundedness of |g(lambda)|^2 (1-|I(lambda)|^2)/(1-|lambda|^2).
MntlReport mntl_check(const HardyEvaluator& g, const InnerFunction& inner, cplx zeta,
                      const std::vector<double>& apertures,
                      const std::vector<double>& depths);
MntlReport mntl_check(const NearlyInvariantSpace& space, cplx zeta,
                      const std::vector<double>& apertures,
                      const std::vector<double>& depths);

struct GrowthBoundReport {
    // Largest |f(z)| sqrt(1-|z|^2) / ||f|| over the sampled points.
    double max_ratio = 0.0;
    cplx argmax;
};

// Monte-Carlo check of the sharp pointwise growth bound |f(z)| <= ||f||
// ||k_z||; the reported ratio never exceeds 1 up to rounding.
GrowthBoundReport growth_bound_check(const HardyEvaluator& f, std::size_t sample_count,
                                     std::uint64_t seed = 0);

struct OscillationRow {
    // Index n of the geometric point 1 - 2^{-n}.
    std::size_t n = 0;
    cplx lambda;
    cplx g_value;
    // g(lambda) - 1/2.
    cplx deviation;
    // Whether lambda belongs to the sparse subsequence 1 - 4^{-m}.
    bool sparse_member = false;
};

struct OscillationReport {
    std::shared_ptr<const NearlyInvariantSpace> space;
    // Smallest |B_1| over the off-subsequence points; the oscillation gap
    // is delta / 4.
    double delta = 0.0;
    std::vector<OscillationRow> table;
    // Largest |g - a| over all probe points; the two agree because b
    // vanishes on the full sequence.
    double identity_residual = 0.0;
    // Largest |g - 1/2| over the sparse subsequence (zeros of B_1).
    double max_on_sparse = 0.0;
    // Smallest |g - 1/2| over the off-subsequence points.
    double min_off_sparse = 0.0;
};

// Builds the two-sequence oscillation space: B_1 with zeros 1 - 4^{-m},
// m <= n1, B_2 with zeros 1 - 2^{-n}, n <= n2 = 2 n1, a = 1/2 + B_1 / 4,
// b = B_2 * outer(sqrt(1 - |a|^2)), and verifies that g - 1/2 = B_1 / 4
// on every probe point. The multiplier has no limit along the full
// sequence as n2 grows while the kernels stay bounded.
OscillationReport oscillation_example(std::size_t n1, std::size_t n2,
                                      const InnerFunction& inner,
                                      std::size_t initial_grid = 0);

enum class DichotomyBranch { adc, nm, inconclusive };

// Decision thresholds: a limit modulus above adc_threshold claims an
// angular derivative, below nm_threshold claims the zero functional, and
// the band between is declared inconclusive.
inline constexpr double adc_threshold = 1e-4;
inline constexpr double nm_threshold = 1e-6;

struct DichotomyReport {
    LimitEstimate g_limit;
    DichotomyBranch branch = DichotomyBranch::inconclusive;
    // Per-basis-image limit runs: quotient images f_k / g on the angular
    // derivative branch, plain images f_k on the zero-functional branch.
    std::vector<LimitEstimate> image_limits;
    // Angular-derivative branch: worst gap between the quotient limits and
    // the closed-form basis values at the vertex.
    double basis_match_residual = 0.0;
    // Zero-functional branch: largest deepest-sample kernel modulus at a
    // fixed interior anchor.
    double kernel_tail = 0.0;
    std::string reason;
};

// Classifies a boundary point: either every element of the space admits a
// finite non-tangential limit (angular derivative branch) or every element
// tends to zero (zero functional branch); finite sampling keeps an explicit
// inconclusive band between the thresholds.
DichotomyReport dichotomy_classify(const NearlyInvariantSpace& space, cplx zeta,
                                   const std::vector<double>& apertures,
                                   const std::vector<double>& depths);

} // namespace mslab

#include "mslab/boundary_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "mslab/errors.hpp"

namespace mslab {

namespace {

constexpr std::size_t probe_rays = 5;
constexpr double limit_tol_scale = 1e-6;

double least_squares_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2)
        return 0.0;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(xy.size());
    my /= static_cast<double>(xy.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct PooledGrowth {
    bool bounded = false;
    double sup = 0.0;
    double decade_slope = 0.0;
};

// Boundedness heuristic shared with the kernel probes: least-squares slope
// of log value against log 1/(1-r) over the deepest depth decade.
PooledGrowth pooled_growth(const std::vector<std::pair<cplx, double>>& samples) {
    PooledGrowth out;
    double min_gap = 1.0;
    for (const auto& [z, v] : samples) {
        out.sup = std::max(out.sup, v);
        min_gap = std::min(min_gap, 1.0 - std::abs(z));
    }
    std::vector<std::pair<double, double>> decade;
    for (const auto& [z, v] : samples) {
        const double gap = 1.0 - std::abs(z);
        if (gap <= 10.0 * min_gap && v > 0.0)
            decade.emplace_back(std::log(1.0 / gap), std::log(v));
    }
    out.decade_slope = least_squares_slope(decade);
    out.bounded = std::pow(10.0, out.decade_slope) < 1.05;
    return out;
}

} // namespace

LimitEstimate nt_limit(const std::function<cplx(cplx)>& evaluator, cplx zeta,
                       const std::vector<double>& apertures,
                       const std::vector<double>& depths) {
    if (!evaluator)
        throw std::invalid_argument("limit estimation requires an evaluator");
    if (apertures.empty())
        throw std::invalid_argument("at least one aperture required");
    if (depths.size() < 3)
        throw std::invalid_argument("at least three depths required");

    LimitEstimate est;
    std::vector<cplx> pool;
    for (std::size_t ai = 0; ai < apertures.size(); ++ai) {
        const StolzRegion region(zeta, apertures[ai]);
        const auto rays = stolz_rays(region, probe_rays, depths);
        for (std::size_t r = 0; r < rays.size(); ++r) {
            std::vector<cplx> values;
            values.reserve(rays[r].size());
            for (cplx z : rays[r]) {
                const cplx v = evaluator(z);
                est.samples.push_back(ProbeSample{ai, r, z, v});
                values.push_back(v);
            }
            const std::size_t take = std::min<std::size_t>(3, values.size());
            pool.insert(pool.end(), values.end() - static_cast<long>(take),
                        values.end());
            if (ai == 0 && r == 0) {
                if (values.empty())
                    throw std::invalid_argument("radial ray has no admissible depths");
                est.value = values.back();
            }
        }
    }
    if (pool.size() < 3)
        throw std::invalid_argument("insufficient probe points for a limit");

    double residual = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
            residual = std::max(residual, std::abs(pool[i] - pool[j]));
    est.residual = residual;
    est.tolerance = limit_tol_scale * (1.0 + std::abs(est.value));
    est.converged = residual < est.tolerance;
    return est;
}

std::function<cplx(cplx)> guarded_evaluator(const HardyEvaluator& f) {
    auto held = std::make_shared<const HardyEvaluator>(f);
    const std::size_t n = held->source().size();
    const double norm = held->norm();
    const double t_eff = held->top_octave_magnitude();

    // Geometric decay ratio extrapolated from the last two coefficient
    // octaves; it turns the truncation tail into a per-point bound.
    double t_prev = 0.0;
    for (std::size_t k = n / 8; k < n / 4; ++k)
        t_prev = std::max(t_prev,
                          std::abs(held->source().coefficient(static_cast<long>(k))));
    double rho = 0.0;
    if (t_eff > 0.0) {
        rho = t_prev > t_eff
                  ? std::pow(t_eff / t_prev, 4.0 / static_cast<double>(n))
                  : 1.0;
        rho = std::min(rho, 0.9999);
    }
    const double threshold = 1e-4 * (1.0 + norm);

    return [held, n, t_eff, rho, threshold](cplx z) {
        const double r = std::abs(z);
        if (t_eff > 0.0 && r < 1.0) {
            const double tail =
                t_eff * std::pow(r, static_cast<double>(n) / 2.0) / (1.0 - rho * r);
            if (tail > threshold)
                throw ResolutionError("probe depth exceeds quadrature support");
        }
        return series_eval(*held, z);
    };
}

MntlReport mntl_check(const HardyEvaluator& g, const InnerFunction& inner, cplx zeta,
                      const std::vector<double>& apertures,
                      const std::vector<double>& depths) {
    MntlReport report;
    const auto g_eval = guarded_evaluator(g);
    report.multiplier_limit = nt_limit(g_eval, zeta, apertures, depths);

    std::vector<std::pair<cplx, double>> samples;
    for (double alpha : apertures) {
        const StolzRegion region(zeta, alpha);
        for (const auto& ray : stolz_rays(region, probe_rays, depths))
            for (cplx z : ray)
                samples.emplace_back(z, std::norm(g_eval(z)) * kernel_norm_sq(inner, z));
    }
    const PooledGrowth growth = pooled_growth(samples);
    report.kernel_bounded = growth.bounded;
    report.kernel_sup_norm_sq = growth.sup;
    report.kernel_decade_slope = growth.decade_slope;
    return report;
}

MntlReport mntl_check(const NearlyInvariantSpace& space, cplx zeta,
                      const std::vector<double>& apertures,
                      const std::vector<double>& depths) {
    return mntl_check(space.g(), space.inner(), zeta, apertures, depths);
}

GrowthBoundReport growth_bound_check(const HardyEvaluator& f, std::size_t sample_count,
                                     std::uint64_t seed) {
    if (sample_count < 1)
        throw std::invalid_argument("at least one sample required");
    const double norm = f.norm();
    if (norm == 0.0)
        throw std::invalid_argument("growth check requires a nonzero function");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GrowthBoundReport report;
    for (std::size_t t = 0; t < sample_count; ++t) {
        const double r = std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        const cplx z = std::polar(r, theta);
        const double ratio =
            std::abs(series_eval(f, z)) * std::sqrt(1.0 - std::norm(z)) / norm;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.argmax = z;
        }
    }
    return report;
}

OscillationReport oscillation_example(std::size_t n1, std::size_t n2,
                                      const InnerFunction& inner,
                                      std::size_t initial_grid) {
    if (n1 < 1)
        throw std::invalid_argument("sparse truncation must be positive");
    if (n2 != 2 * n1)
        throw std::invalid_argument(
            "full sequence must refine the sparse one: n2 = 2 n1");

    const InnerFunction b1 = blaschke_lambda(0.25, n1);
    const InnerFunction b2 = blaschke_lambda(0.5, n2);

    std::vector<double> points(n2);
    for (std::size_t n = 1; n <= n2; ++n)
        points[n - 1] = 1.0 - std::ldexp(1.0, -static_cast<int>(n));

    const PairSampler sampler = [&b1, &b2](const CircleGrid& grid) {
        BoundaryFunction a = BoundaryFunction::sample(
            grid, [&b1](cplx z) { return 0.5 + 0.25 * b1.eval(z); });
        std::vector<double> w(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j)
            w[j] = std::sqrt(1.0 - std::norm(a.samples()[j]));
        const HardyEvaluator b0 = outer_from_modulus(grid, w);
        BoundaryFunction b = b0.source().pointwise_product(
            BoundaryFunction::sample(grid, [&b2](cplx z) { return b2.eval(z); }));
        return SarasonPair(HardyEvaluator(std::move(a)), HardyEvaluator(std::move(b)));
    };

    BuildOptions options;
    options.initial_grid = initial_grid;
    options.extra_gate = [&b1, &points](const NearlyInvariantSpace& sp) {
        for (double lambda : points) {
            const cplx a_val = 0.5 + 0.25 * b1.eval(lambda);
            if (std::abs(cauchy_eval(sp.g(), lambda) - a_val) > 1e-8)
                return false;
        }
        return true;
    };

    OscillationReport report;
    report.space = build_space(inner, sampler, options);
    report.min_off_sparse = std::numeric_limits<double>::infinity();
    report.delta = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= n2; ++n) {
        const double lambda = points[n - 1];
        const cplx g_val = cauchy_eval(report.space->g(), lambda);
        const cplx a_val = 0.5 + 0.25 * b1.eval(lambda);
        const bool sparse = n % 2 == 0;
        report.table.push_back(OscillationRow{n, lambda, g_val, g_val - 0.5, sparse});
        report.identity_residual =
            std::max(report.identity_residual, std::abs(g_val - a_val));
        if (sparse) {
            report.max_on_sparse = std::max(report.max_on_sparse, std::abs(g_val - 0.5));
        } else {
            report.min_off_sparse =
                std::min(report.min_off_sparse, std::abs(g_val - 0.5));
            report.delta = std::min(report.delta, std::abs(b1.eval(lambda)));
        }
    }
    return report;
}

DichotomyReport dichotomy_classify(const NearlyInvariantSpace& space, cplx zeta,
                                   const std::vector<double>& apertures,
                                   const std::vector<double>& depths) {
    DichotomyReport report;
    const auto g_eval = guarded_evaluator(space.g());
    report.g_limit = nt_limit(g_eval, zeta, apertures, depths);
    if (!report.g_limit.converged) {
        report.reason = "multiplier limit did not settle";
        return report;
    }

    const double limit_mod = std::abs(report.g_limit.value);
    const TMBasis& basis = *space.basis();
    const std::size_t d = basis.degree();

    // Per-column evaluators for the frame images g e_k through their own
    // boundary series, independent of the closed-form route.
    std::vector<std::function<cplx(cplx)>> images;
    images.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        const Eigen::VectorXcd col = space.m_table().col(static_cast<Eigen::Index>(k));
        std::vector<cplx> samples(col.data(), col.data() + col.size());
        images.push_back(guarded_evaluator(
            HardyEvaluator(BoundaryFunction(space.grid(), std::move(samples)))));
    }

    if (limit_mod > adc_threshold) {
        double match = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const auto& image = images[k];
            const LimitEstimate lk = nt_limit(
                [&image, &g_eval](cplx z) { return image(z) / g_eval(z); }, zeta,
                apertures, depths);
            report.image_limits.push_back(lk);
            if (!lk.converged) {
                report.reason = "quotient limit failed for a frame image";
                return report;
            }
            match = std::max(match, std::abs(lk.value - basis.eval_basis(k, zeta)));
        }
        report.basis_match_residual = match;
        report.branch = DichotomyBranch::adc;
        report.reason = "multiplier limit away from zero; quotient limits settle";
        return report;
    }

    if (limit_mod <= nm_threshold) {
        for (std::size_t k = 0; k < d; ++k) {
            const LimitEstimate lk = nt_limit(images[k], zeta, apertures, depths);
            report.image_limits.push_back(lk);
            if (!lk.converged || std::abs(lk.value) > nm_threshold) {
                report.reason = "a frame image kept a nonzero limit";
                return report;
            }
        }
        // Kernel evidence at a fixed interior anchor along the radial ray.
        const cplx anchor(0.3, 0.2);
        const StolzRegion region(zeta, apertures.front());
        const auto rays = stolz_rays(region, 1, depths);
        double tail = 0.0;
        if (!rays.empty() && !rays.front().empty())
            tail = std::abs(kernel_M(space, rays.front().back(), anchor));
        report.kernel_tail = tail;
        if (tail > nm_threshold) {
            report.reason = "kernel failed to vanish at the anchor";
            return report;
        }
        report.branch = DichotomyBranch::nm;
        report.reason = "all frame images and kernels vanish";
        return report;
    }

    report.reason = "limit modulus inside the undecided band";
    return report;
}

} // namespace mslab

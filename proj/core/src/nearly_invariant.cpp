#include "mslab/nearly_invariant.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mslab/errors.hpp"

namespace mslab {

namespace {

constexpr double sup_gate = 1.0 + 1e-10;
constexpr double unit_sum_gate = 1e-8;
constexpr double denominator_floor = 1e-6;
constexpr double norm_soft_gate = 1e-8;
constexpr double norm_hard_gate = 1e-6;
constexpr double gram_gate = 1e-8;

struct RawBuild {
    std::shared_ptr<const SarasonPair> pair;
    BoundaryFunction g_samples;
    double min_denominator;
    bool rotated;
};

// Forms g = a / (1 - I b) on the pair's grid, normalizes the phase so the
// mean is positive real, and rotates the pair to match.
RawBuild form_multiplier(const InnerFunction& inner, SarasonPair pair) {
    const CircleGrid& grid = pair.grid();
    const std::size_t n = grid.size();
    const std::vector<cplx>& a = pair.a().source().samples();
    const std::vector<cplx>& b = pair.b().source().samples();

    std::vector<cplx> g(n);
    double min_den = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const cplx den = 1.0 - inner.eval(grid.node(j)) * b[j];
        min_den = std::min(min_den, std::abs(den));
        g[j] = a[j] / den;
    }
    if (min_den < denominator_floor)
        throw DegenerateDenominatorError("1 - I b approaches zero on the grid");

    BoundaryFunction g_bf(grid, std::move(g));
    const cplx g0 = g_bf.coefficient(0);
    if (std::abs(g0) == 0.0)
        throw NonExtremalError("multiplier vanishes at the origin");

    bool rotated = false;
    if (!(g0.real() > 0.0 && std::abs(g0.imag()) <= 1e-12 * std::abs(g0))) {
        const cplx u = std::conj(g0) / std::abs(g0);
        g_bf = g_bf.scaled(u);
        pair = SarasonPair(HardyEvaluator(pair.a().source().scaled(u)), pair.b());
        rotated = true;
    }
    return RawBuild{std::make_shared<SarasonPair>(std::move(pair)), std::move(g_bf),
                    min_den, rotated};
}

std::shared_ptr<const NearlyInvariantSpace> assemble_space(const InnerFunction& inner,
                                                           RawBuild raw) {
    // HardyEvaluator construction enforces the analyticity gate on g.
    HardyEvaluator g_eval(std::move(raw.g_samples));
    auto basis = std::make_shared<const TMBasis>(inner, g_eval.source().grid());
    if (basis->ordered_zeros().front() != cplx(0.0))
        throw std::invalid_argument("inner function must vanish at the origin");
    return std::shared_ptr<const NearlyInvariantSpace>(new NearlyInvariantSpace(
        inner, std::move(basis), std::move(raw.pair), std::move(g_eval), raw.rotated,
        raw.min_denominator));
}

} // namespace

SarasonPair::SarasonPair(HardyEvaluator a, HardyEvaluator b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (!(a_.source().grid() == b_.source().grid()))
        throw GridMismatchError("pair components must share a grid");
    const std::vector<cplx>& as = a_.source().samples();
    const std::vector<cplx>& bs = b_.source().samples();
    double defect = 0.0;
    for (std::size_t j = 0; j < as.size(); ++j) {
        const double ma = std::abs(as[j]);
        const double mb = std::abs(bs[j]);
        if (ma > sup_gate || mb > sup_gate)
            throw ValidationError("pair components must lie in the closed unit ball");
        defect = std::max(defect, std::abs(ma * ma + mb * mb - 1.0));
    }
    unit_defect_ = defect;
    if (defect >= unit_sum_gate)
        throw ValidationError("pair moduli must satisfy |a|^2 + |b|^2 = 1");
}

NearlyInvariantSpace::NearlyInvariantSpace(InnerFunction inner,
                                           std::shared_ptr<const TMBasis> basis,
                                           std::shared_ptr<const SarasonPair> pair,
                                           HardyEvaluator g, bool rotated,
                                           double min_denominator)
    : inner_(std::move(inner)), basis_(std::move(basis)), pair_(std::move(pair)),
      g_(std::move(g)), rotated_(rotated), min_denominator_(min_denominator) {
    const std::size_t n = g_.source().size();
    const Eigen::Map<const Eigen::VectorXcd> gs(g_.source().samples().data(),
                                                static_cast<Eigen::Index>(n));
    m_table_ = gs.asDiagonal() * basis_->sample_table();

    const Eigen::MatrixXcd gram =
        (m_table_.adjoint() * m_table_) / static_cast<double>(n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
    isometry_residual_ = (gram - id).cwiseAbs().maxCoeff();
    norm_defect_ = std::abs(g_.norm() - 1.0);
    g_zero_ = g_.source().coefficient(0).real();
}

std::shared_ptr<const NearlyInvariantSpace>
build_space(const InnerFunction& inner, const PairSampler& sampler,
            const BuildOptions& options) {
    if (!sampler)
        throw std::invalid_argument("build requires a pair sampler");
    std::size_t n = options.initial_grid != 0
                        ? options.initial_grid
                        : required_grid_size(inner.max_zero_modulus());
    const std::size_t cap = std::min<std::size_t>(options.max_grid, grid_size_cap);
    if (n > cap)
        throw ResolutionError("initial grid exceeds the resolution cap");

    double prev_norm_defect = std::numeric_limits<double>::infinity();
    std::string stall = "unresolved";
    while (true) {
        bool refine = false;
        try {
            auto space = assemble_space(inner, form_multiplier(inner, sampler(CircleGrid(n))));
            if (space->norm_defect() > norm_hard_gate) {
                // A resolved multiplier with a stagnant norm defect signals an
                // invalid pair rather than quadrature error.
                if (space->norm_defect() >= 0.5 * prev_norm_defect)
                    throw NonExtremalError("multiplier norm deviates from 1");
                prev_norm_defect = space->norm_defect();
                stall = "multiplier norm unsettled";
                refine = true;
            } else if (space->norm_defect() > norm_soft_gate) {
                prev_norm_defect = space->norm_defect();
                stall = "multiplier norm unsettled";
                refine = true;
            } else if (space->isometry_residual() > gram_gate) {
                stall = "frame orthonormality unsettled";
                refine = true;
            } else if (options.extra_gate && !options.extra_gate(*space)) {
                stall = "caller gate unsettled";
                refine = true;
            } else {
                return space;
            }
        } catch (const AnalyticityError&) {
            stall = "analyticity leakage unsettled";
            refine = true;
        }
        if (refine) {
            if (n >= cap)
                throw ResolutionError("resolution cap reached: " + stall);
            n *= 2;
        }
    }
}

std::shared_ptr<const NearlyInvariantSpace> build_space(const InnerFunction& inner,
                                                        SarasonPair pair) {
    auto space = assemble_space(inner, form_multiplier(inner, std::move(pair)));
    if (space->norm_defect() > norm_hard_gate)
        throw NonExtremalError("multiplier norm deviates from 1");
    if (space->isometry_residual() > gram_gate)
        throw ValidationError("frame of the space is not orthonormal");
    return space;
}

Eigen::VectorXcd project_M(const NearlyInvariantSpace& space, const BoundaryFunction& f) {
    if (!(f.grid() == space.grid()))
        throw GridMismatchError("projection requires the space grid");
    const Eigen::Map<const Eigen::VectorXcd> s(f.samples().data(),
                                               static_cast<Eigen::Index>(f.size()));
    return (space.m_table().adjoint() * s) / static_cast<double>(f.size());
}

BoundaryFunction samples_M(const NearlyInvariantSpace& space,
                           const Eigen::VectorXcd& coeffs) {
    const Eigen::VectorXcd s = space.m_table() * coeffs;
    std::vector<cplx> out(s.data(), s.data() + s.size());
    return BoundaryFunction(space.grid(), std::move(out));
}

cplx eval_M(const NearlyInvariantSpace& space, const Eigen::VectorXcd& coeffs, cplx z) {
    if (std::abs(z) > 1.0 + 1e-12)
        throw DiskDomainError("evaluation requires |z| <= 1");
    cplx h = 0.0;
    for (std::size_t k = 0; k < space.basis()->degree(); ++k)
        h += coeffs(static_cast<Eigen::Index>(k)) * space.basis()->eval_basis(k, z);
    return series_eval(space.g(), z) * h;
}

cplx kernel_M(const NearlyInvariantSpace& space, cplx lambda, cplx z) {
    if (std::abs(lambda) >= 1.0)
        throw DiskDomainError("kernel parameter must be an interior point");
    if (std::abs(z) > 1.0 + 1e-12)
        throw DiskDomainError("kernel argument must satisfy |z| <= 1");
    return std::conj(series_eval(space.g(), lambda)) * series_eval(space.g(), z) *
           kernel_eval(space.inner(), lambda, z);
}

BoundaryFunction kernel_samples_M(const NearlyInvariantSpace& space, cplx lambda) {
    if (std::abs(lambda) >= 1.0)
        throw DiskDomainError("kernel parameter must be an interior point");
    const CircleGrid& grid = space.grid();
    const cplx weight = std::conj(series_eval(space.g(), lambda));
    const std::vector<cplx>& gs = space.g().source().samples();
    std::vector<cplx> samples(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        samples[j] = weight * gs[j] * kernel_eval(space.inner(), lambda, grid.node(j));
    return BoundaryFunction(grid, std::move(samples));
}

OperatorMatrix assemble_AM(const NearlyInvariantSpace& space,
                           const BoundaryFunction& symbol) {
    if (!(symbol.grid() == space.grid()))
        throw GridMismatchError("symbol must live on the space grid");
    const Eigen::Map<const Eigen::VectorXcd> phi(symbol.samples().data(),
                                                 static_cast<Eigen::Index>(symbol.size()));
    Eigen::MatrixXcd m = (space.m_table().adjoint() * phi.asDiagonal() * space.m_table()) /
                         static_cast<double>(symbol.size());
    return OperatorMatrix{space.basis(), Frame::transported, std::move(m)};
}

double spatial_isomorphism_residual(const NearlyInvariantSpace& space,
                                    const BoundaryFunction& symbol) {
    const BoundaryFunction weight =
        space.g().source().pointwise_product(space.g().source().conjugated());
    const OperatorMatrix lhs = assemble_AM(space, symbol);
    const OperatorMatrix rhs = assemble(space.basis(), weight.pointwise_product(symbol));
    return spectral_norm(lhs.entries - rhs.entries);
}

ConjugationMap conjugation_g(const NearlyInvariantSpace& space) {
    ConjugationMap c = conjugation(space.basis());
    c.frame = Frame::transported;
    return c;
}

OperatorMatrix shift_M(const NearlyInvariantSpace& space) {
    OperatorMatrix m = compressed_shift(space.basis());
    m.frame = Frame::transported;
    return m;
}

OperatorMatrix selfadjoint_rank_one_M(const NearlyInvariantSpace& space, cplx zeta) {
    OperatorMatrix m = rank_one(space.basis(), RankOneKind::boundary, zeta);
    m.frame = Frame::transported;
    return m;
}

double q_tail(const NearlyInvariantSpace& space, std::size_t n,
              const Eigen::VectorXcd& coeffs) {
    const Eigen::MatrixXcd back = compressed_shift(space.basis()).entries.adjoint();
    Eigen::VectorXcd v = coeffs;
    for (std::size_t i = 0; i < n; ++i)
        v = back * v;
    return v.norm();
}

ExtremalityReport extremality_check(const NearlyInvariantSpace& space,
                                    std::size_t trials, std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("at least one trial required");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t d = space.basis()->degree();

    ExtremalityReport report;
    report.trials = trials;
    report.bound = space.g_zero();
    for (std::size_t t = 0; t < trials; ++t) {
        Eigen::VectorXcd c(static_cast<Eigen::Index>(d));
        for (Eigen::Index k = 0; k < c.size(); ++k)
            c(k) = cplx(gauss(rng), gauss(rng));
        if (c.norm() == 0.0)
            continue;
        c /= c.norm();
        const double re0 = eval_M(space, c, 0.0).real();
        report.max_attained = std::max(report.max_attained, re0);
        if (re0 > report.bound + 1e-9)
            report.violation = true;
    }
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    e1(0) = 1.0;
    report.attained_by_multiplier =
        std::abs(eval_M(space, e1, 0.0).real() - report.bound) <= 1e-9;
    return report;
}

} // namespace mslab

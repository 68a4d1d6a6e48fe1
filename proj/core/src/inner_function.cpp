#include "mslab/inner_function.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mslab/hardy.hpp"

namespace mslab {

namespace {

class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

cplx blaschke_factor(cplx a, cplx z) {
    if (a == cplx(0.0))
        return z;
    return (std::conj(a) / std::abs(a)) * (a - z) / (1.0 - std::conj(a) * z);
}

} // namespace

InnerFunction::InnerFunction(cplx phase, std::vector<cplx> blaschke_zeros,
                             std::vector<SingularAtom> atoms)
    : phase_(phase), zeros_(std::move(blaschke_zeros)), atoms_(std::move(atoms)) {
    if (std::abs(std::abs(phase_) - 1.0) > 1e-12)
        throw std::invalid_argument("inner-function phase must be unimodular");
    for (const cplx& a : zeros_)
        if (!(std::abs(a) < 1.0))
            throw DiskDomainError("Blaschke zeros must be interior points");
    for (const SingularAtom& s : atoms_) {
        if (std::abs(std::abs(s.zeta) - 1.0) > 1e-12)
            throw DiskDomainError("atom locations must be unimodular");
        if (!(s.mass > 0.0))
            throw std::invalid_argument("atom masses must be positive");
    }
}

InnerFunction InnerFunction::blaschke(std::vector<cplx> zeros) {
    return InnerFunction(1.0, std::move(zeros), {});
}

InnerFunction InnerFunction::atom(cplx zeta, double mass) {
    return InnerFunction(1.0, {}, {SingularAtom{zeta, mass}});
}

double InnerFunction::max_zero_modulus() const {
    double m = 0.0;
    for (const cplx& a : zeros_)
        m = std::max(m, std::abs(a));
    return m;
}

InnerFunction InnerFunction::times(const InnerFunction& other) const {
    std::vector<cplx> z = zeros_;
    z.insert(z.end(), other.zeros_.begin(), other.zeros_.end());
    std::vector<SingularAtom> a = atoms_;
    a.insert(a.end(), other.atoms_.begin(), other.atoms_.end());
    return InnerFunction(phase_ * other.phase_, std::move(z), std::move(a));
}

cplx InnerFunction::eval(cplx z) const {
    for (const SingularAtom& s : atoms_)
        if (std::abs(z - s.zeta) < 1e-14)
            throw SingularityError("evaluation at a singular atom location");

    KahanSum log_mod, arg_sum;
    for (const cplx& a : zeros_) {
        const cplx f = blaschke_factor(a, z);
        if (f == cplx(0.0))
            return 0.0;
        log_mod.add(std::log(std::abs(f)));
        arg_sum.add(std::arg(f));
    }
    for (const SingularAtom& s : atoms_) {
        const cplx w = -s.mass * (s.zeta + z) / (s.zeta - z);
        log_mod.add(w.real());
        arg_sum.add(w.imag());
    }
    return phase_ * std::exp(log_mod.value()) * std::polar(1.0, arg_sum.value());
}

double InnerFunction::log_modulus(cplx z) const {
    for (const SingularAtom& s : atoms_)
        if (std::abs(z - s.zeta) < 1e-14)
            throw SingularityError("evaluation at a singular atom location");

    KahanSum log_mod;
    for (const cplx& a : zeros_) {
        const cplx f = blaschke_factor(a, z);
        if (f == cplx(0.0))
            return -std::numeric_limits<double>::infinity();
        log_mod.add(std::log(std::abs(f)));
    }
    for (const SingularAtom& s : atoms_)
        log_mod.add((-s.mass * (s.zeta + z) / (s.zeta - z)).real());
    return log_mod.value();
}

double kernel_norm_sq(const InnerFunction& inner, cplx lambda) {
    if (std::abs(lambda) >= 1.0)
        throw DiskDomainError("kernel norm requires an interior point");
    const double two_log = 2.0 * inner.log_modulus(lambda);
    return -std::expm1(two_log) / (1.0 - std::norm(lambda));
}

AdcVerdict adc_probe(const InnerFunction& inner, cplx zeta, double alpha,
                     const std::vector<double>& depths) {
    constexpr std::size_t probe_rays = 5;
    StolzRegion region(zeta, alpha);
    AdcVerdict verdict;
    verdict.sup_norm_sq = 0.0;
    const auto rays = stolz_rays(region, probe_rays, depths);
    for (std::size_t r = 0; r < rays.size(); ++r) {
        for (cplx z : rays[r]) {
            const double ns = kernel_norm_sq(inner, z);
            verdict.samples.push_back(AdcSample{r, z, ns});
            verdict.sup_norm_sq = std::max(verdict.sup_norm_sq, ns);
        }
    }
    if (verdict.samples.empty())
        throw DiskDomainError("no admissible probe samples for the given depths");

    // Least-squares slope of log norm^2 against log 1/(1-r).
    const auto slope = [](const std::vector<std::pair<double, double>>& xy) {
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
    };

    double min_gap = 1.0;
    for (const AdcSample& s : verdict.samples)
        min_gap = std::min(min_gap, 1.0 - std::abs(s.point));

    std::vector<std::pair<double, double>> all, last_decade;
    for (const AdcSample& s : verdict.samples) {
        const double gap = 1.0 - std::abs(s.point);
        const std::pair<double, double> xy{std::log(1.0 / gap), std::log(s.norm_sq)};
        all.push_back(xy);
        if (gap <= 10.0 * min_gap)
            last_decade.push_back(xy);
    }
    verdict.growth_exponent_estimate = slope(all);
    const double decade_slope = slope(last_decade);
    verdict.bounded = std::pow(10.0, decade_slope) < 1.05;
    return verdict;
}

InnerFunction blaschke_lambda(double q, std::size_t count) {
    if (!(q > 0.0 && q < 1.0))
        throw DiskDomainError("ratio must lie in (0,1)");
    if (count < 1)
        throw std::invalid_argument("count must be at least 1");
    std::vector<cplx> zeros;
    zeros.reserve(count);
    double qn = 1.0;
    for (std::size_t n = 1; n <= count; ++n) {
        qn *= q;
        zeros.emplace_back(1.0 - qn);
    }
    required_grid_size(1.0 - qn);
    return InnerFunction::blaschke(std::move(zeros));
}

} // namespace mslab

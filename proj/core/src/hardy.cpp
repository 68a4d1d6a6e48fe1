#include "mslab/hardy.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mslab {

HardyEvaluator::HardyEvaluator(BoundaryFunction source)
    : source_(std::move(source)), norm_(source_.norm()) {
    const double leak = source_.negative_leakage();
    if (leak > leakage_gate * norm_)
        throw AnalyticityError("negative-frequency content " + std::to_string(leak) +
                               " exceeds the Hardy admission gate for norm " +
                               std::to_string(norm_));
}

double HardyEvaluator::top_octave_magnitude() const {
    const auto& c = source_.coefficients();
    const std::size_t n = source_.size();
    double m = 0.0;
    for (std::size_t k = n / 4; k < n / 2; ++k)
        m = std::max(m, std::abs(c[k]));
    return m;
}

cplx series_eval(const HardyEvaluator& f, cplx z) {
    if (std::abs(z) > 1.0 + 1e-12)
        throw DiskDomainError("series evaluation requires the closed disk");
    const auto& c = f.source().coefficients();
    const std::size_t half = f.source().size() / 2;
    cplx acc = 0.0;
    for (std::size_t k = half; k-- > 0;)
        acc = acc * z + c[k];
    return acc;
}

cplx cauchy_eval(const HardyEvaluator& f, cplx lambda) {
    if (std::abs(lambda) >= 1.0)
        throw DiskDomainError("cauchy_eval requires an interior point");
    return series_eval(f, lambda);
}

HardyEvaluator outer_from_modulus(const CircleGrid& grid, const std::vector<double>& w) {
    if (w.size() != grid.size())
        throw GridMismatchError("modulus sample count does not match grid size");
    constexpr double floor = 1e-8;
    std::vector<cplx> logw(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j] >= floor))
            throw DegenerateModulusError("modulus sample below the 1e-8 floor");
        logw[j] = std::log(w[j]);
    }

    const std::size_t n = grid.size();
    std::vector<cplx> l;
    fft::forward(logw, l);
    const double inv = 1.0 / static_cast<double>(n);
    std::vector<cplx> m(n, cplx(0.0));
    m[0] = l[0] * inv;
    for (std::size_t k = 1; k < n / 2; ++k)
        m[k] = 2.0 * l[k] * inv;
    m[n / 2] = l[n / 2] * inv;

    std::vector<cplx> log_samples;
    fft::backward(m, log_samples);
    std::vector<cplx> samples(n);
    for (std::size_t j = 0; j < n; ++j)
        samples[j] = std::exp(log_samples[j]);

    HardyEvaluator outer{BoundaryFunction(grid, std::move(samples))};

    // Argument-principle check on |z| = 0.99: the winding number of the
    // scaled-coefficient curve about 0 must vanish (no interior zeros).
    const auto& c = outer.source().coefficients();
    std::vector<cplx> scaled(n, cplx(0.0));
    double rk = 1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        scaled[k] = c[k] * rk;
        rk *= 0.99;
    }
    std::vector<cplx> curve;
    fft::backward(scaled, curve);
    double winding = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx a = curve[j];
        const cplx b = curve[(j + 1) % n];
        winding += std::arg(b / a);
    }
    winding /= 2.0 * std::numbers::pi;
    if (std::abs(winding) > 0.5)
        throw ValidationError("outer construction produced interior zeros (winding " +
                              std::to_string(winding) + ")");
    return outer;
}

double tail_norm(const HardyEvaluator& f, std::size_t n) {
    const auto& c = f.source().coefficients();
    const std::size_t half = f.source().size() / 2;
    double s = 0.0, comp = 0.0;
    for (std::size_t k = n; k < half; ++k) {
        const double x = std::norm(c[k]);
        const double y = x - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return std::sqrt(s);
}

std::size_t required_grid_size(double max_zero_modulus) {
    if (!(max_zero_modulus >= 0.0 && max_zero_modulus < 1.0))
        throw DiskDomainError("zero modulus must lie in [0,1)");
    std::size_t n = 16;
    while (static_cast<double>(n) * std::log(std::max(max_zero_modulus, 1e-300)) >=
           std::log(1e-12)) {
        if (n >= grid_size_cap)
            throw ResolutionError("grid-resolution policy cap 2^20 exceeded");
        n *= 2;
    }
    return n;
}

} // namespace mslab

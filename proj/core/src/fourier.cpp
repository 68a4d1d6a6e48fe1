#include "mslab/fourier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace mslab {

namespace fft {

namespace {

// FFTW planning is not thread-safe and plans own their buffers; all
// transforms copy through the plan's buffers under one lock. Plans use
// FFTW_ESTIMATE so the chosen algorithm is deterministic.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair& plan_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> plans;
    auto it = plans.find(n);
    if (it == plans.end()) {
        PlanPair p;
        p.in = fftw_alloc_complex(n);
        p.out = fftw_alloc_complex(n);
        p.forward = fftw_plan_dft_1d(static_cast<int>(n), p.in, p.out,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
        p.backward = fftw_plan_dft_1d(static_cast<int>(n), p.in, p.out,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
        it = plans.emplace(n, p).first;
    }
    return it->second;
}

void run(const std::vector<cplx>& in, std::vector<cplx>& out, bool fwd) {
    const std::size_t n = in.size();
    out.resize(n);
    std::lock_guard<std::mutex> lock(plan_mutex());
    PlanPair& p = plan_for(n);
    for (std::size_t j = 0; j < n; ++j) {
        p.in[j][0] = in[j].real();
        p.in[j][1] = in[j].imag();
    }
    fftw_execute(fwd ? p.forward : p.backward);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = cplx(p.out[j][0], p.out[j][1]);
}

} // namespace

void forward(const std::vector<cplx>& in, std::vector<cplx>& out) { run(in, out, true); }
void backward(const std::vector<cplx>& in, std::vector<cplx>& out) { run(in, out, false); }

} // namespace fft

namespace {

// Compensated (Kahan) accumulation of a real sum.
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

} // namespace

BoundaryFunction::BoundaryFunction(CircleGrid grid, std::vector<cplx> samples,
                                   std::vector<cplx> coeffs)
    : grid_(grid), samples_(std::move(samples)), coeffs_(std::move(coeffs)) {}

BoundaryFunction::BoundaryFunction(CircleGrid grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw GridMismatchError("sample count does not match grid size");
    fft::forward(samples_, coeffs_);
    const double inv = 1.0 / static_cast<double>(grid_.size());
    for (cplx& c : coeffs_) c *= inv;
}

BoundaryFunction BoundaryFunction::from_coefficients(CircleGrid grid,
                                                     std::vector<cplx> coefficients) {
    if (coefficients.size() != grid.size())
        throw GridMismatchError("coefficient count does not match grid size");
    std::vector<cplx> samples;
    fft::backward(coefficients, samples);
    return BoundaryFunction(grid, std::move(samples), std::move(coefficients));
}

BoundaryFunction BoundaryFunction::sample(CircleGrid grid,
                                          const std::function<cplx(cplx)>& f) {
    std::vector<cplx> s(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        s[j] = f(grid.node(j));
    return BoundaryFunction(grid, std::move(s));
}

cplx BoundaryFunction::coefficient(long k) const {
    const long n = static_cast<long>(size());
    if (k < -n / 2 || k >= n / 2)
        return 0.0;
    return coeffs_[static_cast<std::size_t>((k + n) % n)];
}

double BoundaryFunction::norm() const {
    KahanSum s;
    for (const cplx& v : samples_)
        s.add(std::norm(v));
    return std::sqrt(s.value() / static_cast<double>(size()));
}

double BoundaryFunction::negative_leakage() const {
    double m = 0.0;
    for (std::size_t k = size() / 2; k < size(); ++k)
        m = std::max(m, std::abs(coeffs_[k]));
    return m;
}

BoundaryFunction BoundaryFunction::conjugated() const {
    std::vector<cplx> s(size());
    for (std::size_t j = 0; j < size(); ++j)
        s[j] = std::conj(samples_[j]);
    return BoundaryFunction(grid_, std::move(s));
}

BoundaryFunction BoundaryFunction::pointwise_product(const BoundaryFunction& other) const {
    if (!(grid_ == other.grid_))
        throw GridMismatchError("pointwise product requires identical grids");
    std::vector<cplx> s(size());
    for (std::size_t j = 0; j < size(); ++j)
        s[j] = samples_[j] * other.samples_[j];
    return BoundaryFunction(grid_, std::move(s));
}

BoundaryFunction BoundaryFunction::scaled(cplx factor) const {
    std::vector<cplx> s(size());
    for (std::size_t j = 0; j < size(); ++j)
        s[j] = factor * samples_[j];
    return BoundaryFunction(grid_, std::move(s));
}

BoundaryFunction BoundaryFunction::plus(const BoundaryFunction& other) const {
    if (!(grid_ == other.grid_))
        throw GridMismatchError("sum requires identical grids");
    std::vector<cplx> s(size());
    for (std::size_t j = 0; j < size(); ++j)
        s[j] = samples_[j] + other.samples_[j];
    return BoundaryFunction(grid_, std::move(s));
}

cplx inner_product(const BoundaryFunction& f, const BoundaryFunction& g) {
    if (!(f.grid() == g.grid()))
        throw GridMismatchError("inner product requires identical grids");
    KahanSum re, im;
    const auto& fs = f.samples();
    const auto& gs = g.samples();
    for (std::size_t j = 0; j < fs.size(); ++j) {
        const cplx p = fs[j] * std::conj(gs[j]);
        re.add(p.real());
        im.add(p.imag());
    }
    const double inv = 1.0 / static_cast<double>(fs.size());
    return cplx(re.value() * inv, im.value() * inv);
}

BoundaryFunction riesz_project(const BoundaryFunction& f) {
    std::vector<cplx> c = f.coefficients();
    for (std::size_t k = c.size() / 2; k < c.size(); ++k)
        c[k] = 0.0;
    return BoundaryFunction::from_coefficients(f.grid(), std::move(c));
}

} // namespace mslab

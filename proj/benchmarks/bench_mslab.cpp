// Microbenchmarks for the hot paths: transform caching, basis assembly,
// operator compression, outer completion and full space builds.

#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mslab/boundary_probe.hpp"
#include "mslab/nearly_invariant.hpp"

using namespace mslab;

namespace {

std::vector<cplx> noisy_samples(std::size_t n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(gauss(rng), gauss(rng));
    return v;
}

std::shared_ptr<const TMBasis> bench_basis(std::size_t degree, std::size_t grid) {
    std::vector<cplx> zeros{cplx(0.0)};
    for (std::size_t k = 1; k < degree; ++k)
        zeros.push_back(std::polar(0.1 + 0.6 * static_cast<double>(k) /
                                             static_cast<double>(degree),
                                   2.39996 * static_cast<double>(k)));
    return std::make_shared<const TMBasis>(InnerFunction::blaschke(std::move(zeros)),
                                           CircleGrid(grid));
}

SarasonPair unit_pair(const CircleGrid& grid) {
    return SarasonPair(
        HardyEvaluator(BoundaryFunction(grid, std::vector<cplx>(grid.size(), cplx(1.0)))),
        HardyEvaluator(BoundaryFunction(grid, std::vector<cplx>(grid.size(), cplx(0.0)))));
}

void boundary_transform(benchmark::State& state) {
    const CircleGrid grid(static_cast<std::size_t>(state.range(0)));
    const std::vector<cplx> samples = noisy_samples(grid.size());
    for (auto _ : state) {
        BoundaryFunction f(grid, samples);
        benchmark::DoNotOptimize(f.coefficient(1));
    }
}
BENCHMARK(boundary_transform)->Arg(1024)->Arg(8192)->Arg(65536);

void basis_construction(benchmark::State& state) {
    const std::size_t degree = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto basis = bench_basis(degree, 1024);
        benchmark::DoNotOptimize(basis->sample_table());
    }
}
BENCHMARK(basis_construction)->Arg(4)->Arg(8)->Arg(16);

void symbol_compression(benchmark::State& state) {
    auto basis = bench_basis(8, static_cast<std::size_t>(state.range(0)));
    const BoundaryFunction phi =
        BoundaryFunction::sample(basis->grid(), [](cplx z) {
            return z + 0.5 * std::conj(z) + 0.25 * z * z;
        });
    for (auto _ : state) {
        OperatorMatrix a = assemble(basis, phi);
        benchmark::DoNotOptimize(a.entries);
    }
}
BENCHMARK(symbol_compression)->Arg(512)->Arg(4096);

void model_projection(benchmark::State& state) {
    auto basis = bench_basis(8, 4096);
    const BoundaryFunction f(basis->grid(), noisy_samples(basis->grid().size()));
    for (auto _ : state) {
        ModelSpaceElement c = project(basis, f);
        benchmark::DoNotOptimize(c.coeffs());
    }
}
BENCHMARK(model_projection);

void outer_completion(benchmark::State& state) {
    const CircleGrid grid(static_cast<std::size_t>(state.range(0)));
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        w[j] = std::sqrt(1.25 + std::cos(grid.theta(j)));
    for (auto _ : state) {
        HardyEvaluator h = outer_from_modulus(grid, w);
        benchmark::DoNotOptimize(h.norm());
    }
}
BENCHMARK(outer_completion)->Arg(1024)->Arg(16384);

void space_build(benchmark::State& state) {
    const InnerFunction inner = InnerFunction::blaschke(
        {cplx(0.0), cplx(0.5), cplx(0.0, -0.6), cplx(0.3, 0.3)});
    for (auto _ : state) {
        auto space = build_space(inner, unit_pair, {});
        benchmark::DoNotOptimize(space->isometry_residual());
    }
}
BENCHMARK(space_build);

void oscillation_build(benchmark::State& state) {
    const InnerFunction inner = InnerFunction::blaschke({cplx(0.0), cplx(0.0)});
    for (auto _ : state) {
        OscillationReport rep = oscillation_example(2, 4, inner, 0);
        benchmark::DoNotOptimize(rep.delta);
    }
}
BENCHMARK(oscillation_build)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mslab/disk_geometry.hpp"
#include "mslab/inner_function.hpp"

namespace mslab {

enum class PairKind { trivial, oscillation, vanishing, samples };

struct PairConfig {
    PairKind kind = PairKind::trivial;
    // Truncation orders of the oscillation construction; n2 = 2 n1.
    std::size_t n1 = 2;
    std::size_t n2 = 4;
    // Pre-sampled pair components for kind "samples".
    std::filesystem::path a_csv;
    std::filesystem::path b_csv;
};

struct ProbeConfig {
    cplx zeta{1.0, 0.0};
    std::vector<double> apertures{2.0, 4.0};
    // Geometric depth schedule: radii 1 - first_gap * ratio^k, k < count.
    // The default reaches 1 - 2^{-25}, deep enough for Lipschitz limits to
    // settle inside the non-tangential tolerance.
    double first_gap = 0.0625;
    double ratio = 0.5;
    std::size_t count = 22;

    std::vector<double> radii() const;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    // 0 selects the resolution-policy grid.
    std::size_t grid = 0;
    std::vector<std::string> suites;
    InnerFunction inner = InnerFunction::blaschke({cplx(0.0), cplx(0.0)});
    PairConfig pair;
    ProbeConfig probe;
};

// Parses and validates the JSON config; any schema violation throws
// ValidationError with a message naming the offending field.
ExperimentConfig parse_config(const std::filesystem::path& path);

// Runs the selected suites in order, writing report.json and the CSV
// artifacts into out_dir. Returns 0 when every suite met its contract,
// 1 otherwise. Given identical config and seed the report is byte-identical
// apart from wall-time fields.
int run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

} // namespace mslab

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mslab/errors.hpp"
#include "mslab/experiment.hpp"
#include "mslab/hardy.hpp"

namespace {

bool valid_grid(std::size_t n) {
    return n == 0 || (n >= 16 && n <= mslab::grid_size_cap && (n & (n - 1)) == 0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model space laboratory"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "execute the suites selected by a config");
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t grid = 0;
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_dir, "output directory for report.json and CSVs")
        ->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the config seed");
    CLI::Option* grid_opt =
        run->add_option("--grid", grid, "override the initial grid size (power of two)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        mslab::ExperimentConfig config = mslab::parse_config(config_path);
        if (seed_opt->count() > 0) config.seed = seed;
        if (grid_opt->count() > 0) {
            if (!valid_grid(grid)) {
                std::cerr << "error: --grid must be 0 or a power of two in [16, "
                          << mslab::grid_size_cap << "]\n";
                return 2;
            }
            config.grid = grid;
        }
        return mslab::run_experiment(config, out_dir);
    } catch (const mslab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

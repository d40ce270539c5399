#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "uavls/errors.hpp"
#include "uavls/runner.hpp"
#include "uavls/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis for UAV links under interference"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "Evaluate a scenario config and emit CSV");
    std::string config_path;
    std::string out_path;
    uavls::cli::RunOptions opts;
    std::uint64_t seed = 0, trials = 0;
    double tolerance = 0.0;
    run->add_option("config", config_path, "Scenario config file")->required();
    run->add_option("--out", out_path, "Write CSV here instead of stdout");
    auto* seed_opt = run->add_option("--seed", seed, "Override the simulation seed");
    auto* trials_opt = run->add_option("--trials", trials, "Override the trial count");
    auto* tol_opt =
        run->add_option("--tolerance", tolerance, "Quadrature relative tolerance");

    CLI11_PARSE(app, argc, argv);

    if (*seed_opt) opts.seed = seed;
    if (*trials_opt) opts.trials = trials;
    if (*tol_opt) opts.tolerance = tolerance;

    try {
        const auto cfg = uavls::cli::load_config_file(config_path);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot open output file '" << out_path << "'\n";
                return 2;
            }
            return uavls::cli::run_scenario(cfg, out, std::cerr, opts);
        }
        return uavls::cli::run_scenario(cfg, std::cout, std::cerr, opts);
    } catch (const uavls::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const uavls::quadrature_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const uavls::solver_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

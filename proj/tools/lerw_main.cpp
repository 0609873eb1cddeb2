#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "lerw/harness.hpp"

namespace {

constexpr const char* kUsage =
    "usage: lerw <experiment> [--config FILE] [--N INT] [--alpha REAL|inf] [--dim INT]\n"
    "            [--replicas INT] [--seed U64] [--workers INT] [--out DIR]\n"
    "            [--n-grid LIST] [--beta-grid LIST] [--margin REAL] [--zeta REAL]\n"
    "            [--max-path-len INT] [--max-points INT] [--bootstrap INT] [--ci-level REAL]\n"
    "experiments: survival rho-ratio sigma-scaling clt tau-clt compare-lew zeta z-decay walk erase\n"
    "exit codes: 0 success, 1 config error, 2 resource refusal, 3 runtime failure\n";

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args)
        if (a == "-h" || a == "--help") {
            std::cout << kUsage;
            return 0;
        }

    lerw::ExperimentConfig cfg;
    try {
        cfg = lerw::parse_config(args);
    } catch (const lerw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n" << kUsage;
        return 1;
    }

    try {
        const lerw::RunResult result = lerw::run_experiment(cfg);
        const auto files = lerw::write_outputs(result, cfg.out_dir);
        for (const auto& w : result.manifest.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& f : files) std::cout << f.string() << "\n";
        if (!result.valid) std::cerr << "result flagged invalid (see summary.json)\n";
        return 0;
    } catch (const lerw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const lerw::ResourceError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

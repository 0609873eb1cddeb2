#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lerw/walk.hpp"

namespace lerw {

enum class Experiment {
    survival,
    rho_ratio,
    sigma_scaling,
    clt,
    tau_clt,
    compare_lew,
    zeta,
    z_decay,
    walk,
    erase,
};

std::string_view to_string(Experiment e) noexcept;
std::optional<Experiment> experiment_from_string(std::string_view name) noexcept;

/// Invalid or unknown configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Work refused up front because it would exceed the configured budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full description of a reproducible campaign.
struct ExperimentConfig {
    Experiment experiment = Experiment::survival;
    std::int64_t N = 1024;
    double alpha = 0.4;  // kInfiniteAlpha for full erasure
    int dim = 3;
    std::int64_t replicas = 1000;
    std::uint64_t master_seed = 0;
    std::vector<std::int64_t> n_grid;  // empty: experiment default
    std::vector<double> beta_grid;     // empty: experiment default
    double margin_factor = 1.0;        // path length = needed + margin_factor * W
    int workers = 1;
    std::filesystem::path out_dir = "out";

    std::int64_t max_path_len = std::int64_t{1} << 26;  // points per walk
    std::int64_t max_points = std::int64_t{1} << 36;    // path length x replicas
    std::optional<double> zeta_hat;                     // for the regime warning
    std::int64_t bootstrap_resamples = 1000;
    double ci_level = 0.95;

    /// W = floor(N^alpha) clamped to [1, max_path_len].
    Index window() const;
    /// ceil(margin_factor * W): how far past an index the path must reach.
    Index margin_steps() const;
    bool infinite_alpha() const noexcept;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
};

/// Reads a JSON config document. Keys mirror the field names above
/// ("experiment", "N", "alpha", "dim", "replicas", "master_seed", "n_grid",
/// "beta_grid", "margin_factor", "workers", "out_dir", "max_path_len",
/// "max_points", "zeta_hat", "bootstrap_resamples", "ci_level"). alpha may
/// be the string "inf". Unknown keys and type errors throw ConfigError.
/// Fields absent from the document keep their values in `base`.
ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig base = {});

/// Parses `lerw <experiment> [--config FILE] [flags...]` (args exclude the
/// program name). Flags override file values. The result is validated.
ExperimentConfig parse_config(const std::vector<std::string>& args);

}  // namespace lerw

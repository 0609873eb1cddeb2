#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lerw/config.hpp"
#include "lerw/erasure.hpp"

namespace lerw {

// Stream namespaces. Replica k of a single-stage experiment, and of the
// survival-curve stage of a two-stage one, uses stream k; replica k of the
// second stage uses stream R + k.
inline std::uint64_t curve_stream(std::int64_t k) { return static_cast<std::uint64_t>(k); }
inline std::uint64_t experiment_stream(std::int64_t replicas, std::int64_t k) {
    return static_cast<std::uint64_t>(replicas + k);
}
/// Dedicated stream for bootstrap resampling, outside every replica range.
inline constexpr std::uint64_t kBootstrapStream = 0xB007'5749'0000'0000ULL;

struct SurvivalEntry {
    Index n = 0;
    Index window = 1;
    double a_hat = 0.0;
    double std_error = 0.0;  // sqrt(a_hat (1 - a_hat) / replicas)
    std::int64_t replicas = 0;
};

/// Estimated survival probabilities a_hat(n) = P(index n is a jump time).
struct SurvivalCurve {
    double alpha = 0.0;
    std::int64_t N = 0;
    std::vector<SurvivalEntry> entries;  // increasing n

    /// a_hat at n: exact on grid points, log-log interpolation between them
    /// (linear when a neighbour is zero). Throws std::out_of_range outside
    /// the grid.
    double at(Index n) const;
    const SurvivalEntry* find(Index n) const noexcept;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    double r_squared = 0.0;
    Index points = 0;
};

/// Ordinary least squares y = intercept + slope x. Needs >= 3 points.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

/// y ~ amplitude * x^(-exponent), fit by least squares on log-log data.
struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double std_error = 0.0;
    double r_squared = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    Index points = 0;
};

/// Fits the points with x in [range.first, range.second]. Throws
/// std::invalid_argument for non-positive values or fewer than 3 points
/// in range.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points,
                          std::pair<double, double> range = {0.0, std::numeric_limits<double>::infinity()});

struct SampleSummary {
    double mean = 0.0;
    double std = std::numeric_limits<double>::quiet_NaN();  // sample std, NaN below 2 samples
};
SampleSummary summarize(std::span<const double> samples);

/// Per-replica observable with its stream index.
struct RatioSamples {
    std::int64_t N = 0;
    double alpha = 0.0;
    std::vector<std::uint64_t> streams;
    std::vector<Index> observed;  // rho(N) or sigma(N) per replica
    std::vector<double> samples;
    double mean = 0.0;
    double std = std::numeric_limits<double>::quiet_NaN();
    bool std_defined = false;
    std::int64_t attempted = 0;
    std::int64_t censored = 0;

    double censored_fraction() const noexcept {
        return attempted == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(attempted);
    }
    /// False when more than 10% of replicas were censored.
    bool valid() const noexcept { return censored_fraction() <= 0.10; }
};

/// Survival curve at `grid` (or cfg.n_grid, or {N}) from streams 0..R-1.
/// Each walk reaches max(grid) + margin_steps(). Throws ConfigError for
/// replicas < 2, margin_factor < 1 or infinite alpha.
SurvivalCurve estimate_survival(const ExperimentConfig& cfg, std::vector<Index> grid = {});

/// a_hat(N', floor(N'^alpha)) for each N' in `grid`: the survival
/// probability at the scaling index itself, each with its own window.
/// Streams 0..R-1, one walk per replica shared across the grid.
SurvivalCurve estimate_scaling_survival(const ExperimentConfig& cfg, std::vector<Index> grid);

/// rho(N) / (N a_hat(N)) per replica on streams R..2R-1.
RatioSamples rho_ratio_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve);

/// Per-replica N-th jump time on streams R..2R-1. Walks grow by doubling
/// from `initial_steps` until the pivot of sigma(N) plus margin_steps() lies
/// inside the walk; past cfg.max_path_len the replica is censored (-1).
struct SigmaRealization {
    std::int64_t N = 0;
    Index window = 1;
    std::vector<Index> sigma;
    std::int64_t censored = 0;

    std::pair<Index, Index> range() const;  // over uncensored replicas
};
SigmaRealization realize_sigma(const ExperimentConfig& cfg, Index initial_steps = 0);

/// sigma(N) a_hat(sigma(N)) / N per uncensored replica.
RatioSamples sigma_scaling_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve,
                                      const SigmaRealization& sigma);
RatioSamples sigma_scaling_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve);

struct ZDecayPoint {
    double beta = 0.0;
    double x = 0.0;  // N^(beta - alpha)
    Index span = 0;  // floor(N^beta)
    double p_hat = 0.0;
    double std_error = 0.0;
    std::int64_t replicas = 0;
};

/// Default grid: 20 values of N^(beta - alpha) spaced geometrically over [1.1, 11].
std::vector<double> default_beta_grid(const ExperimentConfig& cfg);

/// P(no loop-free index in [k - floor(N^beta), k]) per beta, with
/// k = max(N, max span) on streams 0..R-1. Throws std::invalid_argument when
/// some beta <= alpha.
std::vector<ZDecayPoint> estimate_z_decay(const ExperimentConfig& cfg, std::vector<double> beta_grid);

struct ZetaEstimate {
    double zeta_hat = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();      // bootstrap std of zeta_hat
    double fit_std_error = std::numeric_limits<double>::quiet_NaN();  // regression residuals
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    Index n_min = 0;
    Index n_max = 0;
    std::int64_t replicas = 0;
    std::vector<std::pair<Index, double>> survival_points;
    std::vector<Index> first_hit;  // per replica; n_max + 1 when none
    bool degenerate = false;       // some p(n) == 0, or too few positive points
};

/// Default grid 2^6, ..., 2^12.
std::vector<Index> default_zeta_grid();

/// Two independent walks from the origin per replica (interleaved draws of
/// stream k); p(n) = P(S[1,n] and S'[0,n] are disjoint), zeta_hat = the
/// power-law decay exponent of p. The confidence interval is a percentile
/// bootstrap over replicas. Throws std::invalid_argument for a grid with
/// fewer than 3 points or not increasing.
ZetaEstimate estimate_zeta(const ExperimentConfig& cfg, std::vector<Index> n_grid);

/// Fits p(n) from per-replica first hitting times (the bootstrap statistic).
double zeta_from_first_hits(std::span<const Index> first_hit, std::span<const Index> n_grid);

/// alpha bound below which the Gaussian regime is expected: 1 / (1 + 2 zeta).
inline double theorem_regime_bound(double zeta) { return 1.0 / (1.0 + 2.0 * zeta); }

}  // namespace lerw

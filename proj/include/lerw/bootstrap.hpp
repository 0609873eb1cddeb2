#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lerw/rng.hpp"

namespace lerw {

enum class Statistic { mean, median, std };

double evaluate(Statistic s, std::span<const double> samples);

/// Percentile bootstrap interval at `level` from B resamples drawn with
/// `rng`. Throws std::invalid_argument for empty samples, B < 100 or level
/// outside (0, 1). A NaN statistic on any resample yields a NaN interval.
/// The statistic on each of B resamples (with replacement) drawn with
/// `rng`. Throws std::invalid_argument for empty samples or B < 100.
std::vector<double> bootstrap_replicates(std::span<const double> samples,
                                         const std::function<double(std::span<const double>)>& statistic,
                                         std::int64_t B, RngStream& rng);

/// Percentile interval of bootstrap replicates; NaN if any replicate is NaN.
std::pair<double, double> percentile_interval(std::vector<double> replicates, double level);

std::pair<double, double> bootstrap_ci(std::span<const double> samples,
                                       const std::function<double(std::span<const double>)>& statistic,
                                       std::int64_t B, double level, RngStream& rng);

std::pair<double, double> bootstrap_ci(std::span<const double> samples, Statistic statistic,
                                       std::int64_t B, double level, RngStream& rng);

}  // namespace lerw

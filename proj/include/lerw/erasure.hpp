#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lerw/walk.hpp"

namespace lerw {

/// Sentinel for alpha = infinity (full loop erasure).
inline constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

/// Memory horizon of the windowed erasure: W = floor(N^alpha), clamped to
/// [1, path_len]. alpha = infinity maps to path_len. Powers that are
/// mathematically integral (e.g. 1024^0.4 = 16) are snapped before flooring.
/// Throws std::invalid_argument for N < 1, path_len < 1, or alpha < 0.
Index window_length(std::int64_t N, double alpha, Index path_len);

/// floor(N^alpha) without clamping; same snapping rule as window_length.
Index floor_power(std::int64_t N, double alpha);

struct WindowSpec {
    std::int64_t N = 1;
    double alpha = 0.0;
    Index W = 1;
};

/// Result of one loop-erasing pass over a path.
///
/// sigma holds the jump times, y_flags[n] marks indices that are jump times,
/// rho[n] = y_flags[0] + ... + y_flags[n], and erased_path column i is
/// path[sigma[i]].
struct ErasureTrace {
    std::vector<Index> sigma;
    std::vector<std::uint8_t> y_flags;
    std::vector<Index> rho;
    PointMatrix erased_path;

    Index erased_length() const noexcept { return static_cast<Index>(sigma.size()); }

    bool operator==(const ErasureTrace& o) const {
        return sigma == o.sigma && y_flags == o.y_flags && rho == o.rho &&
               erased_path.rows() == o.erased_path.rows() &&
               erased_path.cols() == o.erased_path.cols() && erased_path == o.erased_path;
    }
};

/// Windowed loop erasure with occurrence lists and binary search,
/// O(n log n). sigma[0] is the last visit to the origin among indices <= W;
/// for i >= 1 with pivot t = sigma[i-1] + 1, sigma[i] is the last visit to
/// path[t] in [t, min(t + W, last)]. Stops when the pivot passes the end.
ErasureTrace erase_windowed(const WalkPath& path, Index W);

/// Same contract as erase_windowed by a literal backward scan of every
/// window, O(n W). Kept as the reference for the fast path.
ErasureTrace erase_windowed_naive(const WalkPath& path, Index W);

/// Classical loop erasure: erase_windowed with W = path length.
ErasureTrace erase_full(const WalkPath& path);

/// The first `count` jump times of erase_windowed (fewer if the pivot runs
/// off the path). Skips building y_flags, rho and the erased path.
std::vector<Index> windowed_jump_times(const WalkPath& path, Index W, Index count);

using Mask = std::vector<std::uint8_t>;

/// mask[n] = 1 iff no i < j with i <= n <= j, j - i <= W and path[i] == path[j].
Mask loop_free_mask(const WalkPath& path, Index W);

/// True iff mask[m] == 0 for every m in [j, k]. Throws std::out_of_range
/// unless 0 <= j <= k < mask.size().
bool z_indicator(std::span<const std::uint8_t> mask, Index j, Index k);

}  // namespace lerw

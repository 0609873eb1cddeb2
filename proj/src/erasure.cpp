#include "lerw/erasure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lerw/detail/point_index.hpp"

namespace lerw {

Index floor_power(std::int64_t N, double alpha) {
    if (N < 1) throw std::invalid_argument("window: N must be >= 1, got " + std::to_string(N));
    if (!(alpha >= 0.0)) throw std::invalid_argument("window: alpha must be >= 0");
    if (std::isinf(alpha)) return std::numeric_limits<Index>::max();
    const double x = std::pow(static_cast<double>(N), alpha);
    if (x >= 9.0e18) return std::numeric_limits<Index>::max();
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<Index>(r);
    return static_cast<Index>(std::floor(x));
}

Index window_length(std::int64_t N, double alpha, Index path_len) {
    if (path_len < 1) throw std::invalid_argument("window: path length must be >= 1");
    const Index w = floor_power(N, alpha);
    return std::clamp<Index>(w, 1, path_len);
}

namespace {

void require_window(const WalkPath& path, Index W) {
    if (W < 1) throw std::invalid_argument("erasure window must be >= 1");
    if (path.size() < 1) throw std::invalid_argument("erasure needs a nonempty path");
}

// Fills y_flags, rho and erased_path from sigma.
ErasureTrace finish_trace(const WalkPath& path, std::vector<Index> sigma) {
    ErasureTrace trace;
    const Index n = path.size();
    trace.y_flags.assign(static_cast<std::size_t>(n), 0);
    for (Index s : sigma) trace.y_flags[static_cast<std::size_t>(s)] = 1;
    trace.rho.resize(static_cast<std::size_t>(n));
    Index running = 0;
    for (Index i = 0; i < n; ++i) {
        running += trace.y_flags[static_cast<std::size_t>(i)];
        trace.rho[static_cast<std::size_t>(i)] = running;
    }
    trace.erased_path.resize(path.dim(), static_cast<Index>(sigma.size()));
    for (Index i = 0; i < static_cast<Index>(sigma.size()); ++i)
        trace.erased_path.col(i) = path.point(sigma[static_cast<std::size_t>(i)]);
    trace.sigma = std::move(sigma);
    return trace;
}

template <typename LastOccurrence>
std::vector<Index> jump_times(Index last, Index W, Index count, LastOccurrence&& last_occurrence) {
    std::vector<Index> sigma;
    if (count <= 0) return sigma;
    // The first window is anchored at the origin: [0, W].
    sigma.push_back(last_occurrence(0, std::min(W, last)));
    while (static_cast<Index>(sigma.size()) < count) {
        const Index t = sigma.back() + 1;
        if (t > last) break;
        const Index limit = t > last - W ? last : t + W;
        sigma.push_back(last_occurrence(t, limit));
    }
    return sigma;
}

}  // namespace

std::vector<Index> windowed_jump_times(const WalkPath& path, Index W, Index count) {
    require_window(path, W);
    const detail::OccurrenceLists lists(path.points(), path.size());
    return jump_times(path.last_index(), W, count,
                      [&](Index t, Index limit) { return lists.last_occurrence(t, limit); });
}

ErasureTrace erase_windowed(const WalkPath& path, Index W) {
    return finish_trace(path, windowed_jump_times(path, W, path.size()));
}

ErasureTrace erase_windowed_naive(const WalkPath& path, Index W) {
    require_window(path, W);
    const PointMatrix& pts = path.points();
    const Index last = path.last_index();
    std::vector<Index> sigma;
    Index pivot = 0;
    Index window_start = 0;  // the first window is [0, W] around the origin
    while (pivot <= last) {
        const Index window_end = last - window_start <= W ? last : window_start + W;
        Index found = pivot;
        for (Index j = window_end; j >= window_start; --j) {
            if (pts.col(j) == pts.col(pivot)) {
                found = j;
                break;
            }
        }
        sigma.push_back(found);
        pivot = found + 1;
        window_start = pivot;
    }
    return finish_trace(path, std::move(sigma));
}

ErasureTrace erase_full(const WalkPath& path) { return erase_windowed(path, path.size()); }

Mask loop_free_mask(const WalkPath& path, Index W) {
    require_window(path, W);
    const Index n = path.size();
    const Index last = n - 1;
    const detail::OccurrenceLists lists(path.points(), n);
    Mask mask(static_cast<std::size_t>(n), 1);
    // For each start i only the farthest partner within the window matters:
    // [i, reach] contains every shorter loop starting at i.
    Index covered_to = -1;
    for (Index i = 0; i < n; ++i) {
        const Index limit = i > last - W ? last : i + W;
        const Index reach = lists.last_occurrence(i, limit);
        if (reach > i) covered_to = std::max(covered_to, reach);
        if (covered_to >= i) mask[static_cast<std::size_t>(i)] = 0;
    }
    return mask;
}

bool z_indicator(std::span<const std::uint8_t> mask, Index j, Index k) {
    if (j < 0 || j > k || k >= static_cast<Index>(mask.size()))
        throw std::out_of_range("z_indicator: need 0 <= j <= k < mask length, got j=" +
                                std::to_string(j) + " k=" + std::to_string(k));
    return std::none_of(mask.begin() + j, mask.begin() + k + 1, [](std::uint8_t m) { return m != 0; });
}

}  // namespace lerw

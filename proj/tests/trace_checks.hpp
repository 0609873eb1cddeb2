#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "lerw/erasure.hpp"

namespace lerw::checks {

// Returns an empty string when every structural property of `trace` holds
// for a windowed erasure of `path` with window W, otherwise the first
// violation.
inline std::string trace_violation(const WalkPath& path, Index W, const ErasureTrace& trace) {
    const auto& s = trace.sigma;
    const Index n = path.size();
    if (s.empty()) return "empty sigma";
    if (s[0] > W) return "sigma[0] > W";
    if (!path.point(s[0]).isZero()) return "sigma[0] is not a visit to the origin";
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] <= s[i - 1]) return "sigma not strictly increasing at " + std::to_string(i);
        if (s[i] > s[i - 1] + 1 + W) return "sigma jump exceeds window at " + std::to_string(i);
        if (path.point(s[i]) != path.point(s[i - 1] + 1))
            return "pivot value mismatch at " + std::to_string(i);
    }
    if (static_cast<Index>(trace.y_flags.size()) != n || static_cast<Index>(trace.rho.size()) != n)
        return "y/rho length mismatch";
    std::size_t next = 0;
    Index running = 0;
    for (Index m = 0; m < n; ++m) {
        const bool is_jump = next < s.size() && s[next] == m;
        if (is_jump) ++next;
        if ((trace.y_flags[static_cast<std::size_t>(m)] != 0) != is_jump)
            return "y_flags disagree with sigma at " + std::to_string(m);
        running += trace.y_flags[static_cast<std::size_t>(m)];
        if (trace.rho[static_cast<std::size_t>(m)] != running) return "rho mismatch at " + std::to_string(m);
    }
    if (trace.erased_path.cols() != static_cast<Index>(s.size())) return "erased path length";
    for (Index i = 0; i < trace.erased_path.cols(); ++i) {
        if (trace.erased_path.col(i) != path.point(s[static_cast<std::size_t>(i)]))
            return "erased_path[i] != path[sigma[i]] at " + std::to_string(i);
        if (i > 0 && (trace.erased_path.col(i) - trace.erased_path.col(i - 1)).cwiseAbs().sum() != 1)
            return "erased path not nearest-neighbour at " + std::to_string(i);
    }
    // Loop-free indices always survive; the converse is not required.
    const Mask mask = loop_free_mask(path, W);
    for (Index m = 0; m < n; ++m)
        if (mask[static_cast<std::size_t>(m)] && !trace.y_flags[static_cast<std::size_t>(m)])
            return "loop-free index erased at " + std::to_string(m);
    return {};
}

inline bool is_self_avoiding(const PointMatrix& pts) {
    std::vector<std::vector<Coord>> seen;
    seen.reserve(static_cast<std::size_t>(pts.cols()));
    for (Index i = 0; i < pts.cols(); ++i) seen.emplace_back(pts.col(i).data(), pts.col(i).data() + pts.rows());
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

}  // namespace lerw::checks

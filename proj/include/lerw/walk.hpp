#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Core>

#include "lerw/rng.hpp"

namespace lerw {

using Index = Eigen::Index;
using Coord = std::int32_t;

/// A point of Z^d, stored as a column vector of lattice coordinates.
using LatticePoint = Eigen::Matrix<Coord, Eigen::Dynamic, 1>;

/// Column-major point storage: one column per point, one row per axis.
using PointMatrix = Eigen::Matrix<Coord, Eigen::Dynamic, Eigen::Dynamic>;

/// Finite nearest-neighbour trajectory S_0, ..., S_n on Z^d with S_0 = 0.
class WalkPath {
public:
    /// The zero-step walk [origin].
    explicit WalkPath(int dim);

    /// Wraps explicit points. Throws std::invalid_argument unless the first
    /// column is the origin and consecutive columns are at L1 distance 1.
    static WalkPath from_points(PointMatrix points);

    /// Convenience for hand-written fixtures: each inner list is one point.
    static WalkPath from_points(std::initializer_list<std::initializer_list<Coord>> points);

    int dim() const noexcept { return static_cast<int>(points_.rows()); }
    /// Number of points (n + 1 for an n-step walk).
    Index size() const noexcept { return points_.cols(); }
    Index steps() const noexcept { return points_.cols() - 1; }
    Index last_index() const noexcept { return points_.cols() - 1; }

    auto point(Index i) const { return points_.col(i); }
    const PointMatrix& points() const noexcept { return points_; }

    /// Copy of the first `count` points.
    WalkPath prefix(Index count) const;

    /// Appends `n_steps` further steps drawn from `rng`.
    void extend(RngStream& rng, Index n_steps);

    bool operator==(const WalkPath& other) const {
        return points_.rows() == other.points_.rows() && points_.cols() == other.points_.cols() &&
               points_ == other.points_;
    }

private:
    explicit WalkPath(PointMatrix points, int) : points_(std::move(points)) {}

    PointMatrix points_;
};

/// Index of one of the 2d unit directions: axis = dir / 2, sign = + for even dir.
inline int sample_direction(RngStream& rng, int dim) {
    return static_cast<int>(rng.below(static_cast<std::uint32_t>(2 * dim)));
}

/// One SRW increment: a unit vector along a uniformly chosen axis and sign.
/// dim < 1 throws std::invalid_argument.
LatticePoint sample_step(RngStream& rng, int dim);

/// Walk of `n_steps` steps from the origin. Consumes exactly `n_steps`
/// step draws from `rng`, so a longer walk from an equal stream extends a
/// shorter one.
WalkPath generate_walk(RngStream& rng, Index n_steps, int dim);

/// Squared Euclidean norm of a point (as double).
template <typename Derived>
double squared_norm(const Eigen::MatrixBase<Derived>& p) {
    return p.template cast<double>().squaredNorm();
}

}  // namespace lerw

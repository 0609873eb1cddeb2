#include "lerw/walk.hpp"

#include <stdexcept>
#include <string>

namespace lerw {

WalkPath::WalkPath(int dim) {
    if (dim < 1) throw std::invalid_argument("walk dimension must be >= 1");
    points_ = PointMatrix::Zero(dim, 1);
}

WalkPath WalkPath::from_points(PointMatrix points) {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::invalid_argument("walk needs at least one point of dimension >= 1");
    if (!points.col(0).isZero())
        throw std::invalid_argument("walk must start at the origin");
    for (Index i = 1; i < points.cols(); ++i) {
        const auto l1 = (points.col(i) - points.col(i - 1)).cwiseAbs().sum();
        if (l1 != 1)
            throw std::invalid_argument("points " + std::to_string(i - 1) + " and " +
                                        std::to_string(i) + " are not lattice neighbours");
    }
    return WalkPath(std::move(points), 0);
}

WalkPath WalkPath::from_points(std::initializer_list<std::initializer_list<Coord>> points) {
    if (points.size() == 0) throw std::invalid_argument("walk needs at least one point");
    const auto dim = static_cast<Index>(points.begin()->size());
    PointMatrix m(dim, static_cast<Index>(points.size()));
    Index col = 0;
    for (const auto& p : points) {
        if (static_cast<Index>(p.size()) != dim)
            throw std::invalid_argument("inconsistent point dimensions");
        Index row = 0;
        for (Coord c : p) m(row++, col) = c;
        ++col;
    }
    return from_points(std::move(m));
}

WalkPath WalkPath::prefix(Index count) const {
    if (count < 1 || count > size()) throw std::out_of_range("walk prefix length out of range");
    return WalkPath(PointMatrix(points_.leftCols(count)), 0);
}

void WalkPath::extend(RngStream& rng, Index n_steps) {
    if (n_steps < 0) throw std::invalid_argument("negative step count");
    const int d = dim();
    const Index old = points_.cols();
    points_.conservativeResize(Eigen::NoChange, old + n_steps);
    Coord* data = points_.data();
    for (Index i = old; i < old + n_steps; ++i) {
        Coord* cur = data + i * d;
        const Coord* prev = cur - d;
        for (int a = 0; a < d; ++a) cur[a] = prev[a];
        const int dir = sample_direction(rng, d);
        cur[dir >> 1] += (dir & 1) ? -1 : 1;
    }
}

LatticePoint sample_step(RngStream& rng, int dim) {
    if (dim < 1) throw std::invalid_argument("sample_step: dim must be >= 1");
    LatticePoint step = LatticePoint::Zero(dim);
    const int dir = sample_direction(rng, dim);
    step(dir >> 1) = (dir & 1) ? -1 : 1;
    return step;
}

WalkPath generate_walk(RngStream& rng, Index n_steps, int dim) {
    if (n_steps < 0) throw std::invalid_argument("generate_walk: negative step count");
    WalkPath path(dim);
    path.extend(rng, n_steps);
    return path;
}

}  // namespace lerw

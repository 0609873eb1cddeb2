#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lerw/walk.hpp"

namespace lerw::detail {

inline std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

/// Open-addressing map from 64-bit keys to 32-bit values with linear probing.
/// clear() only touches the slots that were filled since the last clear.
class FlatIndexMap {
public:
    static constexpr std::uint32_t kEmpty = 0xffffffffu;

    explicit FlatIndexMap(std::size_t expected = 16);

    /// Returns the stored value for `key`, inserting `value` first if absent.
    std::uint32_t find_or_insert(std::uint64_t key, std::uint32_t value);
    /// kEmpty when absent.
    std::uint32_t find(std::uint64_t key) const noexcept;
    bool contains(std::uint64_t key) const noexcept { return find(key) != kEmpty; }

    std::size_t size() const noexcept { return used_.size(); }
    void clear() noexcept;
    void reserve(std::size_t expected);

private:
    std::size_t slot_of(std::uint64_t key) const noexcept {
        return static_cast<std::size_t>(mix64(key)) & mask_;
    }
    void grow();

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> values_;
    std::vector<std::uint32_t> used_;
    std::size_t mask_ = 0;
};

/// Bit-packs lattice coordinates into a single 64-bit key when the
/// per-axis ranges fit. `packable()` is false otherwise.
class CoordPacker {
public:
    CoordPacker() = default;
    /// Per-axis inclusive ranges [lo, hi].
    CoordPacker(const LatticePoint& lo, const LatticePoint& hi);
    /// Symmetric range [-bound, bound] on every axis.
    CoordPacker(int dim, std::int64_t bound);

    bool packable() const noexcept { return packable_; }
    unsigned bits() const noexcept { return bits_; }
    std::uint64_t pack(const Coord* p) const noexcept {
        std::uint64_t key = 0;
        for (std::size_t a = 0; a < lo_.size(); ++a)
            key |= static_cast<std::uint64_t>(static_cast<std::int64_t>(p[a]) - lo_[a]) << shift_[a];
        return key;
    }

    /// Offsets and shifts of a fixed-dimension packer, for hot loops.
    template <int D>
    std::pair<std::array<std::int64_t, D>, std::array<unsigned, D>> axes() const noexcept {
        std::pair<std::array<std::int64_t, D>, std::array<unsigned, D>> out{};
        for (int a = 0; a < D; ++a) {
            out.first[static_cast<std::size_t>(a)] = lo_[static_cast<std::size_t>(a)];
            out.second[static_cast<std::size_t>(a)] = shift_[static_cast<std::size_t>(a)];
        }
        return out;
    }

private:
    std::vector<std::int64_t> lo_;
    std::vector<unsigned> shift_;
    unsigned bits_ = 0;
    bool packable_ = false;
};

/// Dense ids in order of first appearance for the first `count` columns.
struct PointIds {
    std::vector<std::uint32_t> ids;
    std::uint32_t distinct = 0;
};
PointIds dense_point_ids(const PointMatrix& points, Index count);

/// Occurrence lists of each distinct point: indices of group k are
/// occ[offset[k] .. offset[k+1]) in increasing order, and ids[i] is the
/// group of index i. Built by radix-sorting packed coordinates.
struct OccurrenceLists {
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> offset;
    std::vector<std::uint32_t> occ;

    explicit OccurrenceLists(const PointMatrix& points, Index count);

    /// Largest index j with points[j] == points[t] and t <= j <= limit.
    Index last_occurrence(Index t, Index limit) const noexcept;
};

/// Incremental set of lattice points with coordinates bounded by `bound`.
class PointSet {
public:
    PointSet(int dim, std::int64_t bound, std::size_t expected = 64);

    /// True if the point was new.
    bool insert(const Coord* p);
    bool contains(const Coord* p) const;
    void clear();

private:
    std::string bytes(const Coord* p) const {
        return std::string(reinterpret_cast<const char*>(p), sizeof(Coord) * static_cast<std::size_t>(dim_));
    }

    int dim_;
    CoordPacker packer_;
    FlatIndexMap flat_;
    std::unordered_set<std::string> fallback_;
};

}  // namespace lerw::detail

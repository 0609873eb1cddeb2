#include "lerw/detail/point_index.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace lerw::detail {

FlatIndexMap::FlatIndexMap(std::size_t expected) { reserve(expected); }

void FlatIndexMap::reserve(std::size_t expected) {
    const std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, 2 * expected));
    if (cap <= keys_.size()) return;
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint32_t> old_values = std::move(values_);
    std::vector<std::uint32_t> old_used = std::move(used_);
    keys_.assign(cap, 0);
    values_.assign(cap, kEmpty);
    used_.clear();
    used_.reserve(cap / 2);
    mask_ = cap - 1;
    for (std::uint32_t s : old_used) find_or_insert(old_keys[s], old_values[s]);
}

void FlatIndexMap::grow() { reserve(keys_.size()); }

std::uint32_t FlatIndexMap::find_or_insert(std::uint64_t key, std::uint32_t value) {
    if (2 * (used_.size() + 1) > keys_.size()) grow();
    std::size_t s = slot_of(key);
    while (values_[s] != kEmpty) {
        if (keys_[s] == key) return values_[s];
        s = (s + 1) & mask_;
    }
    keys_[s] = key;
    values_[s] = value;
    used_.push_back(static_cast<std::uint32_t>(s));
    return value;
}

std::uint32_t FlatIndexMap::find(std::uint64_t key) const noexcept {
    std::size_t s = slot_of(key);
    while (values_[s] != kEmpty) {
        if (keys_[s] == key) return values_[s];
        s = (s + 1) & mask_;
    }
    return kEmpty;
}

void FlatIndexMap::clear() noexcept {
    if (used_.size() * 8 > keys_.size()) {
        std::fill(values_.begin(), values_.end(), kEmpty);
    } else {
        for (std::uint32_t s : used_) values_[s] = kEmpty;
    }
    used_.clear();
}

CoordPacker::CoordPacker(const LatticePoint& lo, const LatticePoint& hi) {
    unsigned total = 0;
    lo_.resize(static_cast<std::size_t>(lo.size()));
    shift_.resize(lo_.size());
    for (Index a = 0; a < lo.size(); ++a) {
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi(a)) - lo(a));
        const auto width = static_cast<unsigned>(std::bit_width(span));
        lo_[static_cast<std::size_t>(a)] = lo(a);
        shift_[static_cast<std::size_t>(a)] = width == 0 ? 0 : total;
        total += width;
    }
    bits_ = total;
    packable_ = total <= 64;
}

CoordPacker::CoordPacker(int dim, std::int64_t bound)
    : CoordPacker(LatticePoint::Constant(dim, static_cast<Coord>(-bound)),
                  LatticePoint::Constant(dim, static_cast<Coord>(bound))) {}

PointIds dense_point_ids(const PointMatrix& points, Index count) {
    PointIds out;
    out.ids.resize(static_cast<std::size_t>(count));
    if (count == 0) return out;
    const int d = static_cast<int>(points.rows());
    const auto block = points.leftCols(count);
    const CoordPacker packer(block.rowwise().minCoeff(), block.rowwise().maxCoeff());
    const Coord* data = points.data();
    if (packer.packable()) {
        FlatIndexMap map(static_cast<std::size_t>(count) / 2 + 8);
        for (Index i = 0; i < count; ++i) {
            const std::uint32_t id = map.find_or_insert(packer.pack(data + i * d), out.distinct);
            if (id == out.distinct) ++out.distinct;
            out.ids[static_cast<std::size_t>(i)] = id;
        }
    } else {
        std::unordered_map<std::string, std::uint32_t> map;
        for (Index i = 0; i < count; ++i) {
            std::string key(reinterpret_cast<const char*>(data + i * d), sizeof(Coord) * static_cast<std::size_t>(d));
            auto [it, inserted] = map.try_emplace(std::move(key), out.distinct);
            if (inserted) ++out.distinct;
            out.ids[static_cast<std::size_t>(i)] = it->second;
        }
    }
    return out;
}

namespace {

// Stable LSD radix sort of (key, index) pairs on the low `bits` key bits.
template <typename Key>
void radix_sort_pairs(std::vector<Key>& keys, std::vector<std::uint32_t>& idx, unsigned bits) {
    constexpr unsigned kDigit = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kDigit;
    const std::size_t n = keys.size();
    std::vector<Key> tmp_keys(n);
    std::vector<std::uint32_t> tmp_idx(n);
    std::vector<std::uint32_t> count(kBuckets);
    for (unsigned shift = 0; shift < bits; shift += kDigit) {
        std::fill(count.begin(), count.end(), 0u);
        for (std::size_t i = 0; i < n; ++i) ++count[(keys[i] >> shift) & (kBuckets - 1)];
        std::uint32_t sum = 0;
        for (auto& c : count) {
            const std::uint32_t c0 = c;
            c = sum;
            sum += c0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t pos = count[(keys[i] >> shift) & (kBuckets - 1)]++;
            tmp_keys[pos] = keys[i];
            tmp_idx[pos] = idx[i];
        }
        keys.swap(tmp_keys);
        idx.swap(tmp_idx);
    }
}

template <typename Key>
void build_sorted(OccurrenceLists& out, const PointMatrix& points, Index count, const CoordPacker& packer,
                  unsigned bits) {
    const auto n = static_cast<std::size_t>(count);
    const int d = static_cast<int>(points.rows());
    const Coord* data = points.data();
    std::vector<Key> keys(n);
    std::vector<std::uint32_t> idx(n);
    if (d == 3) {
        const auto [lo, shift] = packer.axes<3>();
        for (std::size_t i = 0; i < n; ++i) {
            const Coord* p = data + 3 * i;
            keys[i] = static_cast<Key>((static_cast<std::uint64_t>(p[0] - lo[0]) << shift[0]) |
                                       (static_cast<std::uint64_t>(p[1] - lo[1]) << shift[1]) |
                                       (static_cast<std::uint64_t>(p[2] - lo[2]) << shift[2]));
            idx[i] = static_cast<std::uint32_t>(i);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            keys[i] = static_cast<Key>(packer.pack(data + static_cast<std::ptrdiff_t>(i) * d));
            idx[i] = static_cast<std::uint32_t>(i);
        }
    }
    radix_sort_pairs(keys, idx, bits);
    out.ids.resize(n);
    out.offset.clear();
    out.offset.reserve(n / 2 + 2);
    std::uint32_t group = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == 0 || keys[j] != keys[j - 1]) {
            out.offset.push_back(static_cast<std::uint32_t>(j));
            group = static_cast<std::uint32_t>(out.offset.size() - 1);
        }
        out.ids[idx[j]] = group;
    }
    out.offset.push_back(static_cast<std::uint32_t>(n));
    out.occ = std::move(idx);
}

}  // namespace

OccurrenceLists::OccurrenceLists(const PointMatrix& points, Index count) {
    if (count > static_cast<Index>(0xfffffff0u))
        throw std::length_error("path too long for 32-bit occurrence lists");
    if (count > 0) {
        const auto block = points.leftCols(count);
        const CoordPacker packer(block.rowwise().minCoeff(), block.rowwise().maxCoeff());
        if (packer.packable()) {
            // Group ids here follow key order rather than first appearance.
            const unsigned bits = packer.bits();
            if (bits <= 32)
                build_sorted<std::uint32_t>(*this, points, count, packer, bits);
            else
                build_sorted<std::uint64_t>(*this, points, count, packer, bits);
            return;
        }
    }
    PointIds dense = dense_point_ids(points, count);
    ids = std::move(dense.ids);
    offset.assign(dense.distinct + 1, 0);
    for (std::uint32_t id : ids) ++offset[id + 1];
    for (std::size_t k = 1; k < offset.size(); ++k) offset[k] += offset[k - 1];
    occ.resize(ids.size());
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t i = 0; i < ids.size(); ++i) occ[fill[ids[i]]++] = static_cast<std::uint32_t>(i);
}

Index OccurrenceLists::last_occurrence(Index t, Index limit) const noexcept {
    const std::uint32_t id = ids[static_cast<std::size_t>(t)];
    const auto first = occ.begin() + offset[id];
    const auto last = occ.begin() + offset[id + 1];
    // Lists are short on transient lattices; scan small ones linearly.
    if (last - first <= 8) {
        Index best = t;
        for (auto it = first; it != last && static_cast<Index>(*it) <= limit; ++it) best = *it;
        return best;
    }
    const auto it = std::upper_bound(first, last, static_cast<std::uint32_t>(limit));
    return static_cast<Index>(*(it - 1));
}

PointSet::PointSet(int dim, std::int64_t bound, std::size_t expected)
    : dim_(dim), packer_(dim, bound), flat_(expected) {}

bool PointSet::insert(const Coord* p) {
    if (packer_.packable()) {
        const std::size_t before = flat_.size();
        flat_.find_or_insert(packer_.pack(p), 0);
        return flat_.size() != before;
    }
    return fallback_.insert(bytes(p)).second;
}

bool PointSet::contains(const Coord* p) const {
    if (packer_.packable()) return flat_.contains(packer_.pack(p));
    return fallback_.count(bytes(p)) != 0;
}

void PointSet::clear() {
    flat_.clear();
    fallback_.clear();
}

}  // namespace lerw::detail

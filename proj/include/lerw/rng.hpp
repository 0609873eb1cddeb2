#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lerw {

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 bits of output.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// Deterministic counter-based random stream.
///
/// The key is the master seed and the high half of the counter is the stream
/// index, so distinct (master_seed, stream_index) pairs walk disjoint counter
/// ranges and never overlap. The stream satisfies
/// std::uniform_random_bit_generator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    result_type operator()() noexcept {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, bound) by Lemire's multiply-and-reject.
    std::uint32_t below(std::uint32_t bound) noexcept {
        std::uint64_t m = std::uint64_t{next_u32()} * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                m = std::uint64_t{next_u32()} * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    unsigned pos_ = 4;
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
    return RngStream(master_seed, stream_index);
}

}  // namespace lerw

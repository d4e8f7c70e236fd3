#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace contagion {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr counter_type block(const counter_type& ctr, const key_type& key) noexcept
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{m0} * c0;
            const std::uint64_t p1 = std::uint64_t{m1} * c2;
            c0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            c1 = static_cast<std::uint32_t>(p1);
            c2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            c3 = static_cast<std::uint32_t>(p0);
            k0 += w0;
            k1 += w1;
        }
        return {c0, c1, c2, c3};
    }

    /// `Lanes` consecutive block indices of one stream, rounds interleaved.
    template <int Lanes>
    static void blocks(std::uint64_t first_block, std::uint64_t stream, const key_type& key,
                       std::uint32_t* out) noexcept
    {
        alignas(32) std::uint32_t c0[Lanes], c1[Lanes], c2[Lanes], c3[Lanes];
        for (int l = 0; l < Lanes; ++l) {
            const std::uint64_t b = first_block + static_cast<std::uint64_t>(l);
            c0[l] = static_cast<std::uint32_t>(b);
            c1[l] = static_cast<std::uint32_t>(b >> 32);
            c2[l] = static_cast<std::uint32_t>(stream);
            c3[l] = static_cast<std::uint32_t>(stream >> 32);
        }
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            // all lane words are read before any is written, which lets the loop vectorize
            for (int l = 0; l < Lanes; ++l) {
                const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0[l];
                const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2[l];
                const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[l] ^ k0;
                const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[l] ^ k1;
                c1[l] = static_cast<std::uint32_t>(p1);
                c3[l] = static_cast<std::uint32_t>(p0);
                c0[l] = n0;
                c2[l] = n2;
            }
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        for (int l = 0; l < Lanes; ++l) {
            out[4 * l] = c0[l];
            out[4 * l + 1] = c1[l];
            out[4 * l + 2] = c2[l];
            out[4 * l + 3] = c3[l];
        }
    }
};

/// One independent stream of a Philox generator, as a UniformRandomBitGenerator.
///
/// Stream layout: key = seed (low word, high word); counter = (block index low,
/// block index high, stream low, stream high). Distinct (seed, stream) pairs
/// never share a counter, so draws do not depend on evaluation order.
class PhiloxStream {
public:
    using result_type = std::uint32_t;

    PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (used_ == kBuffered) refill();
        return buffer_[used_++];
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform_open() noexcept
    {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t stream() const noexcept { return stream_; }

private:
    static constexpr int kLanes = 16;
    static constexpr int kBuffered = 4 * kLanes;

    // Out of line: picks a SIMD kernel at run time; every kernel produces the
    // same words as Philox4x32::blocks.
    void refill() noexcept;

    Philox4x32::key_type key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, kBuffered> buffer_{};
    int used_ = kBuffered;
};

}  // namespace contagion

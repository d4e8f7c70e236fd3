#include "contagion/philox.hpp"

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#define CONTAGION_PHILOX_AVX2 1
#endif

namespace contagion {

namespace {

#ifdef CONTAGION_PHILOX_AVX2

// 32-bit halves of lane-wise u32 × u32 → u64 products, in lane order.
__attribute__((target("avx2"))) inline void mul_hi_lo(__m256i a, __m256i m, __m256i& hi, __m256i& lo)
{
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
    lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
}

// Sixteen consecutive blocks as two interleaved groups of eight lanes.
__attribute__((target("avx2"))) void blocks16_avx2(std::uint64_t first_block, std::uint64_t stream,
                                                   const Philox4x32::key_type& key, std::uint32_t* out)
{
    constexpr int G = 2;
    alignas(32) std::uint32_t lo_idx[8 * G], hi_idx[8 * G];
    for (int l = 0; l < 8 * G; ++l) {
        const std::uint64_t b = first_block + static_cast<std::uint64_t>(l);
        lo_idx[l] = static_cast<std::uint32_t>(b);
        hi_idx[l] = static_cast<std::uint32_t>(b >> 32);
    }
    __m256i c0[G], c1[G], c2[G], c3[G];
    for (int g = 0; g < G; ++g) {
        c0[g] = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo_idx + 8 * g));
        c1[g] = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi_idx + 8 * g));
        c2[g] = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream)));
        c3[g] = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream >> 32)));
    }
    const __m256i m0 = _mm256_set1_epi64x(0xD2511F53u);
    const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57u);
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
        const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
        for (int g = 0; g < G; ++g) {
            __m256i hi0, lo0, hi1, lo1;
            mul_hi_lo(c0[g], m0, hi0, lo0);
            mul_hi_lo(c2[g], m1, hi1, lo1);
            c0[g] = _mm256_xor_si256(_mm256_xor_si256(hi1, c1[g]), vk0);
            c1[g] = lo1;
            c2[g] = _mm256_xor_si256(_mm256_xor_si256(hi0, c3[g]), vk1);
            c3[g] = lo0;
        }
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    alignas(32) std::uint32_t w[4][8 * G];
    for (int g = 0; g < G; ++g) {
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[0] + 8 * g), c0[g]);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[1] + 8 * g), c1[g]);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[2] + 8 * g), c2[g]);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[3] + 8 * g), c3[g]);
    }
    for (int l = 0; l < 8 * G; ++l)
        for (int j = 0; j < 4; ++j) out[4 * l + j] = w[j][l];
}

#endif

void blocks16_portable(std::uint64_t first_block, std::uint64_t stream, const Philox4x32::key_type& key,
                       std::uint32_t* out)
{
    Philox4x32::blocks<16>(first_block, stream, key, out);
}

using Kernel = void (*)(std::uint64_t, std::uint64_t, const Philox4x32::key_type&, std::uint32_t*);

Kernel select_kernel()
{
#ifdef CONTAGION_PHILOX_AVX2
    if (__builtin_cpu_supports("avx2")) return blocks16_avx2;
#endif
    return blocks16_portable;
}

}  // namespace

void PhiloxStream::refill() noexcept
{
    static const Kernel kernel = select_kernel();
    kernel(block_, stream_, key_, buffer_.data());
    block_ += kLanes;
    used_ = 0;
}

}  // namespace contagion

#pragma once

#include <cmath>
#include <cstdint>

namespace levyprobe {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
//
// Streams are addressed by (seed, substream): the 64-bit seed forms the key
// and the substream occupies the upper counter words, so substreams of the
// same seed never overlap and can be created without coordination. Replaying
// a (seed, substream) pair reproduces the stream bit for bit.
class Philox {
public:
    explicit Philox(std::uint64_t seed, std::uint64_t substream = 0) noexcept
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(substream)),
          stream_hi_(static_cast<std::uint32_t>(substream >> 32)) {}

    std::uint32_t next_u32() noexcept {
        if (index_ == 4) fill();
        return out_[index_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on the open interval (0,1); safe as a log() argument.
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    // The 10-round Philox4x32 block function, exposed for known-answer tests.
    static void encrypt(std::uint32_t counter[4], std::uint32_t k0, std::uint32_t k1) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += 0x9E3779B9u;
                k1 += 0xBB67AE85u;
            }
            const std::uint32_t hi0 = mul_hi(0xD2511F53u, counter[0]);
            const std::uint32_t lo0 = 0xD2511F53u * counter[0];
            const std::uint32_t hi1 = mul_hi(0xCD9E8D57u, counter[2]);
            const std::uint32_t lo1 = 0xCD9E8D57u * counter[2];
            const std::uint32_t n0 = hi1 ^ counter[1] ^ k0;
            const std::uint32_t n2 = hi0 ^ counter[3] ^ k1;
            counter[0] = n0;
            counter[1] = lo1;
            counter[2] = n2;
            counter[3] = lo0;
        }
    }

private:
    static std::uint32_t mul_hi(std::uint32_t a, std::uint32_t b) noexcept {
        return static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b)) >> 32);
    }

    void fill() noexcept {
        out_[0] = static_cast<std::uint32_t>(block_);
        out_[1] = static_cast<std::uint32_t>(block_ >> 32);
        out_[2] = stream_lo_;
        out_[3] = stream_hi_;
        encrypt(out_, key0_, key1_);
        ++block_;
        index_ = 0;
    }

    std::uint32_t key0_, key1_;
    std::uint64_t block_ = 0;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int index_ = 4;
};

// Substream addressing used throughout the experiment harness: the top byte
// names the purpose, the rest indexes within it.
namespace substream {
constexpr std::uint64_t make(std::uint64_t purpose, std::uint64_t index) noexcept {
    return (purpose << 56) | index;
}
constexpr std::uint64_t kPath = 1;
constexpr std::uint64_t kProbes = 2;
constexpr std::uint64_t kReplication = 3;
constexpr std::uint64_t kResample = 4;
constexpr std::uint64_t kFigure = 5;
}  // namespace substream

}  // namespace levyprobe

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace uaveh {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a 64-bit key and three 32-bit counter words;
/// the fourth counter word walks through the stream's blocks. Streams with
/// different identifiers are statistically independent, so per-trial
/// substreams can be created anywhere without shared state. Satisfies
/// UniformRandomBitGenerator.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, ctr_{c0, c1, c2, 0} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            out_ = bijection(ctr_, key_);
            ++ctr_[3];
            pos_ = 0;
        }
        return out_[pos_++];
    }

    /// Uniform double in the open interval (0, 1), 53-bit resolution.
    double uniform_open() {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Exp(1) variate, strictly positive.
    double exponential() { return -std::log(uniform_open()); }

    /// The raw 10-round bijection.
    static Block bijection(Block ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    Key key_;
    Block ctr_;
    Block out_{};
    int pos_ = 4;
};

}  // namespace uaveh

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace swing::numerics {

/// Philox4x32-10 block function (Salmon et al., Random123).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

enum class Stream : std::uint32_t { Diffusion = 0, Spike = 1, Policy = 2, Misc = 3 };
enum class Domain : std::uint32_t { Regression = 0, Pricing = 1, Training = 2, Diagnostic = 3 };

/// Sequential draws from the substream addressed by (seed, domain, stream,
/// index). Two generators with different addresses never share a block, so
/// any partition of paths over workers reproduces the same numbers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, Domain domain, Stream stream, std::uint32_t index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, index, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(domain)} {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        if (pos_ >= 2) refill();
        const std::uint64_t bits = (static_cast<std::uint64_t>(block_[2 * pos_]) << 32) | block_[2 * pos_ + 1];
        ++pos_;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller; both variates of a pair are used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    double exponential(double mean) { return -mean * std::log(uniform()); }

    /// Jump to block `block` of the substream; draws restart from there.
    void seek(std::uint32_t block) {
        ctr_[0] = block;
        pos_ = 2;
        has_spare_ = false;
    }

private:
    void refill() {
        block_ = philox4x32(ctr_, key_);
        ++ctr_[0];
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 2;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace swing::numerics

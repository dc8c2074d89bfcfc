#pragma once

#include <array>
#include <cstdint>

namespace sburg {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
/// independent stream; every draw is addressable by a 64-bit index, so
/// realizations can be generated in any order (or in parallel) and still
/// reproduce bit-exactly.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform double in (0,1), never exactly 0 or 1.
    double uniform_at(std::uint64_t idx) const;

    /// Standard normal via the inverse CDF (Wichura's AS241, double precision).
    double normal_at(std::uint64_t idx) const;

    std::uint64_t bits_at(std::uint64_t idx) const;

    // Sequential convenience cursor (single-threaded use).
    double next_uniform() { return uniform_at(cursor_++); }
    double next_normal() { return normal_at(cursor_++); }
    std::uint64_t cursor() const { return cursor_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_ctr_;
    std::uint64_t cursor_ = 0;

    std::array<std::uint64_t, 2> block_at(std::uint64_t block) const;
};

namespace detail {
/// Philox4x32 with 10 rounds, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);
std::uint64_t splitmix64(std::uint64_t x);
/// Inverse standard normal CDF (AS241 PPND16).
double inverse_normal_cdf(double p);
}  // namespace detail

}  // namespace sburg

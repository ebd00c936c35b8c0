#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace scpim {

/// Philox4x32-10 counter-based block function.
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Deterministic, splittable random stream.
///
/// A stream is identified by (seed, stream id); draw i of a stream is a pure
/// function of (seed, stream id, i), so any draw can be addressed directly and
/// child streams can be handed to concurrent workers without coordination.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : seed_(seed), stream_(stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept { return at(position_++); }

    /// Draw `index` of this stream, independent of the current position.
    result_type at(std::uint64_t index) const noexcept;

    /// Child stream addressed by index; does not mutate this stream.
    RngStream substream(std::uint64_t index) const noexcept;

    /// Next child in a sequence of splits. Split children never collide with
    /// substream(i) children.
    RngStream split() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }
    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    std::uint64_t splits_ = 0;
};

/// Uniform double in [0, 1) with 53 bits of resolution.
double uniform01(RngStream& rng) noexcept;

/// Standard normal variate.
double standard_normal(RngStream& rng);

/// Standard normal variate conditioned on |z| <= bound (rejection sampling).
double truncated_standard_normal(RngStream& rng, double bound = 3.0);

}  // namespace scpim

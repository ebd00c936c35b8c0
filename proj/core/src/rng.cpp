#include "scpim/rng.hpp"

#include <cmath>
#include <random>

namespace scpim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr std::uint64_t kSplitTag = 0x8000000000000000ull;

// splitmix64 finalizer, used to derive child stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RngStream::result_type RngStream::at(std::uint64_t index) const noexcept {
    const std::uint64_t block = index >> 1;
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = philox4x32(ctr, key);
    const std::size_t half = (index & 1u) ? 2 : 0;
    return (std::uint64_t{out[half + 1]} << 32) | out[half];
}

RngStream RngStream::substream(std::uint64_t index) const noexcept {
    return RngStream(seed_, mix64(stream_ ^ mix64(index & ~kSplitTag)));
}

RngStream RngStream::split() noexcept {
    const std::uint64_t tag = kSplitTag | splits_++;
    return RngStream(seed_, mix64(stream_ ^ mix64(tag)));
}

double uniform01(RngStream& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(RngStream& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

double truncated_standard_normal(RngStream& rng, double bound) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (;;) {
        const double z = dist(rng);
        if (std::fabs(z) <= bound) return z;
    }
}

}  // namespace scpim

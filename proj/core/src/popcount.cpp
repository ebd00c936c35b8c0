#include "scpim/popcount.hpp"

#include <cstdint>
#include <stdexcept>

namespace scpim {

namespace {

using Word = std::uint64_t;
constexpr std::size_t kLanes = 64;

// Weight-indexed carry-save state: at most two words per weight once reduced.
using CarrySave = std::vector<std::vector<Word>>;

std::vector<Word> pack_region(const ArrayState& array, const Region& region) {
    std::vector<Word> words;
    Word w = 0;
    std::size_t lane = 0;
    for (std::size_t r = region.row; r < region.row + region.rows; ++r) {
        for (std::size_t c = region.col; c < region.col + region.cols; ++c) {
            if (array.bit(r, c)) w |= Word{1} << lane;
            if (++lane == kLanes) {
                words.push_back(w);
                w = 0;
                lane = 0;
            }
        }
    }
    if (lane != 0) words.push_back(w);
    return words;
}

CarrySave carry_save_reduce(std::vector<Word> inputs) {
    CarrySave buckets;
    buckets.push_back(std::move(inputs));
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        while (buckets[k].size() >= 3) {
            const Word a = buckets[k].back(); buckets[k].pop_back();
            const Word b = buckets[k].back(); buckets[k].pop_back();
            const Word c = buckets[k].back(); buckets[k].pop_back();
            if (buckets.size() == k + 1) buckets.emplace_back();
            buckets[k].push_back(a ^ b ^ c);
            buckets[k + 1].push_back((a & b) | (a & c) | (b & c));
        }
    }
    return buckets;
}

std::size_t full_adder_resolve(const CarrySave& cs) {
    // Ripple-carry add the sum and carry words of each weight, lane-parallel.
    std::vector<Word> binary;
    Word carry = 0;
    for (const auto& pair : cs) {
        const Word a = pair.size() > 0 ? pair[0] : 0;
        const Word b = pair.size() > 1 ? pair[1] : 0;
        binary.push_back(a ^ b ^ carry);
        carry = (a & b) | (a & carry) | (b & carry);
    }
    binary.push_back(carry);

    // Column-wise accumulation of the per-lane binary counts.
    std::size_t total = 0;
    for (std::size_t lane = 0; lane < kLanes; ++lane) {
        std::size_t lane_value = 0;
        for (std::size_t k = 0; k < binary.size(); ++k)
            lane_value |= static_cast<std::size_t>((binary[k] >> lane) & 1u) << k;
        total += lane_value;
    }
    return total;
}

}  // namespace

ApcResult popcount_apc(const ArrayState& array, const Region& region) {
    return ApcResult{array.popcount(region), 1.0};
}

CsaFaResult popcount_csa_fa(const ArrayState& array, std::span<const Region> regions,
                            double c_csa, double c_fa) {
    if (regions.empty()) throw std::invalid_argument("popcount_csa_fa: empty batch");
    CsaFaResult out;
    out.counts.reserve(regions.size());
    for (const Region& region : regions) {
        array.check_region(region);
        out.counts.push_back(full_adder_resolve(carry_save_reduce(pack_region(array, region))));
    }
    const auto m = static_cast<double>(regions.size());
    out.csa_cycles = c_csa * m;
    out.fa_cycles = c_fa;
    out.per_mul_cycles = c_csa + c_fa / m;
    return out;
}

}  // namespace scpim

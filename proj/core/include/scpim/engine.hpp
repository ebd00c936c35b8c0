#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scpim/array.hpp"
#include "scpim/config.hpp"
#include "scpim/conversion.hpp"
#include "scpim/perfmodel.hpp"
#include "scpim/popcount.hpp"

namespace scpim {

enum class PopcountStrategy { Apc, CsaFa };

struct MulConfig {
    std::size_t nbit = 1024;
    PopcountStrategy strategy = PopcountStrategy::Apc;
    LogLut lut = build_lut(10);
    DtcSpec dtc;
    MtjParams device;
    VariationModel variation;
    double drive_current = 80.0;
    std::size_t row_length = 1024;
    std::size_t array_rows = 1024;
    CostModel cost;

    /// Engine settings from a configuration, for `width`-bit operands.
    static MulConfig from(const SimConfig& sim, unsigned width = 10, std::size_t nbit = 1024);

    void validate() const;
    Approach approach() const noexcept {
        return strategy == PopcountStrategy::Apc ? Approach::ScPimApc : Approach::ScPimCsa;
    }
};

/// Shape of one MUL's region: `cols` is the largest divisor of nbit that fits
/// a row, and the MUL spans `rows` whole rows.
struct MulLayout {
    std::size_t rows = 0;
    std::size_t cols = 0;
};
MulLayout mul_layout(std::size_t nbit, std::size_t row_length);

struct MulResult {
    std::size_t count = 0;
    std::size_t nbit = 0;
    double estimate = 0.0;  ///< count / nbit
    double cycles = 0.0;
    double energy_pj = 0.0;
};

/// preset -> pulse(x) -> pulse(y) -> pop-count on a fresh array.
MulResult sc_multiply(const Operand& x, const Operand& y, const MulConfig& cfg, RngStream& rng);

/// Same flow with the two write pulses given directly (bypasses LUT and DTC).
MulResult sc_multiply_pulses(const PulseSpec& px, const PulseSpec& py, const MulConfig& cfg,
                             RngStream& rng);

/// Runs the flow on `region` of an existing array (fixed-chip experiments);
/// returns the surviving count.
std::size_t sc_multiply_on(ArrayState& array, const Region& region, const PulseSpec& px,
                           const PulseSpec& py, const MulConfig& cfg, RngStream& rng);

struct MacResult {
    double estimate = 0.0;                ///< sum of per-MUL estimates
    std::vector<std::size_t> counts;
    std::size_t nbit = 0;
    double popcount_cycles_total = 0.0;
    double popcount_cycles_per_mul = 0.0;
    Breakdown cycles_per_mul;             ///< perfmodel view, FA amortized over M
    double energy_pj_per_mul = 0.0;
};

/// One MUL per (w, x) pair on disjoint regions of a shared array, then a
/// batched pop-count with the configured strategy.
MacResult sc_mac(std::span<const Operand> ws, std::span<const Operand> xs, const MulConfig& cfg,
                 RngStream& rng);

/// Weights written once into stochastic bit-planes for later reuse.
struct PreconvertedWeights {
    ArrayState array;
    std::vector<Region> regions;
    std::vector<bool> consumed;
    unsigned width = 0;
};

PreconvertedWeights preconvert_weights(std::span<const Operand> ws, const MulConfig& cfg,
                                       RngStream& rng);

/// Applies only the x pulse to weight `index`'s bit-plane. The plane is
/// consumed; a second use throws std::logic_error.
MulResult multiply_with_preconverted(PreconvertedWeights& weights, std::size_t index,
                                     const Operand& x, const MulConfig& cfg, RngStream& rng);

}  // namespace scpim

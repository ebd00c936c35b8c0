#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scpim/array.hpp"

namespace scpim {

struct ApcResult {
    std::size_t count = 0;
    double cycles = 1.0;
};

/// Approximate-parallel-counter pop-count: exact count in a single cycle.
ApcResult popcount_apc(const ArrayState& array, const Region& region);

struct CsaFaResult {
    std::vector<std::size_t> counts;  ///< one per region, bit-exact
    double csa_cycles = 0.0;          ///< c_csa * M
    double fa_cycles = 0.0;           ///< c_fa, once per batch
    double per_mul_cycles = 0.0;      ///< c_csa + c_fa / M
};

/// Two-step in-memory pop-count over a batch of M regions.
///
/// Step 1 folds each region into 64-lane words and reduces them with 3:2
/// carry-save compressors until every weight holds at most a sum and a carry
/// word (lock-step bitwise ops, c_csa cycles per region). Step 2 resolves the
/// redundant form with a ripple full adder per lane and accumulates lanes
/// (c_fa cycles, charged once for the batch).
CsaFaResult popcount_csa_fa(const ArrayState& array, std::span<const Region> regions,
                            double c_csa = 4.0, double c_fa = 16.0);

}  // namespace scpim

#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scpim {

enum class Approach { ScPimApc, ScPimCsa, ConventionalSc, PimOnly };

inline constexpr std::array<Approach, 4> kAllApproaches = {
    Approach::ScPimApc, Approach::ScPimCsa, Approach::ConventionalSc, Approach::PimOnly};

std::string_view to_string(Approach a) noexcept;

// Cycle coefficients ---------------------------------------------------------

struct ScPimCycles {
    double preset = 2.0;
    double lut = 3.0;
    double write_pulse = 2.0;  ///< DTC + one stochastic write, per operand
    double apc = 1.0;
    double csa_per_mul = 4.0;
    double fa_per_batch = 16.0;
    /// Fraction of min(lut, write_pulse) hidden by overlapping the next
    /// operand's LUT lookup with the current write.
    double pipeline_overlap = 1.0;

    friend bool operator==(const ScPimCycles&, const ScPimCycles&) = default;
};

/// Conventional SC with SNGs: setup + 2^n * sng_per_bit + apc.
struct ConventionalScCycles {
    double setup = 15.0;
    double sng_per_bit = 1.0 / 64.0;
    double apc = 1.0;

    friend bool operator==(const ConventionalScCycles&, const ConventionalScCycles&) = default;
};

/// Bitwise-logic-only PIM multiply. Cycles are interpolated geometrically
/// between table points and extrapolated by growth_per_bit outside them.
struct PimCycles {
    std::map<unsigned, double> table = {{8, 143.0}, {10, 144.0}};
    double growth_per_bit = 2.0;

    friend bool operator==(const PimCycles&, const PimCycles&) = default;
};

// Energy (pJ per MUL event) --------------------------------------------------

struct ScPimEnergy {
    double preset = 3.0;
    double write_pulse = 1.2;
    double apc = 1.2;
    double csa_per_mul = 1.6;
    double fa_per_batch = 8.0;
    double buffering = 1.8;  ///< operand read, LUT lookup, DTC drive

    friend bool operator==(const ScPimEnergy&, const ScPimEnergy&) = default;
};

struct ConventionalScEnergy {
    double sng = 1.2;
    double apc = 1.2;
    double buffering = 17.6;

    friend bool operator==(const ConventionalScEnergy&, const ConventionalScEnergy&) = default;
};

struct PimEnergy {
    double per_cycle = 0.5;

    friend bool operator==(const PimEnergy&, const PimEnergy&) = default;
};

// Area (um^2) ----------------------------------------------------------------

struct ScPimArea {
    double dtc_width = 75.0;
    double dtc_height = 25.0;
    double apc = 2000.0;
    double csa_fa_periphery = 300.0;
    double lut_bit = 0.12;
    unsigned lut_out_bits = 16;
    double mram_cell = 0.1;

    friend bool operator==(const ScPimArea&, const ScPimArea&) = default;
};

struct ConventionalScArea {
    double sng_per_bit = 5700.0;  ///< SNG area scales with operand width
    double apc = 2000.0;
    double other = 1000.0;

    friend bool operator==(const ConventionalScArea&, const ConventionalScArea&) = default;
};

struct PimArea {
    double logic_periphery = 500.0;
    double mram_cell = 0.1;

    friend bool operator==(const PimArea&, const PimArea&) = default;
};

struct CostModel {
    ScPimCycles scpim_cycles;
    ConventionalScCycles sc_cycles;
    PimCycles pim_cycles;
    ScPimEnergy scpim_energy;
    ConventionalScEnergy sc_energy;
    PimEnergy pim_energy;
    ScPimArea scpim_area;
    ConventionalScArea sc_area;
    PimArea pim_area;

    /// Throws std::invalid_argument on negative costs, an empty or decreasing
    /// PIM table, growth_per_bit < 1, or overlap outside [0, 1].
    void validate() const;

    friend bool operator==(const CostModel&, const CostModel&) = default;
};

/// Named components whose sum is `total`.
struct Breakdown {
    std::vector<std::pair<std::string, double>> parts;
    double total = 0.0;

    void add(std::string name, double value);
    double get(std::string_view name) const;
};

inline constexpr unsigned kMinModeledBits = 4;
inline constexpr unsigned kMaxModeledBits = 16;

Breakdown cycle_breakdown(Approach approach, unsigned bit_length, const CostModel& model,
                          unsigned mac_batch = 1);
double cycles_per_mul(Approach approach, unsigned bit_length, const CostModel& model,
                      unsigned mac_batch = 1);
double pim_cycles(unsigned bit_length, const PimCycles& pim);

/// Energy per MUL. bit_length only matters for PIM-only.
Breakdown energy_per_mul(Approach approach, const CostModel& model, unsigned bit_length = 10,
                         unsigned mac_batch = 1);

Breakdown area(Approach approach, const CostModel& model, unsigned bit_length);

struct ApproachReport {
    Approach approach;
    Breakdown cycles;
    Breakdown energy;
    Breakdown area;
};

struct Report {
    unsigned bit_length = 10;
    unsigned mac_batch = 1;
    std::vector<ApproachReport> approaches;
    /// e.g. "cycles_sc_over_scpim_apc"
    std::vector<std::pair<std::string, double>> ratios;

    const ApproachReport& at(Approach a) const;
    double ratio(std::string_view name) const;
};

Report comparison_report(const CostModel& model, unsigned bit_length, unsigned mac_batch = 1);

}  // namespace scpim

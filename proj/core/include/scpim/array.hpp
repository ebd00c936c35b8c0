#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scpim/device.hpp"
#include "scpim/rng.hpp"

namespace scpim {

/// Device and circuit non-idealities. All sigmas are relative standard
/// deviations of a Gaussian truncated at +-3 sigma.
struct VariationModel {
    double sigma_ic = 0.0;         ///< static, per bit: i_c * (1 + eps)
    double sigma_circuit = 0.0;    ///< dynamic, per bit per pulse: duration * (1 + eta)
    double ir_drop_per_col = 0.0;  ///< current * (1 - ir_drop_per_col * col)

    void validate() const;
    bool ideal() const noexcept {
        return sigma_ic == 0.0 && sigma_circuit == 0.0 && ir_drop_per_col == 0.0;
    }
};

/// Rectangular block of cells [row, row + rows) x [col, col + cols).
struct Region {
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t size() const noexcept { return rows * cols; }
};

/// Cross-point SOT-MRAM bit-plane. Single owner; not thread-safe.
class ArrayState {
public:
    /// Samples the per-bit critical-current map. Throws on zero dimensions or
    /// an invalid variation model. Bits are undefined (zero) until preset().
    ArrayState(std::size_t rows, std::size_t cols, const MtjParams& params,
               const VariationModel& variation, RngStream& rng);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return bits_.size(); }
    Region full() const noexcept { return Region{0, 0, rows_, cols_}; }

    const MtjParams& params() const noexcept { return params_; }
    bool is_preset() const noexcept { return preset_; }

    std::uint8_t bit(std::size_t r, std::size_t c) const { return bits_.at(r * cols_ + c); }
    void set_bit(std::size_t r, std::size_t c, bool v) { bits_.at(r * cols_ + c) = v ? 1 : 0; }
    double ic(std::size_t r, std::size_t c) const { return ic_map_.at(r * cols_ + c); }

    /// Forces every cell to 1. Modeled as a guaranteed-switch pulse.
    void preset() noexcept;
    /// Forces the cells of `region` to 1; the rest of the plane is untouched.
    void preset(const Region& region);

    /// Row-parallel stochastic write over `region`. Cells at 1 survive with
    /// p_unswitched under their own i_c, jittered duration and IR-attenuated
    /// current; cells at 0 stay 0. Randomness for cell (r, c) comes from a
    /// substream addressed by its linear index, so results do not depend on
    /// traversal order.
    void apply_pulse(const Region& region, const PulseSpec& pulse,
                     const VariationModel& variation, RngStream& rng);

    std::size_t popcount(const Region& region) const;
    std::size_t popcount() const { return popcount(full()); }

    void check_region(const Region& region) const;

    friend bool operator==(const ArrayState&, const ArrayState&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    MtjParams params_;
    std::vector<std::uint8_t> bits_;
    std::vector<double> ic_map_;
    bool preset_ = false;
};

/// Free-function spellings of the array operations.
ArrayState new_array(std::size_t rows, std::size_t cols, const MtjParams& params,
                     const VariationModel& variation, RngStream& rng);
void preset(ArrayState& array);
void apply_pulse(ArrayState& array, const Region& region, const PulseSpec& pulse,
                 const VariationModel& variation, RngStream& rng);
std::size_t popcount_region(const ArrayState& array, const Region& region);

/// One line per row of '0'/'1' characters.
void write_bitplane(std::ostream& os, const ArrayState& array, const Region& region);
/// Parses write_bitplane output into a row-major bit vector; reports dimensions.
std::vector<std::uint8_t> read_bitplane(std::istream& is, std::size_t& rows, std::size_t& cols);

}  // namespace scpim

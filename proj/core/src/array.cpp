#include "scpim/array.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace scpim {

namespace {

constexpr double kTruncation = 3.0;
constexpr double kSigmaBound = 0.5;

void check_sigma(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0 && v <= kSigmaBound))
        throw std::invalid_argument(std::string("VariationModel: ") + name +
                                    " must be in [0, 0.5], got " + std::to_string(v));
}

}  // namespace

void VariationModel::validate() const {
    check_sigma(sigma_ic, "sigma_ic");
    check_sigma(sigma_circuit, "sigma_circuit");
    if (!(std::isfinite(ir_drop_per_col) && ir_drop_per_col >= 0.0))
        throw std::invalid_argument("VariationModel: ir_drop_per_col must be >= 0");
}

ArrayState::ArrayState(std::size_t rows, std::size_t cols, const MtjParams& params,
                       const VariationModel& variation, RngStream& rng)
    : rows_(rows), cols_(cols), params_(params) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("array dimensions must be >= 1");
    params.validate();
    variation.validate();
    bits_.assign(rows * cols, 0);
    ic_map_.assign(rows * cols, params.i_c);

    // Always consume exactly one split so callers see the same downstream
    // streams regardless of sigma_ic.
    RngStream ic_stream = rng.split();
    if (variation.sigma_ic > 0.0) {
        for (std::size_t i = 0; i < ic_map_.size(); ++i) {
            RngStream cell = ic_stream.substream(i);
            ic_map_[i] = params.i_c *
                         (1.0 + variation.sigma_ic * truncated_standard_normal(cell, kTruncation));
        }
    }
}

void ArrayState::preset() noexcept {
    std::fill(bits_.begin(), bits_.end(), std::uint8_t{1});
    preset_ = true;
}

void ArrayState::preset(const Region& region) {
    check_region(region);
    for (std::size_t r = region.row; r < region.row + region.rows; ++r) {
        const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + region.col);
        std::fill(first, first + static_cast<std::ptrdiff_t>(region.cols), std::uint8_t{1});
    }
    preset_ = true;
}

void ArrayState::check_region(const Region& region) const {
    if (region.rows == 0 || region.cols == 0 || region.row + region.rows > rows_ ||
        region.col + region.cols > cols_)
        throw std::out_of_range("region [" + std::to_string(region.row) + "+" +
                                std::to_string(region.rows) + ", " + std::to_string(region.col) +
                                "+" + std::to_string(region.cols) + "] outside " +
                                std::to_string(rows_) + "x" + std::to_string(cols_) + " array");
}

void ArrayState::apply_pulse(const Region& region, const PulseSpec& pulse,
                             const VariationModel& variation, RngStream& rng) {
    check_region(region);
    pulse.validate();
    variation.validate();
    if (!preset_) throw std::logic_error("apply_pulse on an array that was never preset");

    RngStream pulse_stream = rng.split();
    if (pulse.duration == 0.0) return;

    const bool jitter = variation.sigma_circuit > 0.0;
    const bool uniform_drive = !jitter && variation.ir_drop_per_col == 0.0;
    const double p_nominal = p_unswitched(params_, pulse);
    MtjParams cell_params = params_;
    for (std::size_t r = region.row; r < region.row + region.rows; ++r) {
        for (std::size_t c = region.col; c < region.col + region.cols; ++c) {
            const std::size_t idx = r * cols_ + c;
            if (!bits_[idx]) continue;
            RngStream cell = pulse_stream.substream(idx);
            if (uniform_drive && ic_map_[idx] == params_.i_c) {
                if (!(uniform01(cell) < p_nominal)) bits_[idx] = 0;
                continue;
            }

            PulseSpec local = pulse;
            if (jitter)
                local.duration *= 1.0 + variation.sigma_circuit * truncated_standard_normal(cell, kTruncation);
            local.current *= std::max(0.0, 1.0 - variation.ir_drop_per_col * static_cast<double>(c));
            cell_params.i_c = ic_map_[idx];

            if (!sample_unswitched(cell_params, local, cell)) bits_[idx] = 0;
        }
    }
}

std::size_t ArrayState::popcount(const Region& region) const {
    check_region(region);
    std::size_t n = 0;
    for (std::size_t r = region.row; r < region.row + region.rows; ++r) {
        const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + region.col);
        n += static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(region.cols), 1));
    }
    return n;
}

ArrayState new_array(std::size_t rows, std::size_t cols, const MtjParams& params,
                     const VariationModel& variation, RngStream& rng) {
    return ArrayState(rows, cols, params, variation, rng);
}

void preset(ArrayState& array) { array.preset(); }

void apply_pulse(ArrayState& array, const Region& region, const PulseSpec& pulse,
                 const VariationModel& variation, RngStream& rng) {
    array.apply_pulse(region, pulse, variation, rng);
}

std::size_t popcount_region(const ArrayState& array, const Region& region) {
    return array.popcount(region);
}

void write_bitplane(std::ostream& os, const ArrayState& array, const Region& region) {
    array.check_region(region);
    for (std::size_t r = region.row; r < region.row + region.rows; ++r) {
        for (std::size_t c = region.col; c < region.col + region.cols; ++c)
            os << (array.bit(r, c) ? '1' : '0');
        os << '\n';
    }
}

std::vector<std::uint8_t> read_bitplane(std::istream& is, std::size_t& rows, std::size_t& cols) {
    std::vector<std::uint8_t> bits;
    rows = 0;
    cols = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (rows == 0) cols = line.size();
        else if (line.size() != cols) throw std::runtime_error("bit-plane rows have unequal length");
        for (char ch : line) {
            if (ch != '0' && ch != '1') throw std::runtime_error("bit-plane contains non 0/1 character");
            bits.push_back(ch == '1' ? 1 : 0);
        }
        ++rows;
    }
    return bits;
}

}  // namespace scpim

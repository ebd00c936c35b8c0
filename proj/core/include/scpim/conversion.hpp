#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scpim/device.hpp"

namespace scpim {

/// Unsigned n-bit fixed-point fraction, value = raw / 2^width, in [0, 1).
class Operand {
public:
    static constexpr unsigned kMinWidth = 1;
    static constexpr unsigned kMaxWidth = 16;

    /// Throws std::invalid_argument if width is outside [1, 16] or raw >= 2^width.
    static Operand from_raw(std::uint32_t raw, unsigned width);

    /// Rounds `value` to the nearest grid point, saturating at 2^width - 1.
    /// Throws std::invalid_argument for values outside [0, 1).
    static Operand from_fraction(double value, unsigned width);

    std::uint32_t raw() const noexcept { return raw_; }
    unsigned width() const noexcept { return width_; }
    double value() const noexcept;

    friend bool operator==(const Operand&, const Operand&) = default;

private:
    Operand(std::uint32_t raw, unsigned width) : raw_(raw), width_(width) {}

    std::uint32_t raw_;
    unsigned width_;
};

/// Lookup table of -ln(raw / 2^n), stored as unsigned fixed point with
/// `out_width` fractional bits. entries[0] holds the clamp ceiling.
struct LogLut {
    unsigned in_width = 10;
    unsigned out_width = 16;
    double tau_scale = 1.0;  ///< ns of pulse per unit of -ln
    std::vector<std::uint64_t> entries;

    double neg_log(std::uint32_t raw) const;
    /// Fixed-point value stored for raw = 0: (in_width + 2) * ln 2.
    std::uint64_t clamp_ceiling() const;
    std::size_t storage_bits() const noexcept { return entries.size() * out_width; }
};

/// Digital-to-time converter quantization grid.
struct DtcSpec {
    double resolution_ns = 0.022;
    std::uint32_t max_ticks = 1023;

    void validate() const;
    double full_scale_ns() const noexcept { return max_ticks * resolution_ns; }

    friend bool operator==(const DtcSpec&, const DtcSpec&) = default;
};

/// Builds the table for n-bit operands. Requires 1 <= n <= 16, n <= m <= 32
/// and tau_scale > 0.
LogLut build_lut(unsigned in_width, unsigned out_width = 16, double tau_scale = 1.0);

/// DTC tick count for an operand: round-half-away of neg_log * tau_scale /
/// resolution, clamped to max_ticks. raw = 0 drives the DTC at full scale.
std::uint32_t operand_to_ticks(const Operand& x, const LogLut& lut, const DtcSpec& dtc);

PulseSpec operand_to_pulse(const Operand& x, const LogLut& lut, const DtcSpec& dtc,
                           double drive_current);

/// p_unswitched of the pulse an operand is encoded into.
double expected_probability(const Operand& x, const LogLut& lut, const DtcSpec& dtc,
                            const MtjParams& params, double drive_current);

/// CSV with a comment line carrying the table geometry, then `raw,neg_log_fixed`.
void write_lut_csv(std::ostream& os, const LogLut& lut);
LogLut read_lut_csv(std::istream& is);

}  // namespace scpim

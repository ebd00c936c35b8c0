#include "scpim/conversion.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace scpim {

namespace {

void check_width(unsigned width) {
    if (width < Operand::kMinWidth || width > Operand::kMaxWidth)
        throw std::invalid_argument("operand width must be in [1, 16], got " +
                                    std::to_string(width));
}

std::uint64_t to_fixed(double v, unsigned frac_bits) {
    return static_cast<std::uint64_t>(std::llround(std::ldexp(v, static_cast<int>(frac_bits))));
}

}  // namespace

Operand Operand::from_raw(std::uint32_t raw, unsigned width) {
    check_width(width);
    if (raw >= (1u << width))
        throw std::invalid_argument("operand raw value " + std::to_string(raw) +
                                    " does not fit in " + std::to_string(width) + " bits");
    return Operand(raw, width);
}

Operand Operand::from_fraction(double value, unsigned width) {
    check_width(width);
    if (!(value >= 0.0 && value < 1.0))
        throw std::invalid_argument("operand value must be in [0, 1), got " +
                                    std::to_string(value));
    const std::uint32_t top = (1u << width) - 1u;
    const auto raw = static_cast<std::uint64_t>(std::llround(std::ldexp(value, static_cast<int>(width))));
    return Operand(static_cast<std::uint32_t>(raw > top ? top : raw), width);
}

double Operand::value() const noexcept {
    return std::ldexp(static_cast<double>(raw_), -static_cast<int>(width_));
}

double LogLut::neg_log(std::uint32_t raw) const {
    if (raw >= entries.size())
        throw std::out_of_range("LUT index " + std::to_string(raw) + " out of range");
    return std::ldexp(static_cast<double>(entries[raw]), -static_cast<int>(out_width));
}

std::uint64_t LogLut::clamp_ceiling() const {
    return to_fixed((in_width + 2) * std::log(2.0), out_width);
}

void DtcSpec::validate() const {
    if (!(std::isfinite(resolution_ns) && resolution_ns > 0.0))
        throw std::invalid_argument("DTC resolution must be positive");
    if (max_ticks < 1) throw std::invalid_argument("DTC max_ticks must be >= 1");
}

LogLut build_lut(unsigned in_width, unsigned out_width, double tau_scale) {
    check_width(in_width);
    if (out_width < in_width || out_width > 32)
        throw std::invalid_argument("LUT output width must be in [in_width, 32], got " +
                                    std::to_string(out_width));
    if (!(std::isfinite(tau_scale) && tau_scale > 0.0))
        throw std::invalid_argument("LUT tau_scale must be positive");

    LogLut lut;
    lut.in_width = in_width;
    lut.out_width = out_width;
    lut.tau_scale = tau_scale;
    const std::size_t size = std::size_t{1} << in_width;
    lut.entries.resize(size);
    lut.entries[0] = lut.clamp_ceiling();
    for (std::size_t raw = 1; raw < size; ++raw) {
        // -ln(raw / 2^n) = n ln 2 - ln raw
        const double v = in_width * std::log(2.0) - std::log(static_cast<double>(raw));
        lut.entries[raw] = to_fixed(v, out_width);
    }
    return lut;
}

std::uint32_t operand_to_ticks(const Operand& x, const LogLut& lut, const DtcSpec& dtc) {
    dtc.validate();
    if (x.width() != lut.in_width)
        throw std::invalid_argument("operand width " + std::to_string(x.width()) +
                                    " does not match LUT width " + std::to_string(lut.in_width));
    if (x.raw() == 0) return dtc.max_ticks;
    const double ticks = std::round(lut.neg_log(x.raw()) * lut.tau_scale / dtc.resolution_ns);
    return ticks >= dtc.max_ticks ? dtc.max_ticks : static_cast<std::uint32_t>(ticks);
}

PulseSpec operand_to_pulse(const Operand& x, const LogLut& lut, const DtcSpec& dtc,
                           double drive_current) {
    PulseSpec pulse{drive_current, operand_to_ticks(x, lut, dtc) * dtc.resolution_ns};
    pulse.validate();
    return pulse;
}

double expected_probability(const Operand& x, const LogLut& lut, const DtcSpec& dtc,
                            const MtjParams& params, double drive_current) {
    return p_unswitched(params, operand_to_pulse(x, lut, dtc, drive_current));
}

void write_lut_csv(std::ostream& os, const LogLut& lut) {
    std::ostringstream scale;
    scale.precision(17);
    scale << lut.tau_scale;
    os << "# in_width=" << lut.in_width << " out_width=" << lut.out_width
       << " tau_scale_ns=" << scale.str() << '\n';
    os << "raw,neg_log_fixed\n";
    for (std::size_t raw = 0; raw < lut.entries.size(); ++raw)
        os << raw << ',' << lut.entries[raw] << '\n';
}

LogLut read_lut_csv(std::istream& is) {
    LogLut lut;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("LUT csv: missing geometry comment line");
    {
        std::istringstream meta(line.substr(2));
        std::string kv;
        bool have_in = false, have_out = false, have_scale = false;
        while (meta >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::runtime_error("LUT csv: bad field '" + kv + "'");
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "in_width") { lut.in_width = std::stoul(val); have_in = true; }
            else if (key == "out_width") { lut.out_width = std::stoul(val); have_out = true; }
            else if (key == "tau_scale_ns") { lut.tau_scale = std::stod(val); have_scale = true; }
            else throw std::runtime_error("LUT csv: unknown field '" + key + "'");
        }
        if (!(have_in && have_out && have_scale))
            throw std::runtime_error("LUT csv: incomplete geometry line");
        check_width(lut.in_width);
    }
    if (!std::getline(is, line) || line != "raw,neg_log_fixed")
        throw std::runtime_error("LUT csv: missing header row");

    const std::size_t size = std::size_t{1} << lut.in_width;
    lut.entries.assign(size, 0);
    std::vector<bool> seen(size, false);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("LUT csv: malformed row '" + line + "'");
        const std::size_t raw = std::stoull(line.substr(0, comma));
        if (raw >= size || seen[raw]) throw std::runtime_error("LUT csv: bad or duplicate raw " + line);
        lut.entries[raw] = std::stoull(line.substr(comma + 1));
        seen[raw] = true;
        ++rows;
    }
    if (rows != size)
        throw std::runtime_error("LUT csv: expected " + std::to_string(size) + " rows, got " +
                                 std::to_string(rows));
    return lut;
}

}  // namespace scpim

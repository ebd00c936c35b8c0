#include "scpim/device.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scpim {

namespace {

// exp(-x) is exactly 0.0 in double for x above ~745.
constexpr double kUnderflowExponent = 746.0;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void MtjParams::validate() const {
    if (!(std::isfinite(delta) && delta > 0.0))
        throw std::invalid_argument("MtjParams: delta must be positive, got " +
                                    std::to_string(delta));
    if (!(std::isfinite(i_c) && i_c > 0.0))
        throw std::invalid_argument("MtjParams: i_c must be positive, got " +
                                    std::to_string(i_c));
}

void PulseSpec::validate() const {
    if (!finite_nonneg(current))
        throw std::invalid_argument("PulseSpec: current must be >= 0, got " +
                                    std::to_string(current));
    if (!finite_nonneg(duration))
        throw std::invalid_argument("PulseSpec: duration must be >= 0, got " +
                                    std::to_string(duration));
}

double p_unswitched(const MtjParams& params, const PulseSpec& pulse) {
    params.validate();
    pulse.validate();
    if (pulse.duration == 0.0) return 1.0;

    // -ln P = duration * exp(inner)  =>  ln(-ln P) = ln(duration) + inner
    const double inner = -params.delta * (1.0 - pulse.current / params.i_c);
    const double log_rate = std::log(pulse.duration) + inner;
    if (log_rate > std::log(kUnderflowExponent)) return 0.0;
    const double p = std::exp(-std::exp(log_rate));
    return p > 1.0 ? 1.0 : p;
}

bool sample_unswitched(const MtjParams& params, const PulseSpec& pulse, RngStream& rng) {
    return uniform01(rng) < p_unswitched(params, pulse);
}

}  // namespace scpim

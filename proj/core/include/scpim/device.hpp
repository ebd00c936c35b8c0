#pragma once

#include "scpim/rng.hpp"

namespace scpim {

/// MTJ constants of the switching-probability law. Units: i_c in microamperes.
struct MtjParams {
    double delta = 60.9;  ///< thermal stability, dimensionless
    double i_c = 80.0;    ///< critical current, uA

    /// Throws std::invalid_argument unless delta > 0 and i_c > 0.
    void validate() const;

    friend bool operator==(const MtjParams&, const MtjParams&) = default;
};

/// A single write event: current magnitude (uA) applied for a duration (ns).
struct PulseSpec {
    double current = 0.0;
    double duration = 0.0;

    void validate() const;
};

/// Probability that a bit keeps its state under `pulse`:
///   exp(-duration * exp(-delta * (1 - current / i_c)))
/// Evaluated in log space; saturates to exactly 0 on underflow and never
/// exceeds 1.
double p_unswitched(const MtjParams& params, const PulseSpec& pulse);

/// Bernoulli draw with probability p_unswitched(params, pulse); true = unswitched.
bool sample_unswitched(const MtjParams& params, const PulseSpec& pulse, RngStream& rng);

}  // namespace scpim

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "scpim/array.hpp"
#include "scpim/conversion.hpp"
#include "scpim/device.hpp"
#include "scpim/rng.hpp"

namespace scpim {

/// How per-bit critical currents are drawn across Monte Carlo iterations.
enum class IcSampling {
    PerIteration,  ///< fresh map per iteration: ensemble of chips
    FixedChip,     ///< one map, sampled once from the seed, reused
};

struct McConfig {
    std::size_t iterations = 1000;
    std::size_t nbit = 1000;
    double tau_x = 0.3;  ///< ns
    double tau_y = 0.4;  ///< ns
    MtjParams device;
    double drive_current = 80.0;
    VariationModel variation;
    std::uint64_t seed = 1;
    IcSampling ic_sampling = IcSampling::PerIteration;
    std::size_t row_length = 1024;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    /// Throws std::invalid_argument for iterations < 2, nbit < 16 or invalid
    /// device/variation parameters.
    void validate() const;
    /// Noise-free P_X * P_Y for the configured pulses.
    double expected_product() const;
};

struct Histogram {
    std::vector<double> edges;  ///< size = counts.size() + 1
    std::vector<std::size_t> counts;

    std::size_t bins() const noexcept { return counts.size(); }
    double center(std::size_t i) const { return 0.5 * (edges.at(i) + edges.at(i + 1)); }
    double bin_width() const { return edges.size() > 1 ? edges[1] - edges[0] : 0.0; }
    std::size_t total() const noexcept;
};

/// Freedman-Diaconis binning with at least `min_bins` bins. When `lattice`
/// > 0 the samples are known to sit on a grid of that spacing; bin widths are
/// snapped to whole multiples of it and edges fall between grid points.
Histogram make_histogram(std::span<const double> samples, std::size_t min_bins = 20,
                         double lattice = 0.0);

struct GaussianFit {
    double amplitude = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of A exp(-(x - mu)^2 / (2 sigma^2)) to bin centers and
/// counts (Levenberg-Marquardt). Throws FitError with fewer than 5 non-empty
/// bins or when the solver does not converge to sigma > 0.
GaussianFit gaussian_fit(const Histogram& histogram);

struct McReport {
    std::vector<double> errors;  ///< estimate - P_X * P_Y, one per iteration
    double expected_product = 0.0;
    double mean = 0.0;
    double sample_std = 0.0;
    double binomial_sigma = 0.0;  ///< sqrt(P (1 - P) / nbit)
    double mean_relative_error = 0.0;
    std::optional<GaussianFit> fit;
    Histogram histogram;

    double uncertainty() const noexcept { return 2.0 * sample_std; }
};

McReport mc_error_distribution(const McConfig& cfg);

struct SweepPoint {
    double param = 0.0;
    McConfig config;
    McReport report;
};

std::vector<SweepPoint> sweep_nbit(const McConfig& cfg, std::span<const std::size_t> nbits);
std::vector<SweepPoint> sweep_tau_y(const McConfig& cfg, std::span<const double> tau_ys);
std::vector<SweepPoint> sweep_ic_variance(const McConfig& cfg, std::span<const double> sigma_ics);

/// Antilog-amplifier multiply: exp(-(lut(x) + lut(y))) * (1 + eta), with eta
/// a truncated Gaussian of relative std sigma_circuit.
double logmult_baseline(const Operand& x, const Operand& y, const LogLut& lut,
                        double sigma_circuit, RngStream& rng);

struct BaselineStats {
    double mean_error = 0.0;  ///< mean(estimate) - x * y
    double sample_std = 0.0;
};

BaselineStats logmult_statistics(const Operand& x, const Operand& y, const LogLut& lut,
                                 double sigma_circuit, std::size_t trials, std::uint64_t seed);

struct CircuitPoint {
    double sigma_circuit = 0.0;
    SweepPoint scpim;
    BaselineStats baseline;
};

/// For each level, runs the stochastic engine with per-bit pulse jitter and
/// the log-multiplication baseline with the same relative noise on its
/// antilog stage. Pulses come from x, y via lut and dtc.
std::vector<CircuitPoint> sweep_circuit_variance(const McConfig& cfg,
                                                 std::span<const double> sigma_circuits,
                                                 const Operand& x, const Operand& y,
                                                 const LogLut& lut, const DtcSpec& dtc);

}  // namespace scpim

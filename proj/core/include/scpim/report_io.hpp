#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scpim/analysis.hpp"
#include "scpim/perfmodel.hpp"

namespace scpim {

inline constexpr std::string_view kToolName = "scpim";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Attribution embedded in every emitted artifact.
struct RunMetadata {
    std::string command;
    std::optional<std::uint64_t> seed;
    std::string config_hash;
};

/// Numbers are printed with 10 significant digits so reruns are byte-stable.
std::string format_number(double v);

/// "# tool=scpim version=0.1.0 command=... seed=... config_hash=..."
void write_metadata_line(std::ostream& os, const RunMetadata& meta);
nlohmann::json metadata_json(const RunMetadata& meta);

/// Sweep table, one row per point, stable column order (see kSweepColumns).
inline constexpr std::string_view kSweepColumns =
    "kind,param,nbit,tau_x_ns,tau_y_ns,sigma_ic,sigma_circuit,ic_sampling,iterations,"
    "expected_product,mean,sigma,uncertainty_2sigma,sigma_binomial,fit_mu,fit_sigma,bias,"
    "mean_relative_error,baseline_sigma,baseline_bias";

void write_sweep_csv(std::ostream& os, std::string_view kind, std::span<const SweepPoint> points);
void write_circuit_csv(std::ostream& os, std::span<const CircuitPoint> points);
nlohmann::json sweep_json(std::string_view kind, std::span<const SweepPoint> points);
nlohmann::json circuit_json(std::span<const CircuitPoint> points);

/// `param,bin_center,count` for every point's histogram.
void write_histogram_csv(std::ostream& os, std::span<const SweepPoint> points);

/// Long format: `approach,metric,component,value`; ratios use approach "ratio".
void write_report_csv(std::ostream& os, const Report& report);
nlohmann::json report_json(const Report& report);

}  // namespace scpim

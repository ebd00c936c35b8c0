#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scpim/conversion.hpp"
#include "scpim/device.hpp"
#include "scpim/perfmodel.hpp"

namespace scpim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a configuration file can set.
struct SimConfig {
    MtjParams device;
    unsigned lut_out_bits = 16;
    double tau_scale_ns = 1.0;
    DtcSpec dtc;
    std::optional<double> drive_current_ua;  ///< defaults to device.i_c
    std::size_t row_length = 1024;
    std::size_t array_rows = 1024;
    CostModel cost;

    double drive_current() const noexcept { return drive_current_ua.value_or(device.i_c); }

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Parses YAML configuration text. All sections and keys are optional;
/// unknown keys raise ConfigError.
SimConfig parse_config(std::string_view yaml_text);

/// Reads and parses a file. Throws ConfigError on I/O or parse failure.
SimConfig load_config_file(const std::string& path, std::string* text_out = nullptr);

/// The checked-in default configuration, compiled into the library.
std::string_view default_config_text() noexcept;
SimConfig default_config();

/// FNV-1a 64-bit hash of a configuration's text, rendered as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace scpim

#pragma once

#include <string>
#include <vector>

#include "pansharp/errors.hpp"

namespace pansharp::data {

struct BandInfo {
    std::string name;
    int lambda_lo_nm = 0;
    int lambda_hi_nm = 0;
};

/// Sensor registry entry: GSDs, band table, scale ratio.
struct SensorSpec {
    std::string name;
    double g_pan = 0.0; ///< PAN ground sampling distance, meters
    double g_ms = 0.0;  ///< MS ground sampling distance, meters
    std::vector<BandInfo> bands;
    int ratio = 4; ///< r = g_ms / g_pan rounded to integer

    int band_count() const { return static_cast<int>(bands.size()); }
    void validate() const;
};

/// Built-in registry: GF2, QB, WV3, WV2. Unknown names throw LookupError.
const SensorSpec& sensor_registry(const std::string& name);

/// Names of the built-in sensors in registry order.
const std::vector<std::string>& builtin_sensor_names();

/// Metadata prompt for one band (1-based index):
///   "Sensor <S>. PAN GSD <g_pan> m. MS GSD <g_ms> m. MS bands <B>.
///    Band <name>. Wavelength [<lo>,<hi>] nm."
/// joined with single spaces; GSDs use two decimals, wavelengths integers.
std::string build_prompt(const SensorSpec& spec, int band_index);

/// Parse a custom SensorSpec from a JSON object string (see README).
SensorSpec sensor_from_json(const std::string& json_text);

} // namespace pansharp::data

#include "pansharp/sensor.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace pansharp::data {

void SensorSpec::validate() const {
    if (name.empty()) throw FormatError("SensorSpec: empty name");
    if (g_pan <= 0.0 || g_ms <= 0.0) throw FormatError("SensorSpec: GSDs must be positive");
    if (bands.empty()) throw FormatError("SensorSpec: no bands");
    if (ratio < 2) throw FormatError("SensorSpec: ratio must be >= 2");
    if (std::lround(g_ms / g_pan) != ratio)
        throw FormatError("SensorSpec: ratio must equal g_ms/g_pan rounded to integer");
    for (const auto& b : bands)
        if (b.lambda_lo_nm >= b.lambda_hi_nm)
            throw FormatError("SensorSpec: band " + b.name + " has an empty wavelength range");
}

namespace {

std::vector<SensorSpec> make_builtin() {
    const std::vector<BandInfo> wv_bands = {
        {"Coastal", 400, 450}, {"Blue", 450, 510},    {"Green", 510, 580}, {"Yellow", 585, 625},
        {"Red", 630, 690},     {"RedEdge", 705, 745}, {"NIR1", 770, 895},  {"NIR2", 860, 1040}};
    std::vector<SensorSpec> v;
    v.push_back({"GF2",
                 1.00,
                 4.00,
                 {{"Blue", 450, 520}, {"Green", 520, 590}, {"Red", 630, 690}, {"NIR", 770, 890}},
                 4});
    v.push_back({"QB",
                 0.60,
                 2.40,
                 {{"Blue", 450, 520}, {"Green", 520, 600}, {"Red", 630, 690}, {"NIR", 760, 900}},
                 4});
    v.push_back({"WV3", 0.31, 1.24, wv_bands, 4});
    v.push_back({"WV2", 0.46, 1.84, wv_bands, 4});
    for (const auto& s : v) s.validate();
    return v;
}

} // namespace

const SensorSpec& sensor_registry(const std::string& name) {
    static const std::vector<SensorSpec> builtin = make_builtin();
    for (const auto& s : builtin)
        if (s.name == name) return s;
    throw LookupError("sensor_registry: unknown sensor '" + name +
                      "' (custom sensors are loadable from a config file)");
}

const std::vector<std::string>& builtin_sensor_names() {
    static const std::vector<std::string> names = {"GF2", "QB", "WV3", "WV2"};
    return names;
}

std::string build_prompt(const SensorSpec& spec, int band_index) {
    if (band_index < 1 || band_index > spec.band_count())
        throw ArgumentError("build_prompt: band index out of range");
    const BandInfo& b = spec.bands[band_index - 1];
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "Sensor %s. PAN GSD %.2f m. MS GSD %.2f m. MS bands %d. "
                  "Band %s. Wavelength [%d,%d] nm.",
                  spec.name.c_str(), spec.g_pan, spec.g_ms, spec.band_count(), b.name.c_str(),
                  b.lambda_lo_nm, b.lambda_hi_nm);
    return buf;
}

SensorSpec sensor_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("sensor_from_json: ") + e.what());
    }
    SensorSpec s;
    try {
        s.name = j.at("name").get<std::string>();
        s.g_pan = j.at("g_pan").get<double>();
        s.g_ms = j.at("g_ms").get<double>();
        s.ratio = j.value("ratio", static_cast<int>(std::lround(s.g_ms / s.g_pan)));
        for (const auto& b : j.at("bands"))
            s.bands.push_back({b.at("name").get<std::string>(), b.at("lo").get<int>(),
                               b.at("hi").get<int>()});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("sensor_from_json: missing field: ") + e.what());
    }
    s.validate();
    return s;
}

} // namespace pansharp::data

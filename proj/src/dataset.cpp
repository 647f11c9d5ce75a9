#include "pansharp/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pansharp/imageops.hpp"
#include "pansharp/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "container format is little-endian; big-endian hosts are unsupported");

namespace fs = std::filesystem;
using nlohmann::json;

namespace pansharp::data {

std::string to_string(Protocol p) { return p == Protocol::RR ? "RR" : "FR"; }

Protocol protocol_from_string(const std::string& s) {
    if (s == "RR") return Protocol::RR;
    if (s == "FR") return Protocol::FR;
    throw FormatError("protocol must be RR or FR, got '" + s + "'");
}

void FusionSample::validate() const {
    const int r = sensor.ratio;
    if (pan.bands() != 1) throw FormatError(id + ": PAN must be single-band");
    if (ms.bands() != sensor.band_count() || lms.bands() != sensor.band_count())
        throw FormatError(id + ": band count inconsistent with sensor " + sensor.name);
    if (pan.height() != r * ms.height() || pan.width() != r * ms.width())
        throw FormatError(id + ": PAN dims must be ratio times MS dims");
    if (lms.height() != pan.height() || lms.width() != pan.width())
        throw FormatError(id + ": LMS must be at PAN scale");
    if (protocol == Protocol::RR && !gt)
        throw FormatError(id + ": RR protocol requires GT");
    if (protocol == Protocol::FR && gt)
        throw FormatError(id + ": FR protocol must not carry GT");
    if (gt && !gt->same_shape(lms)) throw FormatError(id + ": GT must be at PAN scale");
    pan.check_finite(id + "/PAN");
    ms.check_finite(id + "/MS");
    lms.check_finite(id + "/LMS");
    if (gt) gt->check_finite(id + "/GT");
}

ForwardModelParams ForwardModelParams::defaults(int bands, int ratio) {
    ForwardModelParams p;
    // Mid-spectrum-weighted mixing, normalized to sum 1.
    const double c = (bands - 1) / 2.0;
    const double s = std::max(1.0, bands / 3.0);
    double sum = 0.0;
    p.mixing.resize(bands);
    for (int b = 0; b < bands; ++b) {
        p.mixing[b] = std::exp(-(b - c) * (b - c) / (2.0 * s * s));
        sum += p.mixing[b];
    }
    for (double& w : p.mixing) w /= sum;
    p.ms_mtf = img::gaussian_kernel(ratio / 2.0, 9);
    p.pan_mtf = img::gaussian_kernel(ratio / 4.0, 9);
    p.noise_sigma = 0.0;
    return p;
}

ForwardModelParams ForwardModelParams::from_json(const std::string& json_text, int bands,
                                                 int ratio) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("ForwardModelParams: ") + e.what());
    }
    ForwardModelParams p = defaults(bands, ratio);
    if (j.contains("mixing")) {
        p.mixing = j["mixing"].get<std::vector<double>>();
        if (static_cast<int>(p.mixing.size()) != bands)
            throw FormatError("ForwardModelParams: mixing length != band count");
    }
    if (j.contains("ms_sigma")) p.ms_mtf = img::gaussian_kernel(j["ms_sigma"].get<double>(), 9);
    if (j.contains("pan_sigma")) p.pan_mtf = img::gaussian_kernel(j["pan_sigma"].get<double>(), 9);
    if (j.contains("noise_sigma")) p.noise_sigma = j["noise_sigma"].get<double>();
    return p;
}

FusionSample wald_synthesize(const RasterStack& hrms, const ForwardModelParams& params, int ratio,
                             const SensorSpec& sensor, std::uint64_t seed, const std::string& id) {
    const int B = hrms.bands();
    if (static_cast<int>(params.mixing.size()) != B)
        throw DimensionError("wald_synthesize: mixing weight count != band count");
    if (B != sensor.band_count())
        throw DimensionError("wald_synthesize: band count inconsistent with sensor");
    if (hrms.height() % ratio != 0 || hrms.width() % ratio != 0)
        throw DimensionError("wald_synthesize: dims must be divisible by the ratio");
    double wsum = 0.0;
    for (double w : params.mixing) {
        if (w < 0.0) throw ArgumentError("wald_synthesize: mixing weights must be nonnegative");
        wsum += w;
    }
    if (wsum <= 0.0) throw ArgumentError("wald_synthesize: mixing weights must not all vanish");

    Rng rng(seed);

    RasterStack ms = img::bicubic_downsample(img::separable_filter(hrms, params.ms_mtf), ratio);

    RasterStack mix(1, hrms.height(), hrms.width());
    for (int y = 0; y < hrms.height(); ++y)
        for (int x = 0; x < hrms.width(); ++x) {
            double acc = 0.0;
            for (int b = 0; b < B; ++b) acc += params.mixing[b] * hrms.at(b, y, x);
            mix.at(0, y, x) = acc;
        }
    RasterStack pan = img::separable_filter(mix, params.pan_mtf);

    if (params.noise_sigma > 0.0) {
        for (double& v : ms.data()) v += params.noise_sigma * rng.gaussian();
        for (double& v : pan.data()) v += params.noise_sigma * rng.gaussian();
    }

    FusionSample s;
    s.id = id;
    s.pan = std::move(pan);
    s.ms = std::move(ms);
    s.lms = img::bicubic_upsample(s.ms, ratio);
    s.gt = hrms;
    s.sensor = sensor;
    s.protocol = Protocol::RR;
    s.validate();
    return s;
}

FusionSample wald_synthesize_interior(const RasterStack& padded_hrms,
                                      const ForwardModelParams& params, int ratio,
                                      const SensorSpec& sensor, std::uint64_t seed,
                                      const std::string& id) {
    FusionSample s = wald_synthesize(padded_hrms, params, ratio, sensor, seed, id);
    const int needed = std::max(params.pan_mtf.radius(),
                                ratio * ((params.ms_mtf.radius() + ratio - 1) / ratio) + 2);
    const int margin = ((needed + ratio - 1) / ratio) * ratio;
    s.pan = img::crop_border(s.pan, margin);
    s.lms = img::crop_border(s.lms, margin);
    s.gt = img::crop_border(*s.gt, margin);
    s.ms = img::crop_border(s.ms, margin / ratio);
    s.validate();
    return s;
}

std::vector<RasterStack> fold_bands(const std::vector<RasterStack>& scenes) {
    std::vector<RasterStack> rows;
    for (const auto& scene : scenes)
        for (int b = 0; b < scene.bands(); ++b) rows.push_back(scene.extract_band(b));
    return rows;
}

std::vector<RasterStack> unfold_bands(const std::vector<RasterStack>& rows, int bands) {
    if (bands < 1 || rows.size() % static_cast<std::size_t>(bands) != 0)
        throw DimensionError("unfold_bands: row count not divisible by band count");
    std::vector<RasterStack> scenes;
    for (std::size_t n = 0; n < rows.size() / bands; ++n) {
        const auto& first = rows[n * bands];
        RasterStack scene(bands, first.height(), first.width());
        for (int b = 0; b < bands; ++b) {
            const auto& row = rows[n * bands + b];
            if (!row.same_shape(first) || row.bands() != 1)
                throw DimensionError("unfold_bands: inconsistent row shapes");
            std::copy(row.band(0).begin(), row.band(0).end(), scene.band(b).begin());
        }
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

void quantize_f32(RasterStack& r) {
    for (double& v : r.data()) v = static_cast<double>(static_cast<float>(v));
}

void quantize_f32(FusionSample& s) {
    quantize_f32(s.pan);
    quantize_f32(s.ms);
    quantize_f32(s.lms);
    if (s.gt) quantize_f32(*s.gt);
}

namespace {

json shape_of(const RasterStack& r) { return json::array({r.bands(), r.height(), r.width()}); }

void write_array(const fs::path& path, const RasterStack& r) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("save_container: cannot open " + path.string());
    std::vector<float> buf(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) buf[i] = static_cast<float>(r.data()[i]);
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

RasterStack read_array(const fs::path& path, const json& shape, const std::string& what) {
    if (!shape.is_array() || shape.size() != 3)
        throw FormatError("load_container: bad shape for " + what);
    const int b = shape[0], h = shape[1], w = shape[2];
    const std::size_t count = static_cast<std::size_t>(b) * h * w;
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw FormatError("load_container: missing array file " + path.string());
    const auto bytes = static_cast<std::size_t>(f.tellg());
    if (bytes != count * sizeof(float))
        throw FormatError("load_container: truncated array " + what + " in " + path.string());
    f.seekg(0);
    std::vector<float> buf(count);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = static_cast<double>(buf[i]);
    return RasterStack::from_data(b, h, w, std::move(data));
}

json sensor_to_json(const SensorSpec& s) {
    json bands = json::array();
    for (const auto& b : s.bands) bands.push_back({{"name", b.name}, {"lo", b.lambda_lo_nm}, {"hi", b.lambda_hi_nm}});
    return {{"name", s.name}, {"g_pan", s.g_pan}, {"g_ms", s.g_ms}, {"ratio", s.ratio}, {"bands", bands}};
}

SensorSpec sensor_from_manifest(const json& j) { return sensor_from_json(j.dump()); }

} // namespace

void save_container(const std::vector<FusionSample>& samples, const std::string& dir) {
    if (samples.empty()) throw ArgumentError("save_container: no samples");
    for (const auto& s : samples) {
        s.validate();
        if (s.sensor.name != samples.front().sensor.name || s.protocol != samples.front().protocol)
            throw ArgumentError("save_container: mixed sensors or protocols in one container");
    }
    fs::create_directories(dir);
    json manifest;
    manifest["format"] = "pansharp-container";
    manifest["version"] = 1;
    manifest["protocol"] = to_string(samples.front().protocol);
    manifest["sensor"] = sensor_to_json(samples.front().sensor);
    json list = json::array();
    for (const auto& s : samples) {
        json entry;
        entry["id"] = s.id;
        entry["PAN"] = shape_of(s.pan);
        entry["MS"] = shape_of(s.ms);
        entry["LMS"] = shape_of(s.lms);
        write_array(fs::path(dir) / (s.id + "_PAN.f32"), s.pan);
        write_array(fs::path(dir) / (s.id + "_MS.f32"), s.ms);
        write_array(fs::path(dir) / (s.id + "_LMS.f32"), s.lms);
        if (s.gt) {
            entry["GT"] = shape_of(*s.gt);
            write_array(fs::path(dir) / (s.id + "_GT.f32"), *s.gt);
        }
        list.push_back(std::move(entry));
    }
    manifest["samples"] = std::move(list);
    std::ofstream mf(fs::path(dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
}

std::vector<FusionSample> load_container(const std::string& dir) {
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw FormatError("load_container: no manifest.json in " + dir);
    json manifest;
    try {
        mf >> manifest;
    } catch (const json::exception& e) {
        throw FormatError(std::string("load_container: manifest parse error: ") + e.what());
    }
    if (manifest.value("format", "") != "pansharp-container")
        throw FormatError("load_container: bad magic in field 'format'");
    if (manifest.value("version", 0) != 1)
        throw FormatError("load_container: unsupported value in field 'version'");
    if (!manifest.contains("protocol"))
        throw FormatError("load_container: missing field 'protocol'");
    const Protocol proto = protocol_from_string(manifest["protocol"].get<std::string>());
    if (!manifest.contains("sensor")) throw FormatError("load_container: missing field 'sensor'");
    const SensorSpec sensor = sensor_from_manifest(manifest["sensor"]);

    std::vector<FusionSample> out;
    for (const auto& entry : manifest.value("samples", json::array())) {
        FusionSample s;
        s.id = entry.value("id", "");
        if (s.id.empty()) throw FormatError("load_container: sample missing field 'id'");
        if (proto == Protocol::FR && entry.contains("GT"))
            throw FormatError("load_container: sample " + s.id +
                              " declares GT under the FR protocol");
        s.sensor = sensor;
        s.protocol = proto;
        s.pan = read_array(fs::path(dir) / (s.id + "_PAN.f32"), entry.at("PAN"), s.id + "/PAN");
        s.ms = read_array(fs::path(dir) / (s.id + "_MS.f32"), entry.at("MS"), s.id + "/MS");
        s.lms = read_array(fs::path(dir) / (s.id + "_LMS.f32"), entry.at("LMS"), s.id + "/LMS");
        if (entry.contains("GT"))
            s.gt = read_array(fs::path(dir) / (s.id + "_GT.f32"), entry.at("GT"), s.id + "/GT");
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace pansharp::data

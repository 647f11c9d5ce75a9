#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pansharp/dataset.hpp"
#include "pansharp/imageops.hpp"
#include "pansharp/sensor.hpp"
#include "support/testutil.hpp"

using namespace pansharp;
using namespace pansharp::data;
using testutil::bitwise_equal;
using testutil::random_raster;

TEST_CASE("sensor registry: table values verbatim") {
    const auto& qb = sensor_registry("QB");
    CHECK(qb.g_pan == 0.60);
    CHECK(qb.g_ms == 2.40);
    CHECK(qb.band_count() == 4);
    CHECK(qb.bands[3].name == "NIR");
    CHECK(qb.bands[3].lambda_lo_nm == 760);
    CHECK(qb.bands[3].lambda_hi_nm == 900);
    CHECK(qb.ratio == 4);

    const auto& gf2 = sensor_registry("GF2");
    CHECK(gf2.g_pan == 1.00);
    CHECK(gf2.g_ms == 4.00);
    CHECK(gf2.bands[0].name == "Blue");
    CHECK(gf2.bands[0].lambda_lo_nm == 450);
    CHECK(gf2.bands[0].lambda_hi_nm == 520);
    CHECK(gf2.bands[1].lambda_hi_nm == 590);

    const auto& wv3 = sensor_registry("WV3");
    CHECK(wv3.g_pan == 0.31);
    CHECK(wv3.g_ms == 1.24);
    CHECK(wv3.band_count() == 8);
    const char* names[8] = {"Coastal", "Blue", "Green", "Yellow", "Red", "RedEdge", "NIR1", "NIR2"};
    const int los[8] = {400, 450, 510, 585, 630, 705, 770, 860};
    const int his[8] = {450, 510, 580, 625, 690, 745, 895, 1040};
    for (int b = 0; b < 8; ++b) {
        CHECK(wv3.bands[b].name == names[b]);
        CHECK(wv3.bands[b].lambda_lo_nm == los[b]);
        CHECK(wv3.bands[b].lambda_hi_nm == his[b]);
    }

    const auto& wv2 = sensor_registry("WV2");
    CHECK(wv2.g_pan == 0.46);
    CHECK(wv2.g_ms == 1.84);
    for (int b = 0; b < 8; ++b) {
        CHECK(wv2.bands[b].lambda_lo_nm == wv3.bands[b].lambda_lo_nm);
        CHECK(wv2.bands[b].lambda_hi_nm == wv3.bands[b].lambda_hi_nm);
    }

    CHECK_THROWS_AS(sensor_registry("LANDSAT"), pansharp::LookupError);
}

TEST_CASE("sensor from json config") {
    const auto s = sensor_from_json(R"({
        "name": "TOY4", "g_pan": 1.0, "g_ms": 4.0,
        "bands": [{"name":"B1","lo":400,"hi":500},{"name":"B2","lo":500,"hi":600},
                  {"name":"B3","lo":600,"hi":700},{"name":"B4","lo":700,"hi":900}]})");
    CHECK(s.name == "TOY4");
    CHECK(s.ratio == 4);
    CHECK(s.band_count() == 4);
    CHECK_THROWS_AS(sensor_from_json("{"), pansharp::FormatError);
    CHECK_THROWS_AS(sensor_from_json(R"({"name":"X"})"), pansharp::FormatError);
}

TEST_CASE("prompt strings: exact template instantiation") {
    CHECK(build_prompt(sensor_registry("WV3"), 4) ==
          "Sensor WV3. PAN GSD 0.31 m. MS GSD 1.24 m. MS bands 8. "
          "Band Yellow. Wavelength [585,625] nm.");
    CHECK(build_prompt(sensor_registry("GF2"), 1) ==
          "Sensor GF2. PAN GSD 1.00 m. MS GSD 4.00 m. MS bands 4. "
          "Band Blue. Wavelength [450,520] nm.");
    CHECK(build_prompt(sensor_registry("QB"), 4) ==
          "Sensor QB. PAN GSD 0.60 m. MS GSD 2.40 m. MS bands 4. "
          "Band NIR. Wavelength [760,900] nm.");
    // Byte-stable across calls.
    CHECK(build_prompt(sensor_registry("WV2"), 8) == build_prompt(sensor_registry("WV2"), 8));
    CHECK_THROWS_AS(build_prompt(sensor_registry("QB"), 0), ArgumentError);
    CHECK_THROWS_AS(build_prompt(sensor_registry("QB"), 5), ArgumentError);
}

namespace {

SensorSpec toy_sensor(int bands = 4) {
    SensorSpec s;
    s.name = "TOY";
    s.g_pan = 1.0;
    s.g_ms = 4.0;
    s.ratio = 4;
    for (int b = 0; b < bands; ++b)
        s.bands.push_back({"B" + std::to_string(b + 1), 400 + 100 * b, 500 + 100 * b});
    return s;
}

} // namespace

TEST_CASE("wald synthesis: degenerate forward model is exact") {
    Rng rng(21);
    auto x = random_raster(rng, 4, 32, 32);
    ForwardModelParams p;
    p.mixing = {1.0, 0.0, 0.0, 0.0};
    p.ms_mtf.taps = {1.0};
    p.pan_mtf.taps = {1.0};
    p.noise_sigma = 0.0;
    const auto s = wald_synthesize(x, p, 4, toy_sensor(), 1);
    // One-hot mixing with identity kernels: PAN equals band 1 exactly.
    CHECK(bitwise_equal(s.pan, x.extract_band(0)));
    CHECK(s.ms.height() == 8);
    CHECK(s.lms.height() == 32);
    CHECK(s.gt.has_value());
    CHECK(bitwise_equal(*s.gt, x));
}

TEST_CASE("wald synthesis: geometry and constant stacks") {
    Rng rng(22);
    auto x = random_raster(rng, 4, 256, 256);
    const auto params = ForwardModelParams::defaults(4, 4);
    const auto s = wald_synthesize(x, params, 4, toy_sensor(), 7);
    CHECK(s.ms.height() == 64);
    CHECK(s.ms.width() == 64);
    CHECK(s.pan.height() == 256);
    CHECK(s.lms.height() == 256);

    RasterStack c(4, 32, 32);
    const double levels[4] = {0.1, 0.3, 0.5, 0.7};
    for (int b = 0; b < 4; ++b)
        for (double& v : c.band(b)) v = levels[b];
    const auto cs = wald_synthesize(c, params, 4, toy_sensor(), 7);
    double expect_pan = 0.0;
    for (int b = 0; b < 4; ++b) expect_pan += params.mixing[b] * levels[b];
    for (int b = 0; b < 4; ++b)
        for (double v : cs.ms.band(b)) CHECK(v == doctest::Approx(levels[b]).epsilon(1e-12));
    for (double v : cs.pan.data()) CHECK(v == doctest::Approx(expect_pan).epsilon(1e-12));
}

TEST_CASE("wald synthesis: mean conservation and determinism") {
    Rng rng(23);
    auto x = random_raster(rng, 2, 64, 64);
    SensorSpec sensor = toy_sensor(2);
    auto params = ForwardModelParams::defaults(2, 4);

    // Zero noise: the MS samples are exactly the blurred stack at the
    // decimation grid, so the means over matching pixels agree.
    const auto s = wald_synthesize(x, params, 4, sensor, 5);
    const auto blurred = img::separable_filter(x, params.ms_mtf);
    for (int b = 0; b < 2; ++b) {
        double ms_mean = 0, grid_mean = 0;
        for (int y = 0; y < 16; ++y)
            for (int xx = 0; xx < 16; ++xx) {
                ms_mean += s.ms.at(b, y, xx);
                grid_mean += blurred.at(b, 4 * y, 4 * xx);
            }
        CHECK(std::abs(ms_mean - grid_mean) / 256.0 < 1e-10);
    }

    params.noise_sigma = 0.01;
    const auto a1 = wald_synthesize(x, params, 4, sensor, 99);
    const auto a2 = wald_synthesize(x, params, 4, sensor, 99);
    CHECK(bitwise_equal(a1.ms, a2.ms));
    CHECK(bitwise_equal(a1.pan, a2.pan));
    const auto a3 = wald_synthesize(x, params, 4, sensor, 100);
    CHECK(!bitwise_equal(a1.ms, a3.ms));

    ForwardModelParams bad = params;
    bad.mixing = {1.0};
    CHECK_THROWS_AS(wald_synthesize(x, bad, 4, sensor, 1), DimensionError);
}

TEST_CASE("band folding: index law and bijection") {
    Rng rng(24);
    std::vector<RasterStack> scenes;
    for (int n = 0; n < 2; ++n) scenes.push_back(random_raster(rng, 4, 6, 6));
    auto rows = fold_bands(scenes);
    CHECK(rows.size() == 8);
    // Row n*B + b carries (scene n, band b): row 5 = (1, 1).
    CHECK(bitwise_equal(rows[5], scenes[1].extract_band(1)));

    auto back = unfold_bands(rows, 4);
    REQUIRE(back.size() == 2);
    CHECK(bitwise_equal(back[0], scenes[0]));
    CHECK(bitwise_equal(back[1], scenes[1]));

    std::vector<RasterStack> big;
    for (int n = 0; n < 24; ++n) big.push_back(random_raster(rng, 8, 4, 4));
    CHECK(fold_bands(big).size() == 192);

    CHECK_THROWS_AS(unfold_bands(rows, 3), DimensionError);
}

TEST_CASE("container: round trip, manifest validation, truncation") {
    Rng rng(25);
    const auto params = ForwardModelParams::defaults(4, 4);
    std::vector<FusionSample> samples;
    for (int i = 0; i < 3; ++i) {
        auto s = wald_synthesize(random_raster(rng, 4, 32, 32), params, 4, toy_sensor(),
                                 100 + i, "s" + std::to_string(i));
        quantize_f32(s);
        samples.push_back(std::move(s));
    }
    const std::string dir = (std::filesystem::temp_directory_path() / "pansharp_ctr_test").string();
    std::filesystem::remove_all(dir);
    save_container(samples, dir);

    const auto loaded = load_container(dir);
    REQUIRE(loaded.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(loaded[i].id == samples[i].id);
        CHECK(bitwise_equal(loaded[i].pan, samples[i].pan));
        CHECK(bitwise_equal(loaded[i].ms, samples[i].ms));
        CHECK(bitwise_equal(loaded[i].lms, samples[i].lms));
        CHECK(bitwise_equal(*loaded[i].gt, *samples[i].gt));
        CHECK(loaded[i].sensor.name == "TOY");
    }

    // GT declared under FR protocol must be rejected.
    {
        std::ifstream mf(dir + "/manifest.json");
        std::string text((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
        auto pos = text.find("\"RR\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 4, "\"FR\"");
        std::ofstream out(dir + "/manifest.json");
        out << text;
    }
    CHECK_THROWS_AS(load_container(dir), FormatError);

    // Restore, then truncate one array file: the error names the array.
    save_container(samples, dir);
    std::filesystem::resize_file(dir + "/s1_MS.f32", 16);
    try {
        load_container(dir);
        CHECK(false);
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("s1/MS") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pansharp/raster.hpp"
#include "pansharp/sensor.hpp"

namespace pansharp::data {

enum class Protocol { RR, FR };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

/// One fusion scene: PAN, LRMS, upsampled LRMS, optional ground truth.
struct FusionSample {
    std::string id;
    RasterStack pan; ///< 1 x H x W
    RasterStack ms;  ///< B x h x w
    RasterStack lms; ///< B x H x W
    std::optional<RasterStack> gt;
    SensorSpec sensor;
    Protocol protocol = Protocol::RR;

    void validate() const;
};

/// Sensor forward model: band mixing weights, MTF kernels, noise level.
struct ForwardModelParams {
    std::vector<double> mixing;   ///< B nonnegative SRF weights
    FilterKernel pan_mtf;         ///< kappa, unit gain
    FilterKernel ms_mtf;          ///< k, unit gain
    double noise_sigma = 0.0;

    /// Synthetic defaults: mid-spectrum-weighted mixing summing to 1,
    /// MS MTF Gaussian sigma=r/2 k=9, PAN MTF Gaussian sigma=r/4 k=9.
    static ForwardModelParams defaults(int bands, int ratio);
    static ForwardModelParams from_json(const std::string& json_text, int bands, int ratio);
};

/// Reduced-resolution synthesis from a high-resolution stack:
///   ms_b = Down_r(k * X_b) + noise, pan = kappa * (sum_b w_b X_b) + noise,
///   lms = Up_r(ms), gt = X. Deterministic given the seed.
FusionSample wald_synthesize(const RasterStack& hrms, const ForwardModelParams& params, int ratio,
                             const SensorSpec& sensor, std::uint64_t seed,
                             const std::string& id = "synth");

/// wald_synthesize on a padded canvas, cropped so that no replicate-padding
/// artifact remains: the returned sample obeys the forward model exactly on
/// its full area (border 0). The crop margin is computed from the kernel
/// radii and rounded up to a multiple of the ratio.
FusionSample wald_synthesize_interior(const RasterStack& padded_hrms,
                                      const ForwardModelParams& params, int ratio,
                                      const SensorSpec& sensor, std::uint64_t seed,
                                      const std::string& id = "synth");

/// Band folding: scenes of B bands to a flat band-major list of
/// single-band stacks; row n*B + b holds (scene n, band b).
std::vector<RasterStack> fold_bands(const std::vector<RasterStack>& scenes);

/// Inverse of fold_bands for a known band count.
std::vector<RasterStack> unfold_bands(const std::vector<RasterStack>& rows, int bands);

/// Round all samples to float32 precision (the container storage type).
void quantize_f32(RasterStack& r);
void quantize_f32(FusionSample& s);

/// Directory container: manifest.json plus one raw little-endian float32
/// file per array named <sample>_<PAN|MS|LMS|GT>.f32, C-order.
void save_container(const std::vector<FusionSample>& samples, const std::string& dir);
std::vector<FusionSample> load_container(const std::string& dir);

} // namespace pansharp::data

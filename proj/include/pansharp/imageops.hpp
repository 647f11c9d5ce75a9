#pragma once

#include <utility>

#include "pansharp/raster.hpp"

namespace pansharp::img {

/// Normalized Gaussian taps, taps[i] ~ exp(-(i-c)^2 / (2 sigma^2)), sum 1.
FilterKernel gaussian_kernel(double sigma, int taps);

/// Separable per-band convolution with replicate borders.
/// Valid region shrinks by the kernel radius.
RasterStack separable_filter(const RasterStack& img, const FilterKernel& k);

/// Gaussian low-pass, sigma in pixels, k odd tap count.
RasterStack gaussian_lowpass(const RasterStack& img, double sigma, int taps);

/// Catmull-Rom (a = -0.5) bicubic upsampling by integer factor r.
/// Output pixel o samples input coordinate o/r, so input samples pass
/// through unchanged at multiples of r. Replicate borders.
RasterStack bicubic_upsample(const RasterStack& img, int factor);

/// Bicubic downsampling by 1/r. With the o*r coordinate convention the
/// kernel degenerates to exact decimation; dims must be divisible by r.
RasterStack bicubic_downsample(const RasterStack& img, int factor);

/// factor = num/den with exactly one of num, den equal to 1.
RasterStack bicubic_resample(const RasterStack& img, int num, int den);

/// Sobel gradient magnitude of a single-band image; border grows by 1.
RasterStack sobel_gradient(const RasterStack& img);

/// Fixed non-learned split: low = Gaussian blur (sigma=1.0, k=5),
/// high = x - low, so low + high == x bit-exactly.
std::pair<RasterStack, RasterStack> freq_split(const RasterStack& img);

struct PanDegradeResult {
    RasterStack down; ///< MS-scale proxy: Down_r(G_{r/2} * P), k = 9
    RasterStack up;   ///< PAN-scale re-upsampled proxy: Up_r(down)
};

/// Scale-degraded PAN proxy used by the no-reference protocol.
PanDegradeResult pan_degrade(const RasterStack& pan, int ratio);

/// Trim `margin` pixels on every side; the result has border 0.
RasterStack crop_border(const RasterStack& img, int margin);

} // namespace pansharp::img

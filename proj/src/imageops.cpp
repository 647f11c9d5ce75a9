#include "pansharp/imageops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pansharp::img {

namespace {

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

/// Catmull-Rom kernel, a = -0.5.
double catmull_rom(double t) {
    const double at = std::abs(t);
    if (at < 1.0) return ((1.5 * at - 2.5) * at) * at + 1.0;
    if (at < 2.0) return ((-0.5 * at + 2.5) * at - 4.0) * at + 2.0;
    return 0.0;
}

/// Grow the valid-region border, clamping so Omega stays nonempty.
void grow_border(RasterStack& r, int delta) {
    int b = r.border() + delta;
    const int cap = (std::min(r.height(), r.width()) - 1) / 2;
    r.set_border(std::min(b, cap));
}

} // namespace

FilterKernel gaussian_kernel(double sigma, int taps) {
    if (sigma <= 0.0) throw ArgumentError("gaussian_kernel: sigma must be > 0");
    if (taps < 1 || taps % 2 == 0) throw ArgumentError("gaussian_kernel: tap count must be odd");
    FilterKernel k;
    k.taps.resize(taps);
    const int c = taps / 2;
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        const double d = i - c;
        k.taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k.taps[i];
    }
    for (double& t : k.taps) t /= sum;
    return k;
}

RasterStack separable_filter(const RasterStack& im, const FilterKernel& k) {
    const int B = im.bands(), H = im.height(), W = im.width();
    const int R = k.radius();
    RasterStack tmp(B, H, W), out(B, H, W);
    // Horizontal pass.
    for (int b = 0; b < B; ++b)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                for (int i = -R; i <= R; ++i)
                    acc += k.taps[i + R] * im.at(b, y, clampi(x + i, 0, W - 1));
                tmp.at(b, y, x) = acc;
            }
    // Vertical pass.
    for (int b = 0; b < B; ++b)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                for (int i = -R; i <= R; ++i)
                    acc += k.taps[i + R] * tmp.at(b, clampi(y + i, 0, H - 1), x);
                out.at(b, y, x) = acc;
            }
    out.set_border(im.border());
    grow_border(out, R);
    return out;
}

RasterStack gaussian_lowpass(const RasterStack& im, double sigma, int taps) {
    return separable_filter(im, gaussian_kernel(sigma, taps));
}

RasterStack bicubic_upsample(const RasterStack& im, int factor) {
    if (factor <= 0) throw ArgumentError("bicubic_upsample: factor must be positive");
    if (factor == 1) return im;
    const int B = im.bands(), H = im.height(), W = im.width();
    const int HO = H * factor, WO = W * factor;

    // Per-phase Catmull-Rom weights; phase 0 passes samples through.
    std::vector<std::array<double, 4>> wts(factor);
    for (int p = 0; p < factor; ++p) {
        const double f = static_cast<double>(p) / factor;
        wts[p] = {catmull_rom(f + 1.0), catmull_rom(f), catmull_rom(f - 1.0),
                  catmull_rom(f - 2.0)};
    }

    RasterStack tmp(B, H, WO);
    for (int b = 0; b < B; ++b)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < WO; ++x) {
                const int base = x / factor;
                const auto& w = wts[x % factor];
                double acc = 0.0;
                for (int kk = 0; kk < 4; ++kk)
                    acc += w[kk] * im.at(b, y, clampi(base - 1 + kk, 0, W - 1));
                tmp.at(b, y, x) = acc;
            }
    RasterStack out(B, HO, WO);
    for (int b = 0; b < B; ++b)
        for (int y = 0; y < HO; ++y) {
            const int base = y / factor;
            const auto& w = wts[y % factor];
            for (int x = 0; x < WO; ++x) {
                double acc = 0.0;
                for (int kk = 0; kk < 4; ++kk)
                    acc += w[kk] * tmp.at(b, clampi(base - 1 + kk, 0, H - 1), x);
                out.at(b, y, x) = acc;
            }
        }
    out.set_border(0);
    grow_border(out, im.border() * factor + 2);
    return out;
}

RasterStack bicubic_downsample(const RasterStack& im, int factor) {
    if (factor <= 0) throw ArgumentError("bicubic_downsample: factor must be positive");
    if (factor == 1) return im;
    const int B = im.bands(), H = im.height(), W = im.width();
    if (H % factor != 0 || W % factor != 0)
        throw DimensionError("bicubic_downsample: dims not divisible by factor");
    const int HO = H / factor, WO = W / factor;
    RasterStack out(B, HO, WO);
    for (int b = 0; b < B; ++b)
        for (int y = 0; y < HO; ++y)
            for (int x = 0; x < WO; ++x)
                out.at(b, y, x) = im.at(b, y * factor, x * factor);
    out.set_border(0);
    grow_border(out, (im.border() + factor - 1) / factor);
    return out;
}

RasterStack bicubic_resample(const RasterStack& im, int num, int den) {
    if (num < 1 || den < 1) throw ArgumentError("bicubic_resample: factor must be positive");
    if (num != 1 && den != 1)
        throw ArgumentError("bicubic_resample: factor must be r or 1/r with integer r");
    if (num > 1) return bicubic_upsample(im, num);
    if (den > 1) return bicubic_downsample(im, den);
    return im;
}

RasterStack sobel_gradient(const RasterStack& im) {
    if (im.bands() != 1) throw DimensionError("sobel_gradient: expects a single band");
    const int H = im.height(), W = im.width();
    RasterStack out(1, H, W);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            const int ym = clampi(y - 1, 0, H - 1), yp = clampi(y + 1, 0, H - 1);
            const int xm = clampi(x - 1, 0, W - 1), xp = clampi(x + 1, 0, W - 1);
            // Paired differences keep constants exactly zero.
            const double gx = (im.at(0, ym, xp) - im.at(0, ym, xm)) +
                              2.0 * (im.at(0, y, xp) - im.at(0, y, xm)) +
                              (im.at(0, yp, xp) - im.at(0, yp, xm));
            const double gy = (im.at(0, yp, xm) - im.at(0, ym, xm)) +
                              2.0 * (im.at(0, yp, x) - im.at(0, ym, x)) +
                              (im.at(0, yp, xp) - im.at(0, ym, xp));
            out.at(0, y, x) = std::sqrt(gx * gx + gy * gy);
        }
    out.set_border(im.border());
    grow_border(out, 1);
    return out;
}

std::pair<RasterStack, RasterStack> freq_split(const RasterStack& im) {
    RasterStack low = gaussian_lowpass(im, 1.0, 5);
    RasterStack high(im.bands(), im.height(), im.width());
    for (std::size_t i = 0; i < im.size(); ++i)
        high.data()[i] = im.data()[i] - low.data()[i];
    high.set_border(low.border());
    return {std::move(low), std::move(high)};
}

RasterStack crop_border(const RasterStack& im, int margin) {
    if (margin < 0) throw ArgumentError("crop_border: negative margin");
    if (2 * margin >= im.height() || 2 * margin >= im.width())
        throw DimensionError("crop_border: margin leaves no pixels");
    RasterStack out(im.bands(), im.height() - 2 * margin, im.width() - 2 * margin);
    for (int b = 0; b < im.bands(); ++b)
        for (int y = 0; y < out.height(); ++y)
            for (int x = 0; x < out.width(); ++x)
                out.at(b, y, x) = im.at(b, y + margin, x + margin);
    return out;
}

PanDegradeResult pan_degrade(const RasterStack& pan, int ratio) {
    if (ratio < 2) throw ArgumentError("pan_degrade: ratio must be >= 2");
    RasterStack blurred = gaussian_lowpass(pan, ratio / 2.0, 9);
    RasterStack down = bicubic_downsample(blurred, ratio);
    RasterStack up = bicubic_upsample(down, ratio);
    return {std::move(down), std::move(up)};
}

} // namespace pansharp::img

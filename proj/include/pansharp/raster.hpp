#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pansharp/errors.hpp"

namespace pansharp {

/// B-band floating-point image, band-major layout (band, row, col).
///
/// Radiometric samples are kept in double; neural tensors elsewhere use
/// float. The valid pixel region Omega is tracked as a border-crop width:
/// pixels with y,x in [border, H-border) x [border, W-border) are valid.
class RasterStack {
public:
    RasterStack() = default;

    RasterStack(int bands, int height, int width, double fill = 0.0)
        : bands_(bands), h_(height), w_(width),
          data_(static_cast<std::size_t>(bands) * height * width, fill) {
        if (bands < 1 || height < 1 || width < 1)
            throw DimensionError("RasterStack: all dims must be >= 1");
    }

    static RasterStack from_data(int bands, int height, int width, std::vector<double> data) {
        RasterStack r(bands, height, width);
        if (data.size() != r.data_.size())
            throw DimensionError("RasterStack::from_data: size mismatch");
        r.data_ = std::move(data);
        return r;
    }

    int bands() const { return bands_; }
    int height() const { return h_; }
    int width() const { return w_; }
    std::size_t size() const { return data_.size(); }

    double& at(int b, int y, int x) { return data_[idx(b, y, x)]; }
    double at(int b, int y, int x) const { return data_[idx(b, y, x)]; }

    std::span<double> band(int b) {
        return {data_.data() + static_cast<std::size_t>(b) * h_ * w_,
                static_cast<std::size_t>(h_) * w_};
    }
    std::span<const double> band(int b) const {
        return {data_.data() + static_cast<std::size_t>(b) * h_ * w_,
                static_cast<std::size_t>(h_) * w_};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Border-crop width defining the valid region Omega.
    int border() const { return border_; }
    void set_border(int b) {
        if (b < 0 || 2 * b >= h_ || 2 * b >= w_)
            throw DimensionError("RasterStack: border leaves empty valid region");
        border_ = b;
    }

    bool same_shape(const RasterStack& o) const {
        return bands_ == o.bands_ && h_ == o.h_ && w_ == o.w_;
    }

    /// Extract one band as a new single-band stack (border preserved).
    RasterStack extract_band(int b) const {
        if (b < 0 || b >= bands_) throw ArgumentError("extract_band: index out of range");
        RasterStack out(1, h_, w_);
        auto src = band(b);
        std::copy(src.begin(), src.end(), out.data_.begin());
        out.border_ = border_;
        return out;
    }

    /// Throws NumericError if any sample is non-finite.
    void check_finite(const std::string& what) const;

private:
    std::size_t idx(int b, int y, int x) const {
        return (static_cast<std::size_t>(b) * h_ + y) * w_ + x;
    }

    int bands_ = 0, h_ = 0, w_ = 0;
    int border_ = 0;
    std::vector<double> data_;
};

/// Odd-width separable filter tap set.
struct FilterKernel {
    std::vector<double> taps;

    int width() const { return static_cast<int>(taps.size()); }
    int radius() const { return width() / 2; }
    double sum() const;
};

} // namespace pansharp

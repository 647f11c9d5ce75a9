#include "pansharp/raster.hpp"

#include <cmath>
#include <numeric>

namespace pansharp {

void RasterStack::check_finite(const std::string& what) const {
    for (double v : data_) {
        if (!std::isfinite(v))
            throw NumericError(what + ": non-finite sample detected");
    }
}

double FilterKernel::sum() const {
    return std::accumulate(taps.begin(), taps.end(), 0.0);
}

} // namespace pansharp

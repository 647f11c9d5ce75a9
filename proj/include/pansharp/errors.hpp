#pragma once

#include <stdexcept>
#include <string>

namespace pansharp {

/// Invalid argument values (bad kernel width, out-of-range band index, ...).
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Shape or divisibility violations between rasters/tensors.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Coordinates outside the valid region of an image or tensor.
class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

/// Malformed on-disk data (container manifests, checkpoints, configs).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unknown key in a registry (sensor names, checkpoint entries).
class LookupError : public std::runtime_error {
public:
    explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failures: NaN/Inf detected, undefined metric, degenerate system.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pansharp

#pragma once

namespace pansharp {

/// Compensated (Kahan) accumulator; keeps reductions order-stable.
class Kahan {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0, c_ = 0.0;
};

} // namespace pansharp

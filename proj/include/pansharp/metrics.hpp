#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pansharp/raster.hpp"

namespace pansharp::metrics {

/// Sliding-window parameters shared by UIQI-family metrics.
struct WindowConfig {
    int w = 32;
    int s = 1;
    double eps = 1e-12;
};

/// Two-factor UIQI on one window:
///   q = 2 mu_X mu_Y / (mu_X^2 + mu_Y^2 + eps) * 2 sigma_XY / (sigma_X^2 + sigma_Y^2 + eps)
/// with population moments. Degenerate windows (both denominators <= eps)
/// score 1 when the window contents are identical.
double uiqi_local(const RasterStack& x, const RasterStack& y, const WindowConfig& win,
                  int origin_y, int origin_x);

/// Average of uiqi_local over all stride-s window origins inside Omega.
double uiqi_mean(const RasterStack& x, const RasterStack& y, const WindowConfig& win);

/// Hypercomplex (Cayley-Dickson) multiband UIQI extension, Q4/Q8.
/// Band count must be a power of two <= 8.
double q2n(const RasterStack& f, const RasterStack& r, const WindowConfig& win);

/// Mean spectral angle in degrees over pixels where both norms exceed eps.
double sam(const RasterStack& f, const RasterStack& r);

/// Global relative radiometric error: 100 r sqrt(mean_b (RMSE_b/(mu_b+eps))^2).
double ergas(const RasterStack& f, const RasterStack& r, int ratio);

/// Mean over bands of the Pearson correlation between Sobel gradients of
/// the PAN image and each fused band; near-zero variance scores 0.
double scc(const RasterStack& f, const RasterStack& pan);

/// Spectral distortion: mean |Q(F_i,F_j) - Q(Mup_i,Mup_j)| over ordered pairs.
double d_lambda(const RasterStack& f, const RasterStack& m_up, const WindowConfig& win);

/// Spatial distortion against the PAN and its scale-degraded proxy.
double d_s(const RasterStack& f, const RasterStack& m_up, const RasterStack& pan, int ratio,
           const WindowConfig& win);

/// HQNR = (1 - D_lambda)(1 - D_s); both inputs must lie in [0, 1].
double hqnr(double d_lambda_value, double d_s_value);

/// Per-image metric record; fields are set according to the protocol.
struct MetricRow {
    std::string image_id;
    std::optional<double> q2n;
    std::optional<double> sam;
    std::optional<double> ergas;
    std::optional<double> scc;
    std::optional<double> d_lambda;
    std::optional<double> d_s;
    std::optional<double> hqnr;
};

struct Aggregate {
    std::optional<double> mean;
    std::optional<double> stddev;
};

/// Per-image rows plus mean +/- std aggregation.
class FusionReport {
public:
    void add(MetricRow row);
    const std::vector<MetricRow>& rows() const { return rows_; }

    /// mean and population std per metric column (over rows holding it).
    Aggregate aggregate(const std::string& column) const;

    /// Fixed-header CSV: image_id,Q2n,SAM,ERGAS,SCC,D_lambda,D_s,HQNR
    /// with trailing "mean" and "std" rows.
    std::string to_csv() const;

    /// Human-readable table for standard output.
    std::string to_table() const;

    static const std::vector<std::string>& columns();

private:
    std::vector<MetricRow> rows_;
};

} // namespace pansharp::metrics

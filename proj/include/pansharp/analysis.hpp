#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pansharp/dataset.hpp"
#include "pansharp/numeric.hpp"

namespace pansharp::analysis {

/// Subsampled (LMS bands, PAN) pixel pool used for the mixing surrogate.
struct PixelPool {
    std::vector<double> features; ///< n x bands, row-major
    std::vector<double> target;   ///< n PAN values
    int bands = 0;

    long count() const { return static_cast<long>(target.size()); }
    double feature(long row, int b) const { return features[row * bands + b]; }
};

/// Pool n_subsample random pixels across samples (with replacement),
/// deterministic in the seed. All samples must share one sensor.
PixelPool pool_pixels(const std::vector<data::FusionSample>& samples, long n_subsample,
                      std::uint64_t seed);

/// Ridge surrogate for the PAN mixing: P ~ sum_b w_b LMS_b + c.
struct MixingFit {
    std::vector<double> weights;
    double intercept = 0.0;
    double ridge_lambda = 0.0;
    long n_pixels = 0;
    std::vector<double> normalized_weights; ///< w / sum|w|, display form
    std::vector<double> feature_mean;       ///< standardization constants
    std::vector<double> feature_std;
};

/// Closed-form ridge on standardized regressors with unpenalized intercept.
/// A singular system at lambda ~ 0 raises NumericError suggesting lambda > 0.
MixingFit fit_pan_mixing(const PixelPool& pool, double ridge_lambda);
MixingFit fit_pan_mixing(const std::vector<data::FusionSample>& samples,
                         double ridge_lambda = 1e-3, long n_subsample = 50000,
                         std::uint64_t seed = 0);

/// Objective minimized by fit_pan_mixing, evaluated in original coordinates:
///   (1/n) sum (P - sum w x - c)^2 + lambda sum (w_b std_b)^2.
double ridge_objective(const PixelPool& pool, const std::vector<double>& weights, double intercept,
                       double ridge_lambda);

/// Pearson correlation between the high-pass parts of two single-band
/// images; near-zero variance scores 0 (same rule as SCC).
double hf_correlation(const RasterStack& pan, const RasterStack& m_up_band);

/// Per-band high-frequency correlation shift between two sample sets.
struct HfShiftReport {
    int bands = 0;
    std::vector<std::vector<double>> rho_rr; ///< [band][sample]
    std::vector<std::vector<double>> rho_fr;
    std::vector<double> delta_rho;           ///< mean(FR) - mean(RR) per band
    std::vector<std::vector<double>> cdf_rr; ///< [band][101] quantile grid
    std::vector<std::vector<double>> cdf_fr;

    /// Plot-data CSV: band,protocol,p,quantile rows for every CDF point.
    std::string to_csv() const;
};

HfShiftReport hf_shift_report(const std::vector<data::FusionSample>& rr_samples,
                              const std::vector<data::FusionSample>& fr_samples);

/// Streaming estimator of the latent scale kappa = 1/sqrt(E[|u|^2/d] + eps).
class KappaCalibrator {
public:
    void add(std::span<const float> u);
    void add(std::span<const double> u);
    double kappa() const;
    long count() const { return n_; }

private:
    Kahan energy_;
    long n_ = 0;
    std::size_t dim_ = 0;
};

double calibrate_kappa(const std::vector<std::vector<double>>& latents);

} // namespace pansharp::analysis

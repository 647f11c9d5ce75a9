#include "pansharp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pansharp/imageops.hpp"
#include "pansharp/rng.hpp"

namespace pansharp::analysis {

namespace {

constexpr double kEps = 1e-12;

/// Dense solve by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        if (std::abs(a[pivot * n + col]) < 1e-14)
            throw NumericError(
                "fit_pan_mixing: rank-deficient normal equations; use ridge_lambda > 0");
        if (pivot != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (int row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int row = n - 1; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < n; ++k) acc -= a[row * n + k] * x[k];
        x[row] = acc / a[row * n + row];
    }
    return x;
}

std::vector<double> empirical_cdf_grid(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<double> grid(101);
    const double n = static_cast<double>(values.size());
    for (int i = 0; i <= 100; ++i) {
        // Linear-interpolation quantile at p = i/100.
        const double pos = (i / 100.0) * (n - 1.0);
        const auto lo = static_cast<std::size_t>(pos);
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        grid[i] = values[lo] * (1.0 - frac) + values[hi] * frac;
    }
    return grid;
}

} // namespace

PixelPool pool_pixels(const std::vector<data::FusionSample>& samples, long n_subsample,
                      std::uint64_t seed) {
    if (samples.empty()) throw ArgumentError("pool_pixels: no samples");
    const int B = samples.front().sensor.band_count();
    for (const auto& s : samples)
        if (s.sensor.name != samples.front().sensor.name)
            throw ArgumentError("pool_pixels: all samples must share one sensor");
    if (n_subsample < B + 1)
        throw ArgumentError("pool_pixels: need at least bands + 1 pixels");

    Rng rng(seed);
    PixelPool pool;
    pool.bands = B;
    pool.features.reserve(n_subsample * B);
    pool.target.reserve(n_subsample);
    for (long i = 0; i < n_subsample; ++i) {
        const auto& s = samples[rng.below(samples.size())];
        // Draw from the valid region shared by LMS and PAN.
        const int border = std::max(s.lms.border(), s.pan.border());
        const int y = border + static_cast<int>(rng.below(s.lms.height() - 2 * border));
        const int x = border + static_cast<int>(rng.below(s.lms.width() - 2 * border));
        for (int b = 0; b < B; ++b) pool.features.push_back(s.lms.at(b, y, x));
        pool.target.push_back(s.pan.at(0, y, x));
    }
    return pool;
}

MixingFit fit_pan_mixing(const PixelPool& pool, double ridge_lambda) {
    const int B = pool.bands;
    const long n = pool.count();
    if (n < B + 1) throw ArgumentError("fit_pan_mixing: need at least bands + 1 pixels");

    // Standardize regressors; constant columns get unit scale (coefficient 0).
    std::vector<double> mean(B, 0.0), stddev(B, 0.0);
    for (long i = 0; i < n; ++i)
        for (int b = 0; b < B; ++b) mean[b] += pool.feature(i, b);
    for (int b = 0; b < B; ++b) mean[b] /= static_cast<double>(n);
    for (long i = 0; i < n; ++i)
        for (int b = 0; b < B; ++b) {
            const double d = pool.feature(i, b) - mean[b];
            stddev[b] += d * d;
        }
    for (int b = 0; b < B; ++b) {
        stddev[b] = std::sqrt(stddev[b] / static_cast<double>(n));
        if (stddev[b] < kEps) stddev[b] = 1.0;
    }
    double target_mean = 0.0;
    for (long i = 0; i < n; ++i) target_mean += pool.target[i];
    target_mean /= static_cast<double>(n);

    // Normal equations on standardized, centered regressors:
    // (Xs^T Xs / n + lambda I) beta = Xs^T (P - mean(P)) / n.
    std::vector<double> gram(B * B, 0.0), rhs(B, 0.0);
    for (long i = 0; i < n; ++i) {
        for (int a = 0; a < B; ++a) {
            const double xa = (pool.feature(i, a) - mean[a]) / stddev[a];
            rhs[a] += xa * (pool.target[i] - target_mean);
            for (int b = a; b < B; ++b)
                gram[a * B + b] += xa * (pool.feature(i, b) - mean[b]) / stddev[b];
        }
    }
    for (int a = 0; a < B; ++a) {
        rhs[a] /= static_cast<double>(n);
        for (int b = a; b < B; ++b) {
            gram[a * B + b] /= static_cast<double>(n);
            gram[b * B + a] = gram[a * B + b];
        }
        gram[a * B + a] += ridge_lambda;
    }
    const std::vector<double> beta = solve_dense(gram, rhs, B);

    MixingFit fit;
    fit.ridge_lambda = ridge_lambda;
    fit.n_pixels = n;
    fit.feature_mean = mean;
    fit.feature_std = stddev;
    fit.weights.resize(B);
    double back_shift = 0.0, abs_sum = 0.0;
    for (int b = 0; b < B; ++b) {
        fit.weights[b] = beta[b] / stddev[b];
        back_shift += beta[b] * mean[b] / stddev[b];
        abs_sum += std::abs(fit.weights[b]);
    }
    fit.intercept = target_mean - back_shift;
    fit.normalized_weights.resize(B);
    for (int b = 0; b < B; ++b)
        fit.normalized_weights[b] = abs_sum > 0.0 ? fit.weights[b] / abs_sum : 0.0;
    return fit;
}

MixingFit fit_pan_mixing(const std::vector<data::FusionSample>& samples, double ridge_lambda,
                         long n_subsample, std::uint64_t seed) {
    return fit_pan_mixing(pool_pixels(samples, n_subsample, seed), ridge_lambda);
}

double ridge_objective(const PixelPool& pool, const std::vector<double>& weights, double intercept,
                       double ridge_lambda) {
    const int B = pool.bands;
    if (static_cast<int>(weights.size()) != B)
        throw DimensionError("ridge_objective: weight count mismatch");
    // Standardization constants are part of the objective definition.
    std::vector<double> mean(B, 0.0), stddev(B, 0.0);
    const long n = pool.count();
    for (long i = 0; i < n; ++i)
        for (int b = 0; b < B; ++b) mean[b] += pool.feature(i, b);
    for (int b = 0; b < B; ++b) mean[b] /= static_cast<double>(n);
    for (long i = 0; i < n; ++i)
        for (int b = 0; b < B; ++b) {
            const double d = pool.feature(i, b) - mean[b];
            stddev[b] += d * d;
        }
    for (int b = 0; b < B; ++b) {
        stddev[b] = std::sqrt(stddev[b] / static_cast<double>(n));
        if (stddev[b] < kEps) stddev[b] = 1.0;
    }
    Kahan loss;
    for (long i = 0; i < n; ++i) {
        double pred = intercept;
        for (int b = 0; b < B; ++b) pred += weights[b] * pool.feature(i, b);
        const double r = pool.target[i] - pred;
        loss.add(r * r);
    }
    double penalty = 0.0;
    for (int b = 0; b < B; ++b) {
        const double ws = weights[b] * stddev[b];
        penalty += ws * ws;
    }
    return loss.value() / static_cast<double>(n) + ridge_lambda * penalty;
}

double hf_correlation(const RasterStack& pan, const RasterStack& m_up_band) {
    if (pan.bands() != 1 || m_up_band.bands() != 1)
        throw DimensionError("hf_correlation: expects single-band images");
    if (!pan.same_shape(m_up_band)) throw DimensionError("hf_correlation: shape mismatch");
    const auto [pl, ph] = img::freq_split(pan);
    const auto [ml, mh] = img::freq_split(m_up_band);
    const int border = std::max(ph.border(), mh.border());
    double sx = 0, sy = 0;
    long n = 0;
    for (int y = border; y < ph.height() - border; ++y)
        for (int x = border; x < ph.width() - border; ++x) {
            sx += ph.at(0, y, x);
            sy += mh.at(0, y, x);
            ++n;
        }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double vx = 0, vy = 0, vxy = 0;
    for (int y = border; y < ph.height() - border; ++y)
        for (int x = border; x < ph.width() - border; ++x) {
            const double ax = ph.at(0, y, x) - mx;
            const double ay = mh.at(0, y, x) - my;
            vx += ax * ax;
            vy += ay * ay;
            vxy += ax * ay;
        }
    if (vx <= kEps || vy <= kEps) return 0.0;
    return vxy / (std::sqrt(vx) * std::sqrt(vy));
}

HfShiftReport hf_shift_report(const std::vector<data::FusionSample>& rr_samples,
                              const std::vector<data::FusionSample>& fr_samples) {
    if (rr_samples.empty() || fr_samples.empty())
        throw ArgumentError("hf_shift_report: empty sample set");
    const int B = rr_samples.front().sensor.band_count();
    if (fr_samples.front().sensor.band_count() != B)
        throw DimensionError("hf_shift_report: band counts differ between sets");

    HfShiftReport rep;
    rep.bands = B;
    rep.rho_rr.assign(B, {});
    rep.rho_fr.assign(B, {});
    auto fill = [&](const std::vector<data::FusionSample>& set,
                    std::vector<std::vector<double>>& out) {
        for (const auto& s : set)
            for (int b = 0; b < B; ++b)
                out[b].push_back(hf_correlation(s.pan, s.lms.extract_band(b)));
    };
    fill(rr_samples, rep.rho_rr);
    fill(fr_samples, rep.rho_fr);

    rep.delta_rho.resize(B);
    rep.cdf_rr.resize(B);
    rep.cdf_fr.resize(B);
    for (int b = 0; b < B; ++b) {
        Kahan mr, mf;
        for (double v : rep.rho_rr[b]) mr.add(v);
        for (double v : rep.rho_fr[b]) mf.add(v);
        rep.delta_rho[b] = mf.value() / static_cast<double>(rep.rho_fr[b].size()) -
                           mr.value() / static_cast<double>(rep.rho_rr[b].size());
        rep.cdf_rr[b] = empirical_cdf_grid(rep.rho_rr[b]);
        rep.cdf_fr[b] = empirical_cdf_grid(rep.rho_fr[b]);
    }
    return rep;
}

std::string HfShiftReport::to_csv() const {
    std::string out = "band,protocol,p,rho_quantile\n";
    char buf[96];
    for (int b = 0; b < bands; ++b) {
        for (int i = 0; i <= 100; ++i) {
            std::snprintf(buf, sizeof(buf), "%d,RR,%.2f,%.10f\n", b + 1, i / 100.0, cdf_rr[b][i]);
            out += buf;
            std::snprintf(buf, sizeof(buf), "%d,FR,%.2f,%.10f\n", b + 1, i / 100.0, cdf_fr[b][i]);
            out += buf;
        }
    }
    return out;
}

void KappaCalibrator::add(std::span<const float> u) {
    if (u.empty()) throw ArgumentError("KappaCalibrator: zero-dimensional latent");
    if (dim_ == 0) dim_ = u.size();
    if (u.size() != dim_) throw DimensionError("KappaCalibrator: inconsistent latent dimension");
    double e = 0.0;
    for (float v : u) e += static_cast<double>(v) * static_cast<double>(v);
    energy_.add(e / static_cast<double>(dim_));
    ++n_;
}

void KappaCalibrator::add(std::span<const double> u) {
    if (u.empty()) throw ArgumentError("KappaCalibrator: zero-dimensional latent");
    if (dim_ == 0) dim_ = u.size();
    if (u.size() != dim_) throw DimensionError("KappaCalibrator: inconsistent latent dimension");
    double e = 0.0;
    for (double v : u) e += v * v;
    energy_.add(e / static_cast<double>(dim_));
    ++n_;
}

double KappaCalibrator::kappa() const {
    if (n_ == 0) throw ArgumentError("KappaCalibrator: no latents accumulated");
    const double mean_energy = energy_.value() / static_cast<double>(n_);
    return 1.0 / std::sqrt(mean_energy + kEps);
}

double calibrate_kappa(const std::vector<std::vector<double>>& latents) {
    KappaCalibrator cal;
    for (const auto& u : latents) cal.add(std::span<const double>(u));
    return cal.kappa();
}

} // namespace pansharp::analysis

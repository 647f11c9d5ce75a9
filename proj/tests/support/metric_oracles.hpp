#pragma once

// Naive direct-formula implementations used as independent oracles for the
// metric suite. These deliberately avoid the library's integral-image and
// Cayley-Dickson code paths: moments are two-pass and centered, hypercomplex
// products are hand-written component formulas.

#include <array>
#include <cmath>
#include <vector>

#include "pansharp/metrics.hpp"
#include "pansharp/raster.hpp"

namespace oracle {

using pansharp::RasterStack;
using pansharp::metrics::WindowConfig;

inline double uiqi_window(const RasterStack& x, const RasterStack& y, const WindowConfig& win,
                          int y0, int x0) {
    const double n = static_cast<double>(win.w) * win.w;
    double mx = 0, my = 0;
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx) {
            mx += x.at(0, y0 + dy, x0 + dx);
            my += y.at(0, y0 + dy, x0 + dx);
        }
    mx /= n;
    my /= n;
    double vx = 0, vy = 0, vxy = 0;
    bool identical = true;
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx) {
            const double ax = x.at(0, y0 + dy, x0 + dx) - mx;
            const double ay = y.at(0, y0 + dy, x0 + dx) - my;
            vx += ax * ax;
            vy += ay * ay;
            vxy += ax * ay;
            identical = identical && x.at(0, y0 + dy, x0 + dx) == y.at(0, y0 + dy, x0 + dx);
        }
    vx /= n;
    vy /= n;
    vxy /= n;
    if (mx * mx + my * my <= win.eps && vx + vy <= win.eps && identical) return 1.0;
    return (2.0 * mx * my / (mx * mx + my * my + win.eps)) * (2.0 * vxy / (vx + vy + win.eps));
}

inline double uiqi_mean(const RasterStack& x, const RasterStack& y, const WindowConfig& win,
                        int border) {
    double acc = 0;
    long count = 0;
    for (int y0 = border; y0 + win.w <= x.height() - border; y0 += win.s)
        for (int x0 = border; x0 + win.w <= x.width() - border; x0 += win.s) {
            acc += uiqi_window(x, y, win, y0, x0);
            ++count;
        }
    return acc / static_cast<double>(count);
}

inline double uiqi_mean(const RasterStack& x, const RasterStack& y, const WindowConfig& win) {
    return uiqi_mean(x, y, win, std::max(x.border(), y.border()));
}

inline double sam_degrees(const RasterStack& f, const RasterStack& r) {
    const int border = std::max(f.border(), r.border());
    double acc = 0;
    long count = 0;
    for (int y = border; y < f.height() - border; ++y)
        for (int x = border; x < f.width() - border; ++x) {
            double ff = 0, rr = 0, fr = 0;
            bool same = true;
            for (int b = 0; b < f.bands(); ++b) {
                ff += f.at(b, y, x) * f.at(b, y, x);
                rr += r.at(b, y, x) * r.at(b, y, x);
                fr += f.at(b, y, x) * r.at(b, y, x);
                same = same && f.at(b, y, x) == r.at(b, y, x);
            }
            if (std::sqrt(ff) <= 1e-12 || std::sqrt(rr) <= 1e-12) continue;
            double c = fr / (std::sqrt(ff) * std::sqrt(rr));
            c = std::min(1.0, std::max(-1.0, c));
            acc += same ? 0.0 : std::acos(c);
            ++count;
        }
    return acc / static_cast<double>(count) * 180.0 / M_PI;
}

inline double ergas(const RasterStack& f, const RasterStack& r, int ratio) {
    const int border = std::max(f.border(), r.border());
    double acc = 0;
    for (int b = 0; b < f.bands(); ++b) {
        double se = 0, mu = 0;
        long n = 0;
        for (int y = border; y < f.height() - border; ++y)
            for (int x = border; x < f.width() - border; ++x) {
                const double d = f.at(b, y, x) - r.at(b, y, x);
                se += d * d;
                mu += r.at(b, y, x);
                ++n;
            }
        const double rmse = std::sqrt(se / n);
        const double rel = rmse / (mu / n + 1e-12);
        acc += rel * rel;
    }
    return 100.0 * ratio * std::sqrt(acc / f.bands());
}

/// Sobel magnitude by direct double-loop convolution, replicate borders.
inline RasterStack sobel_oracle(const RasterStack& im) {
    const int H = im.height(), W = im.width();
    const int KX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    const int KY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    RasterStack out(1, H, W);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double gx = 0, gy = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sy = std::min(H - 1, std::max(0, y + dy));
                    const int sx = std::min(W - 1, std::max(0, x + dx));
                    gx += KX[dy + 1][dx + 1] * im.at(0, sy, sx);
                    gy += KY[dy + 1][dx + 1] * im.at(0, sy, sx);
                }
            out.at(0, y, x) = std::sqrt(gx * gx + gy * gy);
        }
    out.set_border(im.border());
    return out;
}

inline double scc(const RasterStack& f, const RasterStack& pan) {
    const RasterStack gp = sobel_oracle(pan);
    double acc = 0;
    for (int b = 0; b < f.bands(); ++b) {
        const RasterStack gb = sobel_oracle(f.extract_band(b));
        const int border = std::max(gp.border(), gb.border()) + 1;
        double mx = 0, my = 0;
        long n = 0;
        for (int y = border; y < gp.height() - border; ++y)
            for (int x = border; x < gp.width() - border; ++x) {
                mx += gp.at(0, y, x);
                my += gb.at(0, y, x);
                ++n;
            }
        mx /= n;
        my /= n;
        double vx = 0, vy = 0, vxy = 0;
        for (int y = border; y < gp.height() - border; ++y)
            for (int x = border; x < gp.width() - border; ++x) {
                vx += (gp.at(0, y, x) - mx) * (gp.at(0, y, x) - mx);
                vy += (gb.at(0, y, x) - my) * (gb.at(0, y, x) - my);
                vxy += (gp.at(0, y, x) - mx) * (gb.at(0, y, x) - my);
            }
        acc += (vx <= 1e-12 || vy <= 1e-12)
                   ? 0.0
                   : vxy / (std::sqrt(vx + 1e-12) * std::sqrt(vy + 1e-12));
    }
    return acc / f.bands();
}

inline double d_lambda(const RasterStack& f, const RasterStack& m, const WindowConfig& win) {
    const int B = f.bands();
    const int border = std::max(f.border(), m.border());
    double acc = 0;
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j) {
            if (i == j) continue;
            const double qf = uiqi_mean(f.extract_band(i), f.extract_band(j), win, border);
            const double qm = uiqi_mean(m.extract_band(i), m.extract_band(j), win, border);
            acc += std::abs(qf - qm);
        }
    return acc / (static_cast<double>(B) * (B - 1));
}

/// d_s formula oracle; the degraded-PAN proxy pair is taken as an input so
/// that the aggregation, not the (separately verified) proxy pipeline, is
/// what gets cross-checked.
inline double d_s(const RasterStack& f, const RasterStack& m, const RasterStack& pan,
                  const RasterStack& pan_proxy, const WindowConfig& win) {
    const int B = f.bands();
    int border = std::max(std::max(f.border(), m.border()), std::max(pan.border(), pan_proxy.border()));
    double acc = 0;
    for (int i = 0; i < B; ++i) {
        const double qf = uiqi_mean(f.extract_band(i), pan, win, border);
        const double qm = uiqi_mean(m.extract_band(i), pan_proxy, win, border);
        acc += std::abs(qf - qm);
    }
    return acc / B;
}

// --- Hand-written hypercomplex arithmetic -------------------------------

using Q = std::array<double, 4>;
using O = std::array<double, 8>;

/// Hamilton quaternion product, explicit component formulas.
inline Q quat_mul(const Q& a, const Q& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

inline Q quat_conj(const Q& a) { return {a[0], -a[1], -a[2], -a[3]}; }

/// Octonion product via one explicit doubling of quaternion pairs:
/// (a,b)(c,d) = (ac - conj(d)b, da + b conj(c)).
inline O oct_mul(const O& x, const O& y) {
    const Q a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
    const Q c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
    const Q lo_a = quat_mul(a, c);
    const Q lo_b = quat_mul(quat_conj(d), b);
    const Q hi_a = quat_mul(d, a);
    const Q hi_b = quat_mul(b, quat_conj(c));
    return {lo_a[0] - lo_b[0], lo_a[1] - lo_b[1], lo_a[2] - lo_b[2], lo_a[3] - lo_b[3],
            hi_a[0] + hi_b[0], hi_a[1] + hi_b[1], hi_a[2] + hi_b[2], hi_a[3] + hi_b[3]};
}

inline O hyper_mul(const O& a, const O& b, int dim) {
    if (dim == 1) return {a[0] * b[0], 0, 0, 0, 0, 0, 0, 0};
    if (dim == 2) {
        // Complex product.
        return {a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0], 0, 0, 0, 0, 0, 0};
    }
    if (dim == 4) {
        const Q q = quat_mul({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
        return {q[0], q[1], q[2], q[3], 0, 0, 0, 0};
    }
    return oct_mul(a, b);
}

inline O hyper_conj(const O& a, int dim) {
    O out{};
    out[0] = a[0];
    for (int i = 1; i < dim; ++i) out[i] = -a[i];
    return out;
}

/// Per-window hypercomplex UIQI with centered two-pass statistics.
inline double q2n_window(const RasterStack& f, const RasterStack& r, const WindowConfig& win,
                         int y0, int x0) {
    const int B = f.bands();
    const double n = static_cast<double>(win.w) * win.w;
    O mu1{}, mu2{};
    bool identical = true;
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx)
            for (int b = 0; b < B; ++b) {
                mu1[b] += f.at(b, y0 + dy, x0 + dx);
                mu2[b] += r.at(b, y0 + dy, x0 + dx);
                identical =
                    identical && f.at(b, y0 + dy, x0 + dx) == r.at(b, y0 + dy, x0 + dx);
            }
    for (int b = 0; b < B; ++b) {
        mu1[b] /= n;
        mu2[b] /= n;
    }
    double var1 = 0, var2 = 0;
    O cov{};
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx) {
            O z1{}, z2{};
            for (int b = 0; b < B; ++b) {
                z1[b] = f.at(b, y0 + dy, x0 + dx) - mu1[b];
                z2[b] = r.at(b, y0 + dy, x0 + dx) - mu2[b];
                var1 += z1[b] * z1[b];
                var2 += z2[b] * z2[b];
            }
            const O p = hyper_mul(z1, hyper_conj(z2, B), B);
            for (int b = 0; b < B; ++b) cov[b] += p[b];
        }
    var1 /= n;
    var2 /= n;
    double mod_mu1 = 0, mod_mu2 = 0, mod_cov = 0;
    for (int b = 0; b < B; ++b) {
        mod_mu1 += mu1[b] * mu1[b];
        mod_mu2 += mu2[b] * mu2[b];
        mod_cov += (cov[b] / n) * (cov[b] / n);
    }
    mod_cov = std::sqrt(mod_cov);
    if (mod_mu1 + mod_mu2 <= win.eps && var1 + var2 <= win.eps && identical) return 1.0;
    return (2.0 * std::sqrt(mod_mu1) * std::sqrt(mod_mu2) / (mod_mu1 + mod_mu2 + win.eps)) *
           (2.0 * mod_cov / (var1 + var2 + win.eps));
}

inline double q2n(const RasterStack& f, const RasterStack& r, const WindowConfig& win) {
    const int border = std::max(f.border(), r.border());
    double acc = 0;
    long count = 0;
    for (int y0 = border; y0 + win.w <= f.height() - border; y0 += win.s)
        for (int x0 = border; x0 + win.w <= f.width() - border; x0 += win.s) {
            acc += q2n_window(f, r, win, y0, x0);
            ++count;
        }
    return acc / static_cast<double>(count);
}

} // namespace oracle

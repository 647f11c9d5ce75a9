#include "pansharp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "pansharp/hypercomplex.hpp"
#include "pansharp/numeric.hpp"
#include "pansharp/imageops.hpp"

namespace pansharp::hc {

const BasisTable& basis_conj_table(int dim) {
    static std::map<int, BasisTable> tables;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    auto it = tables.find(dim);
    if (it != tables.end()) return it->second;

    BasisTable t{};
    double ei[8], ej[8], cj[8], prod[8];
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            std::fill(ei, ei + 8, 0.0);
            std::fill(ej, ej + 8, 0.0);
            ei[i] = 1.0;
            ej[j] = 1.0;
            cd_conj(ej, cj, dim);
            cd_mul(ei, cj, prod, dim);
            int idx = -1;
            for (int k = 0; k < dim; ++k)
                if (prod[k] != 0.0) idx = k;
            t.index[i][j] = idx;
            t.sign[i][j] = prod[idx];
        }
    }
    return tables.emplace(dim, t).first->second;
}

} // namespace pansharp::hc

namespace pansharp::metrics {

namespace {

constexpr double kEps = 1e-12;

/// Summed-area table; window_sum is O(1) per query.
class Integral {
public:
    template <typename F>
    Integral(int h, int w, F&& value) : w1_(w + 1), s_((h + 1) * (w + 1), 0.0) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                s_[(y + 1) * w1_ + (x + 1)] =
                    value(y, x) + s_[y * w1_ + (x + 1)] + s_[(y + 1) * w1_ + x] - s_[y * w1_ + x];
    }

    double window_sum(int y0, int x0, int w) const {
        return s_[(y0 + w) * w1_ + (x0 + w)] - s_[y0 * w1_ + (x0 + w)] -
               s_[(y0 + w) * w1_ + x0] + s_[y0 * w1_ + x0];
    }

private:
    int w1_;
    std::vector<double> s_;
};

int common_border(std::initializer_list<const RasterStack*> rs) {
    int b = 0;
    for (const auto* r : rs) b = std::max(b, r->border());
    return b;
}

void require_same_shape(const RasterStack& a, const RasterStack& b, const char* who) {
    if (!a.same_shape(b)) throw DimensionError(std::string(who) + ": shape mismatch");
}

bool window_identical(const RasterStack& x, const RasterStack& y, int y0, int x0, int w) {
    for (int dy = 0; dy < w; ++dy)
        for (int dx = 0; dx < w; ++dx)
            if (x.at(0, y0 + dy, x0 + dx) != y.at(0, y0 + dy, x0 + dx)) return false;
    return true;
}

double uiqi_from_moments(double mx, double my, double sxx, double syy, double sxy, double eps) {
    const double lum_den = mx * mx + my * my;
    const double con_den = sxx + syy;
    return (2.0 * mx * my / (lum_den + eps)) * (2.0 * sxy / (con_den + eps));
}

/// uiqi_mean with an explicit shared border so distortion indices can keep
/// one window grid across all their Q evaluations.
double uiqi_mean_with_border(const RasterStack& x, const RasterStack& y, const WindowConfig& win,
                             int border) {
    const int h = x.height(), w = x.width();
    const int last = h - border - win.w;
    if (last < border || w - border - win.w < border)
        throw ArgumentError("uiqi_mean: image smaller than the window inside the valid region");

    Integral sx(h, w, [&](int yy, int xx) { return x.at(0, yy, xx); });
    Integral sy(h, w, [&](int yy, int xx) { return y.at(0, yy, xx); });
    Integral sxx(h, w, [&](int yy, int xx) { return x.at(0, yy, xx) * x.at(0, yy, xx); });
    Integral syy(h, w, [&](int yy, int xx) { return y.at(0, yy, xx) * y.at(0, yy, xx); });
    Integral sxy(h, w, [&](int yy, int xx) { return x.at(0, yy, xx) * y.at(0, yy, xx); });

    const double n = static_cast<double>(win.w) * win.w;
    Kahan acc;
    long count = 0;
    for (int y0 = border; y0 <= last; y0 += win.s)
        for (int x0 = border; x0 + win.w <= w - border; x0 += win.s) {
            const double mx = sx.window_sum(y0, x0, win.w) / n;
            const double my = sy.window_sum(y0, x0, win.w) / n;
            const double vxx = std::max(0.0, sxx.window_sum(y0, x0, win.w) / n - mx * mx);
            const double vyy = std::max(0.0, syy.window_sum(y0, x0, win.w) / n - my * my);
            const double vxy = sxy.window_sum(y0, x0, win.w) / n - mx * my;
            double q;
            if (mx * mx + my * my <= win.eps && vxx + vyy <= win.eps &&
                window_identical(x, y, y0, x0, win.w)) {
                q = 1.0;
            } else {
                q = uiqi_from_moments(mx, my, vxx, vyy, vxy, win.eps);
            }
            acc.add(q);
            ++count;
        }
    return acc.value() / static_cast<double>(count);
}

} // namespace

double uiqi_local(const RasterStack& x, const RasterStack& y, const WindowConfig& win,
                  int origin_y, int origin_x) {
    require_same_shape(x, y, "uiqi_local");
    if (x.bands() != 1) throw DimensionError("uiqi_local: expects single-band inputs");
    const int b = common_border({&x, &y});
    if (origin_y < b || origin_x < b || origin_y + win.w > x.height() - b ||
        origin_x + win.w > x.width() - b)
        throw RangeError("uiqi_local: window outside the valid region");

    const double n = static_cast<double>(win.w) * win.w;
    double sx = 0, sy = 0;
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx) {
            sx += x.at(0, origin_y + dy, origin_x + dx);
            sy += y.at(0, origin_y + dy, origin_x + dx);
        }
    const double mx = sx / n, my = sy / n;
    double vxx = 0, vyy = 0, vxy = 0;
    for (int dy = 0; dy < win.w; ++dy)
        for (int dx = 0; dx < win.w; ++dx) {
            const double ax = x.at(0, origin_y + dy, origin_x + dx) - mx;
            const double ay = y.at(0, origin_y + dy, origin_x + dx) - my;
            vxx += ax * ax;
            vyy += ay * ay;
            vxy += ax * ay;
        }
    vxx /= n;
    vyy /= n;
    vxy /= n;
    if (mx * mx + my * my <= win.eps && vxx + vyy <= win.eps &&
        window_identical(x, y, origin_y, origin_x, win.w))
        return 1.0;
    return uiqi_from_moments(mx, my, vxx, vyy, vxy, win.eps);
}

double uiqi_mean(const RasterStack& x, const RasterStack& y, const WindowConfig& win) {
    require_same_shape(x, y, "uiqi_mean");
    if (x.bands() != 1) throw DimensionError("uiqi_mean: expects single-band inputs");
    return uiqi_mean_with_border(x, y, win, common_border({&x, &y}));
}

double q2n(const RasterStack& f, const RasterStack& r, const WindowConfig& win) {
    require_same_shape(f, r, "q2n");
    const int B = f.bands();
    if (B != 1 && B != 2 && B != 4 && B != 8)
        throw ArgumentError("q2n: band count must be a power of two <= 8");

    const int h = f.height(), w = f.width();
    const int border = common_border({&f, &r});
    if (h - 2 * border < win.w || w - 2 * border < win.w)
        throw ArgumentError("q2n: image smaller than the window inside the valid region");

    const auto& table = hc::basis_conj_table(B);

    std::vector<Integral> sf, sr, cross;
    sf.reserve(B);
    sr.reserve(B);
    cross.reserve(B * B);
    for (int b = 0; b < B; ++b)
        sf.emplace_back(h, w, [&, b](int y, int x) { return f.at(b, y, x); });
    for (int b = 0; b < B; ++b)
        sr.emplace_back(h, w, [&, b](int y, int x) { return r.at(b, y, x); });
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j)
            cross.emplace_back(h, w, [&, i, j](int y, int x) { return f.at(i, y, x) * r.at(j, y, x); });
    Integral ef(h, w, [&](int y, int x) {
        double s = 0;
        for (int b = 0; b < B; ++b) s += f.at(b, y, x) * f.at(b, y, x);
        return s;
    });
    Integral er(h, w, [&](int y, int x) {
        double s = 0;
        for (int b = 0; b < B; ++b) s += r.at(b, y, x) * r.at(b, y, x);
        return s;
    });

    const double n = static_cast<double>(win.w) * win.w;
    Kahan acc;
    long count = 0;
    double mu1[8], mu2[8], cov[8];
    for (int y0 = border; y0 + win.w <= h - border; y0 += win.s)
        for (int x0 = border; x0 + win.w <= w - border; x0 += win.s) {
            double mod_mu1 = 0, mod_mu2 = 0;
            for (int b = 0; b < B; ++b) {
                mu1[b] = sf[b].window_sum(y0, x0, win.w) / n;
                mu2[b] = sr[b].window_sum(y0, x0, win.w) / n;
                mod_mu1 += mu1[b] * mu1[b];
                mod_mu2 += mu2[b] * mu2[b];
            }
            const double var1 = std::max(0.0, ef.window_sum(y0, x0, win.w) / n - mod_mu1);
            const double var2 = std::max(0.0, er.window_sum(y0, x0, win.w) / n - mod_mu2);

            // sigma_12 = E[z1 conj(z2)] - mu1 conj(mu2), assembled from the
            // bilinear basis structure of the Cayley-Dickson product.
            std::fill(cov, cov + B, 0.0);
            for (int i = 0; i < B; ++i)
                for (int j = 0; j < B; ++j) {
                    const double m = cross[i * B + j].window_sum(y0, x0, win.w) / n;
                    cov[table.index[i][j]] += table.sign[i][j] * (m - mu1[i] * mu2[j]);
                }
            double mod_cov = 0;
            for (int b = 0; b < B; ++b) mod_cov += cov[b] * cov[b];
            mod_cov = std::sqrt(mod_cov);

            const double lum_den = mod_mu1 + mod_mu2;
            const double con_den = var1 + var2;
            double q;
            // Degenerate all-zero windows score 1 iff contents match.
            bool degenerate_equal = false;
            if (lum_den <= win.eps && con_den <= win.eps) {
                degenerate_equal = true;
                for (int b = 0; b < B && degenerate_equal; ++b)
                    for (int dy = 0; dy < win.w && degenerate_equal; ++dy)
                        for (int dx = 0; dx < win.w; ++dx)
                            if (f.at(b, y0 + dy, x0 + dx) != r.at(b, y0 + dy, x0 + dx)) {
                                degenerate_equal = false;
                                break;
                            }
            }
            if (degenerate_equal) {
                q = 1.0;
            } else {
                q = (2.0 * std::sqrt(mod_mu1) * std::sqrt(mod_mu2) / (lum_den + win.eps)) *
                    (2.0 * mod_cov / (con_den + win.eps));
            }
            acc.add(q);
            ++count;
        }
    return acc.value() / static_cast<double>(count);
}

double sam(const RasterStack& f, const RasterStack& r) {
    require_same_shape(f, r, "sam");
    const int B = f.bands();
    if (B < 2) throw DimensionError("sam: needs at least 2 bands");
    const int border = common_border({&f, &r});
    Kahan acc;
    long count = 0;
    for (int y = border; y < f.height() - border; ++y)
        for (int x = border; x < f.width() - border; ++x) {
            double ff = 0, rr = 0, fr = 0;
            bool identical = true;
            for (int b = 0; b < B; ++b) {
                const double fv = f.at(b, y, x), rv = r.at(b, y, x);
                ff += fv * fv;
                rr += rv * rv;
                fr += fv * rv;
                identical = identical && fv == rv;
            }
            const double nf = std::sqrt(ff), nr = std::sqrt(rr);
            if (nf <= kEps || nr <= kEps) continue;
            // Identical spectra are an exact zero; arccos of the rounded
            // cosine would otherwise leave ~1e-8 rad of noise.
            if (!identical) {
                const double c = std::clamp(fr / (nf * nr), -1.0, 1.0);
                acc.add(std::acos(c));
            }
            ++count;
        }
    if (count == 0) throw NumericError("sam: no valid pixels (all spectral norms near zero)");
    return acc.value() / static_cast<double>(count) * (180.0 / M_PI);
}

double ergas(const RasterStack& f, const RasterStack& r, int ratio) {
    require_same_shape(f, r, "ergas");
    if (ratio < 2) throw ArgumentError("ergas: ratio must be >= 2");
    const int border = common_border({&f, &r});
    const int B = f.bands();
    double acc = 0.0;
    for (int b = 0; b < B; ++b) {
        Kahan se, sm;
        long n = 0;
        for (int y = border; y < f.height() - border; ++y)
            for (int x = border; x < f.width() - border; ++x) {
                const double d = f.at(b, y, x) - r.at(b, y, x);
                se.add(d * d);
                sm.add(r.at(b, y, x));
                ++n;
            }
        const double rmse = std::sqrt(se.value() / static_cast<double>(n));
        const double mu = sm.value() / static_cast<double>(n);
        const double rel = rmse / (mu + kEps);
        acc += rel * rel;
    }
    return 100.0 * ratio * std::sqrt(acc / B);
}

double scc(const RasterStack& f, const RasterStack& pan) {
    if (pan.bands() != 1) throw DimensionError("scc: PAN must be single-band");
    if (f.height() != pan.height() || f.width() != pan.width())
        throw DimensionError("scc: fused image and PAN must share the PAN scale");
    const RasterStack gp = img::sobel_gradient(pan);
    double acc = 0.0;
    for (int b = 0; b < f.bands(); ++b) {
        const RasterStack gb = img::sobel_gradient(f.extract_band(b));
        const int border = common_border({&gp, &gb});
        double sx = 0, sy = 0;
        long n = 0;
        for (int y = border; y < gp.height() - border; ++y)
            for (int x = border; x < gp.width() - border; ++x) {
                sx += gp.at(0, y, x);
                sy += gb.at(0, y, x);
                ++n;
            }
        const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
        double vxx = 0, vyy = 0, vxy = 0;
        for (int y = border; y < gp.height() - border; ++y)
            for (int x = border; x < gp.width() - border; ++x) {
                const double ax = gp.at(0, y, x) - mx;
                const double ay = gb.at(0, y, x) - my;
                vxx += ax * ax;
                vyy += ay * ay;
                vxy += ax * ay;
            }
        // Near-zero gradient variance on either side scores 0.
        const double rho = (vxx <= kEps || vyy <= kEps)
                               ? 0.0
                               : vxy / (std::sqrt(vxx + kEps) * std::sqrt(vyy + kEps));
        acc += rho;
    }
    return acc / f.bands();
}

double d_lambda(const RasterStack& f, const RasterStack& m_up, const WindowConfig& win) {
    require_same_shape(f, m_up, "d_lambda");
    const int B = f.bands();
    if (B < 2) throw ArgumentError("d_lambda: needs at least 2 bands");
    const int border = common_border({&f, &m_up});
    double acc = 0.0;
    for (int i = 0; i < B; ++i)
        for (int j = i + 1; j < B; ++j) {
            const double qf = uiqi_mean_with_border(f.extract_band(i), f.extract_band(j), win, border);
            const double qm =
                uiqi_mean_with_border(m_up.extract_band(i), m_up.extract_band(j), win, border);
            acc += 2.0 * std::abs(qf - qm); // ordered pairs (i,j) and (j,i)
        }
    return acc / (static_cast<double>(B) * (B - 1));
}

double d_s(const RasterStack& f, const RasterStack& m_up, const RasterStack& pan, int ratio,
           const WindowConfig& win) {
    require_same_shape(f, m_up, "d_s");
    if (pan.bands() != 1) throw DimensionError("d_s: PAN must be single-band");
    if (f.height() != pan.height() || f.width() != pan.width())
        throw DimensionError("d_s: all inputs must be at PAN scale");
    const RasterStack pan_proxy = img::pan_degrade(pan, ratio).up;
    const int border = common_border({&f, &m_up, &pan, &pan_proxy});
    const int B = f.bands();
    double acc = 0.0;
    for (int i = 0; i < B; ++i) {
        const double qf = uiqi_mean_with_border(f.extract_band(i), pan, win, border);
        const double qm = uiqi_mean_with_border(m_up.extract_band(i), pan_proxy, win, border);
        acc += std::abs(qf - qm);
    }
    return acc / B;
}

double hqnr(double d_lambda_value, double d_s_value) {
    if (d_lambda_value < 0.0 || d_lambda_value > 1.0 || d_s_value < 0.0 || d_s_value > 1.0)
        throw ArgumentError("hqnr: distortions must lie in [0, 1]");
    return (1.0 - d_lambda_value) * (1.0 - d_s_value);
}

// ---------------------------------------------------------------------------
// FusionReport

namespace {

std::optional<double> MetricRow::*column_field(const std::string& name) {
    if (name == "Q2n") return &MetricRow::q2n;
    if (name == "SAM") return &MetricRow::sam;
    if (name == "ERGAS") return &MetricRow::ergas;
    if (name == "SCC") return &MetricRow::scc;
    if (name == "D_lambda") return &MetricRow::d_lambda;
    if (name == "D_s") return &MetricRow::d_s;
    if (name == "HQNR") return &MetricRow::hqnr;
    throw LookupError("FusionReport: unknown column " + name);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

const std::vector<std::string>& FusionReport::columns() {
    static const std::vector<std::string> cols = {"Q2n",      "SAM", "ERGAS", "SCC",
                                                  "D_lambda", "D_s", "HQNR"};
    return cols;
}

void FusionReport::add(MetricRow row) {
    if (row.d_lambda && row.d_s && row.hqnr) {
        const double expect = (1.0 - *row.d_lambda) * (1.0 - *row.d_s);
        if (std::abs(expect - *row.hqnr) > 1e-12)
            throw ArgumentError("FusionReport: HQNR must equal (1-D_lambda)(1-D_s) per image");
    }
    rows_.push_back(std::move(row));
}

Aggregate FusionReport::aggregate(const std::string& column) const {
    auto field = column_field(column);
    std::vector<double> vals;
    for (const auto& r : rows_)
        if (r.*field) vals.push_back(*(r.*field));
    if (vals.empty()) return {};
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size()); // population std
    return {mean, std::sqrt(var)};
}

std::string FusionReport::to_csv() const {
    std::string out = "image_id";
    for (const auto& c : columns()) out += "," + c;
    out += "\n";
    for (const auto& r : rows_) {
        out += r.image_id;
        for (const auto& c : columns()) {
            auto field = column_field(c);
            out += ",";
            if (r.*field) out += fmt(*(r.*field));
        }
        out += "\n";
    }
    for (const char* agg : {"mean", "std"}) {
        out += agg;
        for (const auto& c : columns()) {
            const auto a = aggregate(c);
            out += ",";
            if (a.mean) out += fmt(std::string(agg) == "mean" ? *a.mean : *a.stddev);
        }
        out += "\n";
    }
    return out;
}

std::string FusionReport::to_table() const {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s", "image_id");
    out += buf;
    for (const auto& c : columns()) {
        std::snprintf(buf, sizeof(buf), "%10s", c.c_str());
        out += buf;
    }
    out += "\n";
    auto emit_row = [&](const std::string& id, auto getter) {
        std::snprintf(buf, sizeof(buf), "%-16s", id.c_str());
        out += buf;
        for (const auto& c : columns()) {
            const auto v = getter(c);
            if (v)
                std::snprintf(buf, sizeof(buf), "%10.4f", *v);
            else
                std::snprintf(buf, sizeof(buf), "%10s", "-");
            out += buf;
        }
        out += "\n";
    };
    for (const auto& r : rows_)
        emit_row(r.image_id, [&](const std::string& c) -> std::optional<double> {
            auto field = column_field(c);
            return r.*field;
        });
    emit_row("mean", [&](const std::string& c) { return aggregate(c).mean; });
    emit_row("std", [&](const std::string& c) { return aggregate(c).stddev; });
    return out;
}

} // namespace pansharp::metrics

#pragma once

#include "pansharp/errors.hpp"

namespace pansharp::hc {

/// Cayley-Dickson product for dimension 1, 2, 4 or 8:
/// (a1, a2)(b1, b2) = (a1 b1 - conj(b2) a2,  b2 a1 + a2 conj(b1)).
/// Doubling complexes this way yields the Hamilton quaternions.
template <int D>
struct CayleyDickson {
    static constexpr int H = D / 2;

    static void conj(const double* a, double* out) {
        out[0] = a[0];
        for (int i = 1; i < D; ++i) out[i] = -a[i];
    }

    static void mul(const double* a, const double* b, double* out) {
        double t[H], u[H], cb[H], ca[H];
        CayleyDickson<H>::mul(a, b, out); // a1 b1
        CayleyDickson<H>::conj(b + H, cb);
        CayleyDickson<H>::mul(cb, a + H, t); // conj(b2) a2
        for (int i = 0; i < H; ++i) out[i] -= t[i];
        CayleyDickson<H>::mul(b + H, a, u); // b2 a1
        CayleyDickson<H>::conj(b, ca);
        CayleyDickson<H>::mul(a + H, ca, t); // a2 conj(b1)
        for (int i = 0; i < H; ++i) out[H + i] = u[i] + t[i];
    }
};

template <>
struct CayleyDickson<1> {
    static void conj(const double* a, double* out) { out[0] = a[0]; }
    static void mul(const double* a, const double* b, double* out) { out[0] = a[0] * b[0]; }
};

inline void cd_mul(const double* a, const double* b, double* out, int dim) {
    switch (dim) {
        case 1: CayleyDickson<1>::mul(a, b, out); return;
        case 2: CayleyDickson<2>::mul(a, b, out); return;
        case 4: CayleyDickson<4>::mul(a, b, out); return;
        case 8: CayleyDickson<8>::mul(a, b, out); return;
        default: throw ArgumentError("cd_mul: dimension must be 1, 2, 4 or 8");
    }
}

inline void cd_conj(const double* a, double* out, int dim) {
    out[0] = a[0];
    for (int i = 1; i < dim; ++i) out[i] = -a[i];
}

/// Basis structure of x * conj(y): e_i * conj(e_j) = sign[i][j] * e_{index[i][j]}.
struct BasisTable {
    int index[8][8];
    double sign[8][8];
};

/// Table for a given dimension, computed once from the product itself.
const BasisTable& basis_conj_table(int dim);

} // namespace pansharp::hc

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "chsh/errors.hpp"

namespace chsh {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Real 3-vectors and 3x3 matrices
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr Vec3 kE1{1.0, 0.0, 0.0};
inline constexpr Vec3 kE2{0.0, 1.0, 0.0};
inline constexpr Vec3 kE3{0.0, 0.0, 1.0};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    if (n == 0.0) throw ZeroVectorError();
    return (1.0 / n) * a;
}

// Returns fallback when v is too short to define a direction.
inline Vec3 normalized_or(const Vec3& v, const Vec3& fallback) {
    double n = norm(v);
    if (n < 1e-300) return fallback;
    return (1.0 / n) * v;
}

struct Mat3 {
    std::array<double, 9> e{};  // row-major

    double operator()(int i, int j) const { return e[3 * i + j]; }
    double& operator()(int i, int j) { return e[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
};

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}
inline Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = s * a.e[i];
    return r;
}
inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}
inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * v.x + a(i, 1) * v.y + a(i, 2) * v.z;
    return r;
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

inline double frobenius_norm(const Mat3& a) {
    double s = 0.0;
    for (double v : a.e) s += v * v;
    return std::sqrt(s);
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
    return m;
}

// ---------------------------------------------------------------------------
// Complex square matrices of fixed dimension 2 or 4
// ---------------------------------------------------------------------------

template <int N>
    requires(N == 2 || N == 4)
struct CMat {
    std::array<cplx, N * N> e{};

    cplx operator()(int r, int c) const { return e[N * r + c]; }
    cplx& operator()(int r, int c) { return e[N * r + c]; }

    static constexpr int dim() { return N; }

    static CMat identity() {
        CMat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
};

using Mat2c = CMat<2>;
using Mat4c = CMat<4>;

template <int N>
CMat<N> operator+(const CMat<N>& a, const CMat<N>& b) {
    CMat<N> r;
    for (int i = 0; i < N * N; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

template <int N>
CMat<N> operator-(const CMat<N>& a, const CMat<N>& b) {
    CMat<N> r;
    for (int i = 0; i < N * N; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

template <int N>
CMat<N> operator*(cplx s, const CMat<N>& a) {
    CMat<N> r;
    for (int i = 0; i < N * N; ++i) r.e[i] = s * a.e[i];
    return r;
}

template <int N>
CMat<N> operator*(double s, const CMat<N>& a) {
    return cplx(s, 0.0) * a;
}

template <int N>
CMat<N> operator*(const CMat<N>& a, const CMat<N>& b) {
    CMat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < N; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

template <int N>
CMat<N> adjoint(const CMat<N>& a) {
    CMat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

template <int N>
cplx trace(const CMat<N>& a) {
    cplx t = 0.0;
    for (int i = 0; i < N; ++i) t += a(i, i);
    return t;
}

template <int N>
double hermiticity_deviation(const CMat<N>& a) {
    double m = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

template <int N>
double max_abs_diff(const CMat<N>& a, const CMat<N>& b) {
    double m = 0.0;
    for (int i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
    return m;
}

// Tensor product with particle a as the first factor: basis order
// |00>, |01>, |10>, |11>, index = 2*a + b.
inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
    Mat4c r;
    for (int ra = 0; ra < 2; ++ra)
        for (int rb = 0; rb < 2; ++rb)
            for (int ca = 0; ca < 2; ++ca)
                for (int cb = 0; cb < 2; ++cb)
                    r(2 * ra + rb, 2 * ca + cb) = a(ra, ca) * b(rb, cb);
    return r;
}

// Pauli matrices sigma_1, sigma_2, sigma_3.
inline const std::array<Mat2c, 3>& pauli() {
    static const std::array<Mat2c, 3> s = [] {
        std::array<Mat2c, 3> p;
        p[0](0, 1) = 1.0;
        p[0](1, 0) = 1.0;
        p[1](0, 1) = cplx(0.0, -1.0);
        p[1](1, 0) = cplx(0.0, 1.0);
        p[2](0, 0) = 1.0;
        p[2](1, 1) = -1.0;
        return p;
    }();
    return s;
}

// sigma . n  for a real 3-vector n.
inline Mat2c pauli_dot(const Vec3& n) {
    const auto& s = pauli();
    Mat2c r;
    for (int i = 0; i < 4; ++i) r.e[i] = n.x * s[0].e[i] + n.y * s[1].e[i] + n.z * s[2].e[i];
    return r;
}

// ---------------------------------------------------------------------------
// Eigenvalues of Hermitian 2x2 / 4x4 matrices by cyclic Jacobi rotations.
// Each off-diagonal entry is phased real, then annihilated by a real
// rotation; sweeps repeat until the off-diagonal Frobenius mass drops
// below 1e-14. Eigenvectors are never needed in this library.
// ---------------------------------------------------------------------------

template <int N>
std::array<double, N> hermitian_eigenvalues(CMat<N> a) {
    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off2 += 2.0 * std::norm(a(p, q));
        if (off2 < 1e-28) break;

        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                double r = std::abs(a(p, q));
                if (r < 1e-300) continue;

                // Phase the pivot real: a <- D^dagger a D with D = diag(..., e^{-i phi}_q, ...).
                cplx phase = a(p, q) / r;
                for (int k = 0; k < N; ++k) a(k, q) *= std::conj(phase);
                for (int k = 0; k < N; ++k) a(q, k) *= phase;

                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2.0 * r);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < N; ++k) {
                    cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < N; ++k) {
                    cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    std::array<double, N> ev;
    for (int i = 0; i < N; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace chsh

#pragma once

#include <array>
#include <cmath>

#include "chsh/linalg.hpp"

namespace chsh {

/// Singular value decomposition a = u * diag(s) * v^T with s1 >= s2 >= s3 >= 0
/// and orthogonal u, v. Signs are fixed so that u_i^T a v_i = s_i.
struct Svd3 {
    std::array<double, 3> s{};
    Mat3 u;  // columns are left singular vectors
    Mat3 v;  // columns are right singular vectors
};

namespace detail {

inline Vec3 column(const Mat3& m, int j) { return {m(0, j), m(1, j), m(2, j)}; }

inline void set_column(Mat3& m, int j, const Vec3& c) {
    m(0, j) = c.x;
    m(1, j) = c.y;
    m(2, j) = c.z;
}

// A unit vector orthogonal to unit u, via the least-aligned axis.
inline Vec3 orthogonal_unit(const Vec3& u) {
    Vec3 axis = kE1;
    double best = std::abs(u.x);
    if (std::abs(u.y) < best) {
        axis = kE2;
        best = std::abs(u.y);
    }
    if (std::abs(u.z) < best) axis = kE3;
    return normalized(cross(axis, u));
}

}  // namespace detail

/// One-sided (Hestenes) Jacobi SVD. Column pairs of w = a*v are rotated until
/// every implicit Gram off-diagonal |w_i . w_j| falls below 1e-14 of the
/// column norms, which keeps small singular values accurate to machine level
/// rather than the sqrt(eps) floor of an explicit a^T a eigensolve. Left
/// vectors for negligible singular values are completed orthonormally.
inline Svd3 svd_3x3(const Mat3& a) {
    Mat3 w = a;
    Mat3 v = Mat3::identity();

    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                Vec3 wi = detail::column(w, i);
                Vec3 wj = detail::column(w, j);
                double alpha = dot(wi, wi);
                double beta = dot(wj, wj);
                double gamma = dot(wi, wj);
                if (std::abs(gamma) <= 1e-14 * std::sqrt(alpha * beta)) continue;
                rotated = true;

                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = c * t;

                detail::set_column(w, i, c * wi - s * wj);
                detail::set_column(w, j, s * wi + c * wj);
                Vec3 vi = detail::column(v, i);
                Vec3 vj = detail::column(v, j);
                detail::set_column(v, i, c * vi - s * vj);
                detail::set_column(v, j, s * vi + c * vj);
            }
        }
        if (!rotated) break;
    }

    std::array<double, 3> s{};
    std::array<int, 3> order{0, 1, 2};
    for (int i = 0; i < 3; ++i) s[i] = norm(detail::column(w, i));
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return s[p] > s[q]; });

    Svd3 out;
    Mat3 wp, vp;
    for (int k = 0; k < 3; ++k) {
        out.s[k] = s[order[k]];
        detail::set_column(wp, k, detail::column(w, order[k]));
        detail::set_column(vp, k, detail::column(v, order[k]));
    }
    out.v = vp;

    // u_k = w_k / s_k where defined; otherwise complete to an orthonormal set.
    double scale = out.s[0];
    Vec3 u0, u1, u2;
    if (out.s[0] > 0.0) {
        u0 = (1.0 / out.s[0]) * detail::column(wp, 0);
    } else {
        out.u = Mat3::identity();
        return out;
    }
    if (out.s[1] > 1e-14 * scale) {
        u1 = (1.0 / out.s[1]) * detail::column(wp, 1);
    } else {
        u1 = detail::orthogonal_unit(u0);
    }
    if (out.s[2] > 1e-14 * scale) {
        u2 = (1.0 / out.s[2]) * detail::column(wp, 2);
    } else {
        u2 = cross(u0, u1);
    }
    detail::set_column(out.u, 0, u0);
    detail::set_column(out.u, 1, u1);
    detail::set_column(out.u, 2, u2);
    return out;
}

/// Rank of a 3x3 matrix: the number of singular values above tolerance*s1
/// (above the absolute tolerance when s1 = 0). Default tolerance 1e-9.
inline int correlation_rank(const Mat3& beta_m, double tolerance = 1e-9) {
    Svd3 svd = svd_3x3(beta_m);
    double cutoff = svd.s[0] > 0.0 ? tolerance * svd.s[0] : tolerance;
    int rank = 0;
    for (double s : svd.s)
        if (s > cutoff) ++rank;
    return rank;
}

}  // namespace chsh

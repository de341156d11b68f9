#pragma once

#include <array>
#include <cmath>

#include "chsh/density.hpp"
#include "chsh/linalg.hpp"
#include "chsh/svd3.hpp"

namespace chsh {

/// CHSH measurement choice: spin-projection axes n, n' for particle a and
/// m, m' for particle b. All four are unit 3-vectors.
struct MeasurementSettings {
    Vec3 n, n_prime, m, m_prime;
};

/// Measurement pair for the commuting-side functional G = 2 E(C, D) with
/// C = sigma.l on particle a and D = sigma.h on particle b.
struct GSettings {
    Vec3 l, h;
};

/// The 9-vector T_ij = (n_i + n'_i) m_j + (n_i - n'_i) m'_j, row-major in
/// (i, j). |T| = 2 for any unit settings.
struct TVector {
    std::array<double, 9> t{};

    double norm() const {
        double s = 0.0;
        for (double x : t) s += x * x;
        return std::sqrt(s);
    }
};

inline TVector t_vector(const MeasurementSettings& s) {
    Vec3 p = s.n + s.n_prime;
    Vec3 q = s.n - s.n_prime;
    TVector out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.t[3 * i + j] = p[i] * s.m[j] + q[i] * s.m_prime[j];
    return out;
}

/// The D 9-vector of the G functional, D_ij = 2 l_i h_j; |D| = 2.
inline TVector d_vector(const GSettings& s) {
    TVector out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.t[3 * i + j] = 2.0 * s.l[i] * s.h[j];
    return out;
}

/// The CHSH observable A x B + A x B' + A' x B - A' x B' with A = sigma.n etc.
inline Mat4c chsh_operator(const MeasurementSettings& s) {
    Mat4c ab = kron(pauli_dot(s.n), pauli_dot(s.m));
    Mat4c abp = kron(pauli_dot(s.n), pauli_dot(s.m_prime));
    Mat4c apb = kron(pauli_dot(s.n_prime), pauli_dot(s.m));
    Mat4c apbp = kron(pauli_dot(s.n_prime), pauli_dot(s.m_prime));
    return ab + abp + apb - apbp;
}

/// F = beta . T, the CHSH expectation as an inner product of 9-vectors.
inline double chsh_value(const BlochDecomposition& d, const MeasurementSettings& s) {
    Vec3 p = s.n + s.n_prime;
    Vec3 q = s.n - s.n_prime;
    Mat3 bt = transpose(d.beta);
    return dot(bt * p, s.m) + dot(bt * q, s.m_prime);
}

/// G = 2 l^T beta h.
inline double g_value(const BlochDecomposition& d, const GSettings& s) {
    return 2.0 * dot(s.l, d.beta * s.h);
}

/// Commutator axes: [A, A'] = 2i sigma.(n x n'), [B, B'] = 2i sigma.(m x m').
/// Returns (X, Y) = (n x n', m x m'); zero norm certifies commuting
/// measurements on that side.
inline std::pair<Vec3, Vec3> commutator_vectors(const MeasurementSettings& s) {
    return {cross(s.n, s.n_prime), cross(s.m, s.m_prime)};
}

struct FMaxResult {
    double value;
    MeasurementSettings settings;
};

struct GMaxResult {
    double value;
    GSettings settings;
};

namespace detail {

// Optimal CHSH settings from the SVD of beta: a-side along the top two left
// singular vectors, b-side mixing the top two right singular vectors with
// tan(theta) = s2/s1. Achieves F = 2 sqrt(s1^2 + s2^2). For s2 = 0 this
// degenerates to m = m' (commuting b-side); for beta = 0 every setting is
// optimal and a commuting-b-side canonical choice is returned.
inline FMaxResult f_max_from_svd(const Svd3& svd) {
    if (svd.s[0] <= 0.0) {
        return {0.0, MeasurementSettings{kE1, kE2, kE1, kE1}};
    }
    double theta = std::atan2(svd.s[1], svd.s[0]);
    double c = std::cos(theta), s = std::sin(theta);
    Vec3 a1 = column(svd.u, 0), a2 = column(svd.u, 1);
    Vec3 b1 = column(svd.v, 0), b2 = column(svd.v, 1);
    MeasurementSettings ms{a1, a2, c * b1 + s * b2, c * b1 - s * b2};
    return {2.0 * std::hypot(svd.s[0], svd.s[1]), ms};
}

inline GMaxResult g_max_from_svd(const Svd3& svd) {
    if (svd.s[0] <= 0.0) {
        return {0.0, GSettings{kE1, kE1}};
    }
    return {2.0 * svd.s[0], GSettings{column(svd.u, 0), column(svd.v, 0)}};
}

// Angle between two 9-vectors, stable near 0 and pi.
inline double angle_between(const TVector& a, const TVector& b) {
    double na = a.norm(), nb = b.norm();
    double diff2 = 0.0, sum2 = 0.0;
    for (int i = 0; i < 9; ++i) {
        double x = a.t[i] / na, y = b.t[i] / nb;
        diff2 += (x - y) * (x - y);
        sum2 += (x + y) * (x + y);
    }
    return 2.0 * std::atan2(std::sqrt(diff2), std::sqrt(sum2));
}

}  // namespace detail

/// Maximal CHSH value F_max = 2 sqrt(s1^2 + s2^2) together with settings that
/// attain it; chsh_value at those settings reproduces the value to 1e-9.
inline FMaxResult f_max_analytic(const BlochDecomposition& d) {
    return detail::f_max_from_svd(svd_3x3(d.beta));
}

/// Maximal commuting-side value G_max = 2 s1 with the attaining pair (l, h).
inline GMaxResult g_max_analytic(const BlochDecomposition& d) {
    return detail::g_max_from_svd(svd_3x3(d.beta));
}

/// Degree of entanglement P_E = sqrt((F_max/2)^2 - (G_max/2)^2). With
/// F_max = 2 sqrt(s1^2 + s2^2) and G_max = 2 s1 the difference is exactly
/// s2^2, so it is evaluated as s2 to avoid the cancellation of the
/// squared-difference route.
inline double entanglement_degree(const BlochDecomposition& d) {
    return svd_3x3(d.beta).s[1];
}

/// Full analysis of one state. settings_f / settings_g attain the reported
/// maxima; gamma and delta are the angles realized by those maxima against
/// the correlation vector, eta the angle between the optimal T and D.
struct ChshReport {
    double f_max = 0.0;
    double g_max = 0.0;
    double p_e = 0.0;
    std::array<double, 3> singular_values{};
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    Vec3 x_vec;
    Vec3 y_vec;
    int beta_rank = 0;
    bool entangled = false;
    MeasurementSettings settings_f;
    GSettings settings_g;
};

inline constexpr double kDefaultClassificationThreshold = 1e-9;
inline constexpr double kDefaultRankTolerance = 1e-9;

/// Classifies a state: entangled iff P_E exceeds the threshold, which by the
/// rank criterion coincides with rank(beta_M) >= 2. The report carries both
/// quantities plus the commutator vectors so the criteria can be cross-checked.
inline ChshReport classify(const DensityMatrix& rho,
                           double classification_threshold = kDefaultClassificationThreshold,
                           double rank_tolerance = kDefaultRankTolerance) {
    BlochDecomposition d = decompose_bloch(rho);
    Svd3 svd = svd_3x3(d.beta);

    ChshReport r;
    r.singular_values = svd.s;
    FMaxResult f = detail::f_max_from_svd(svd);
    GMaxResult g = detail::g_max_from_svd(svd);
    r.f_max = f.value;
    r.g_max = g.value;
    r.settings_f = f.settings;
    r.settings_g = g.settings;
    r.p_e = svd.s[1];

    double beta_norm = std::sqrt(svd.s[0] * svd.s[0] + svd.s[1] * svd.s[1] + svd.s[2] * svd.s[2]);
    if (beta_norm > 0.0) {
        r.gamma = std::acos(std::min(1.0, r.f_max / (2.0 * beta_norm)));
        r.delta = std::acos(std::min(1.0, r.g_max / (2.0 * beta_norm)));
    }
    r.eta = detail::angle_between(t_vector(r.settings_f), d_vector(r.settings_g));

    auto [x, y] = commutator_vectors(r.settings_f);
    r.x_vec = x;
    r.y_vec = y;

    double cutoff = svd.s[0] > 0.0 ? rank_tolerance * svd.s[0] : rank_tolerance;
    r.beta_rank = 0;
    for (double s : svd.s)
        if (s > cutoff) ++r.beta_rank;

    r.entangled = r.p_e > classification_threshold;
    return r;
}

/// Residuals of the geometric identity |X||Y| = 4 G_max P_E / F_max^2 = sin(2 eta).
struct GeometricResiduals {
    double xy_product;   // |X| |Y|
    double ratio_form;   // 4 G_max P_E / F_max^2
    double sine_form;    // sin(2 eta)
    double r1;           // |xy_product - ratio_form|
    double r2;           // |xy_product - sine_form|
};

inline GeometricResiduals geometric_identity(const ChshReport& report) {
    if (report.f_max <= 1e-12) throw DegenerateStateError();
    double xy = norm(report.x_vec) * norm(report.y_vec);
    double ratio = 4.0 * report.g_max * report.p_e / (report.f_max * report.f_max);
    double sine = std::sin(2.0 * report.eta);
    return {xy, ratio, sine, std::abs(xy - ratio), std::abs(xy - sine)};
}

/// The generalized inequality -|G_max| <= F <= |G_max| and its maximal
/// violation F_max = 2 sqrt((G_max/2)^2 + P_E^2). `violation` flags
/// F_max > G_max; `residual` is the self-consistency defect of the maximal
/// violation identity.
struct InequalityReport {
    double f_max;
    double g_max;
    bool violation;
    double residual;
};

inline InequalityReport inequality_report(const DensityMatrix& rho) {
    BlochDecomposition d = decompose_bloch(rho);
    Svd3 svd = svd_3x3(d.beta);
    double f = 2.0 * std::hypot(svd.s[0], svd.s[1]);
    double g = 2.0 * svd.s[0];
    double p = svd.s[1];
    double residual = std::abs(f - 2.0 * std::hypot(g / 2.0, p));
    return {f, g, f > g + 1e-9, residual};
}

}  // namespace chsh

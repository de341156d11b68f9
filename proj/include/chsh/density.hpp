#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "chsh/linalg.hpp"

namespace chsh {

inline constexpr double kDefaultValidationTol = 1e-10;

/// Bloch picture of a two-qubit state: local Bloch vectors u (particle a),
/// v (particle b) and the 3x3 correlation matrix beta with
/// beta(i,j) = Tr[rho (sigma_i x sigma_j)].
struct BlochDecomposition {
    Vec3 u;
    Vec3 v;
    Mat3 beta;
};

/// A validated two-qubit density matrix: Hermitian, unit trace, positive
/// semidefinite. Construct through validate_density, pure_density or
/// reconstruct_density; instances are immutable.
class DensityMatrix {
  public:
    const Mat4c& matrix() const { return m_; }

  private:
    explicit DensityMatrix(const Mat4c& m) : m_(m) {}
    friend DensityMatrix validate_density(const Mat4c&, double);

    Mat4c m_;
};

namespace detail {

// kron(sigma_i, I), kron(I, sigma_j) and kron(sigma_i, sigma_j), cached.
inline const std::array<Mat4c, 3>& sigma_a() {
    static const std::array<Mat4c, 3> ops = [] {
        std::array<Mat4c, 3> r;
        for (int i = 0; i < 3; ++i) r[i] = kron(pauli()[i], Mat2c::identity());
        return r;
    }();
    return ops;
}

inline const std::array<Mat4c, 3>& sigma_b() {
    static const std::array<Mat4c, 3> ops = [] {
        std::array<Mat4c, 3> r;
        for (int j = 0; j < 3; ++j) r[j] = kron(Mat2c::identity(), pauli()[j]);
        return r;
    }();
    return ops;
}

inline const std::array<std::array<Mat4c, 3>, 3>& sigma_ab() {
    static const std::array<std::array<Mat4c, 3>, 3> ops = [] {
        std::array<std::array<Mat4c, 3>, 3> r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] = kron(pauli()[i], pauli()[j]);
        return r;
    }();
    return ops;
}

inline double real_trace_product(const Mat4c& a, const Mat4c& b) {
    // Tr[a b] without forming the product matrix.
    cplx t = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) t += a(i, k) * b(k, i);
    return t.real();
}

}  // namespace detail

/// Validates a 4x4 matrix as a density matrix. The input is symmetrized
/// (rho <- (rho + rho^dagger)/2) and its trace renormalized, so decimals
/// rounded in input files do not spuriously fail. Throws NotHermitianError,
/// TraceNotOneError or NotPositiveError naming the violated bound.
inline DensityMatrix validate_density(const Mat4c& m, double tolerance = kDefaultValidationTol) {
    double herm = hermiticity_deviation(m);
    if (herm > tolerance) throw NotHermitianError(herm, tolerance);

    Mat4c h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    double tr = trace(h).real();
    if (std::abs(tr - 1.0) > tolerance) throw TraceNotOneError(std::abs(tr - 1.0), tolerance);
    // Skip the division when the trace is already 1 to machine accuracy, so
    // re-validating a previously validated matrix is bit-exact.
    if (std::abs(tr - 1.0) > 16.0 * std::numeric_limits<double>::epsilon()) {
        double inv = 1.0 / tr;
        for (auto& z : h.e) z *= inv;
    }

    double lambda_min = hermitian_eigenvalues(h)[0];
    if (lambda_min < -tolerance) throw NotPositiveError(lambda_min, tolerance);

    return DensityMatrix(h);
}

/// |psi><psi| from a complex amplitude 4-vector. Amplitudes are normalized
/// first; the result is invariant under a global phase. Throws
/// ZeroVectorError for the zero vector.
inline DensityMatrix pure_density(const std::array<cplx, 4>& amplitudes) {
    double n2 = 0.0;
    for (const cplx& a : amplitudes) n2 += std::norm(a);
    if (n2 < 1e-300) throw ZeroVectorError();
    double inv = 1.0 / std::sqrt(n2);

    Mat4c rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho(i, j) = (inv * amplitudes[i]) * std::conj(inv * amplitudes[j]);
    return validate_density(rho, kDefaultValidationTol);
}

/// Bloch decomposition via Pauli traces: u_i = Tr[rho (sigma_i x I)],
/// v_j = Tr[rho (I x sigma_j)], beta_ij = Tr[rho (sigma_i x sigma_j)].
inline BlochDecomposition decompose_bloch(const DensityMatrix& rho) {
    const Mat4c& r = rho.matrix();
    BlochDecomposition d;
    for (int i = 0; i < 3; ++i) d.u[i] = detail::real_trace_product(r, detail::sigma_a()[i]);
    for (int j = 0; j < 3; ++j) d.v[j] = detail::real_trace_product(r, detail::sigma_b()[j]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d.beta(i, j) = detail::real_trace_product(r, detail::sigma_ab()[i][j]);
    return d;
}

/// Assembles 1/4 (IxI + u.sigma x I + I x v.sigma + sum beta_ij sigma_i x sigma_j)
/// and validates positivity. Throws NotPositiveError when the triple does not
/// correspond to a physical state.
inline DensityMatrix reconstruct_density(const BlochDecomposition& d,
                                         double tolerance = kDefaultValidationTol) {
    Mat4c m = Mat4c::identity();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 16; ++k) m.e[k] += d.u[i] * detail::sigma_a()[i].e[k];
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 16; ++k) m.e[k] += d.v[j] * detail::sigma_b()[j].e[k];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 16; ++k) m.e[k] += d.beta(i, j) * detail::sigma_ab()[i][j].e[k];
    for (auto& z : m.e) z *= 0.25;
    return validate_density(m, tolerance);
}

enum class Particle { a, b };

/// Partial trace over the other particle; equals (I2 + sigma.u)/2 for
/// particle a (resp. v for b).
inline Mat2c reduced_state(const DensityMatrix& rho, Particle which) {
    const Mat4c& r = rho.matrix();
    Mat2c red;
    if (which == Particle::a) {
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                red(i, k) = r(2 * i + 0, 2 * k + 0) + r(2 * i + 1, 2 * k + 1);
    } else {
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                red(j, l) = r(0 + j, 0 + l) + r(2 + j, 2 + l);
    }
    return red;
}

/// Tr[rho op] for a Hermitian observable. Throws NotHermitianOperatorError
/// when op deviates from Hermiticity by more than 1e-10; the imaginary
/// residue of the trace is checked against the same bound and discarded.
inline double operator_expectation(const DensityMatrix& rho, const Mat4c& op) {
    constexpr double kTol = 1e-10;
    double dev = hermiticity_deviation(op);
    if (dev > kTol) throw NotHermitianOperatorError(dev, kTol);
    cplx t = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) t += rho.matrix()(i, k) * op(k, i);
    if (std::abs(t.imag()) > kTol)
        throw Error("expectation has imaginary residue " + std::to_string(t.imag()));
    return t.real();
}

}  // namespace chsh

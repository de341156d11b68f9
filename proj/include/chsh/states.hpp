#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "chsh/density.hpp"
#include "chsh/engine.hpp"
#include "chsh/rng.hpp"

namespace chsh {

enum class StateFamily {
    bell_psi_plus,
    bell_psi_minus,
    bell_phi_plus,
    bell_phi_minus,
    pure_01_10,
    pure_00_11,
    werner,
    product,
    random_mixed,
    explicit_matrix,
};

/// Parsed description of a state to build: a named family with parameters,
/// or an explicit 4x4 matrix.
struct StateSpec {
    StateFamily family = StateFamily::explicit_matrix;
    double k1 = 0.0, k2 = 0.0;             // pure_01_10 / pure_00_11
    double alpha = 0.0;                    // werner
    Vec3 u, v;                             // product
    uint64_t seed = 0;                     // random_mixed
    int size = 4;                          // random_mixed mixture size
    std::optional<Mat4c> matrix;           // explicit_matrix
};

inline const char* family_name(StateFamily f) {
    switch (f) {
        case StateFamily::bell_psi_plus: return "bell_psi_plus";
        case StateFamily::bell_psi_minus: return "bell_psi_minus";
        case StateFamily::bell_phi_plus: return "bell_phi_plus";
        case StateFamily::bell_phi_minus: return "bell_phi_minus";
        case StateFamily::pure_01_10: return "pure_01_10";
        case StateFamily::pure_00_11: return "pure_00_11";
        case StateFamily::werner: return "werner";
        case StateFamily::product: return "product";
        case StateFamily::random_mixed: return "random_mixed";
        case StateFamily::explicit_matrix: return "explicit";
    }
    return "unknown";
}

inline std::optional<StateFamily> family_from_name(const std::string& name) {
    for (StateFamily f :
         {StateFamily::bell_psi_plus, StateFamily::bell_psi_minus, StateFamily::bell_phi_plus,
          StateFamily::bell_phi_minus, StateFamily::pure_01_10, StateFamily::pure_00_11,
          StateFamily::werner, StateFamily::product, StateFamily::random_mixed,
          StateFamily::explicit_matrix})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

namespace detail {

inline DensityMatrix pure_two_amplitude(int idx_a, int idx_b, double k1, double k2) {
    double n = std::hypot(k1, k2);
    if (n < 1e-300) throw InvalidParameterError("pure family requires (k1, k2) != 0");
    std::array<cplx, 4> amps{};
    amps[idx_a] = k1 / n;
    amps[idx_b] = k2 / n;
    return pure_density(amps);
}

}  // namespace detail

/// k1|01> + k2|10> (amplitudes normalized).
inline DensityMatrix pure_01_10(double k1, double k2) {
    return detail::pure_two_amplitude(1, 2, k1, k2);
}

/// k1|00> + k2|11>.
inline DensityMatrix pure_00_11(double k1, double k2) {
    return detail::pure_two_amplitude(0, 3, k1, k2);
}

inline DensityMatrix bell_state(StateFamily which) {
    double r = 1.0 / std::sqrt(2.0);
    switch (which) {
        case StateFamily::bell_psi_plus: return pure_01_10(r, r);
        case StateFamily::bell_psi_minus: return pure_01_10(r, -r);
        case StateFamily::bell_phi_plus: return pure_00_11(r, r);
        case StateFamily::bell_phi_minus: return pure_00_11(r, -r);
        default: throw InvalidParameterError("not a Bell family");
    }
}

/// (1 - alpha) I4/4 + alpha |psi+><psi+| for alpha in [0, 1].
inline DensityMatrix werner(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidParameterError("werner alpha must lie in [0, 1], got " +
                                    std::to_string(alpha));
    Mat4c m;
    double base = (1.0 - alpha) / 4.0;
    for (int i = 0; i < 4; ++i) m(i, i) = base;
    m(1, 1) += alpha / 2.0;
    m(2, 2) += alpha / 2.0;
    m(1, 2) += alpha / 2.0;
    m(2, 1) += alpha / 2.0;
    return validate_density(m, 1e-12);
}

/// Product state rho_u x rho_v from two Bloch vectors with |u|, |v| <= 1.
inline DensityMatrix product_state(const Vec3& u, const Vec3& v) {
    if (norm(u) > 1.0 + 1e-9 || norm(v) > 1.0 + 1e-9)
        throw InvalidParameterError("product-state Bloch vectors must have norm <= 1");
    Mat2c ra = 0.5 * (Mat2c::identity() + pauli_dot(u));
    Mat2c rb = 0.5 * (Mat2c::identity() + pauli_dot(v));
    return validate_density(kron(ra, rb), 1e-12);
}

/// Mixture of `size` Haar-like random pure states with flat-simplex weights;
/// deterministic under seed. Covers density-matrix ranks 1..4.
inline DensityMatrix random_mixed(uint64_t seed, int size = 4) {
    if (size < 1 || size > 64)
        throw InvalidParameterError("random_mixed size must lie in [1, 64]");
    CounterRng rng(seed, /*stream=*/0x7A57E5);
    std::vector<double> w = rng.simplex_weights(size);
    Mat4c m;
    for (int t = 0; t < size; ++t) {
        std::array<cplx, 4> a = rng.gaussian_amplitudes();
        double n2 = 0.0;
        for (const cplx& z : a) n2 += std::norm(z);
        double scale = w[t] / n2;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) += scale * a[i] * std::conj(a[j]);
    }
    return validate_density(m, 1e-12);
}

inline DensityMatrix build(const StateSpec& spec) {
    switch (spec.family) {
        case StateFamily::bell_psi_plus:
        case StateFamily::bell_psi_minus:
        case StateFamily::bell_phi_plus:
        case StateFamily::bell_phi_minus:
            return bell_state(spec.family);
        case StateFamily::pure_01_10:
            return pure_01_10(spec.k1, spec.k2);
        case StateFamily::pure_00_11:
            return pure_00_11(spec.k1, spec.k2);
        case StateFamily::werner:
            return werner(spec.alpha);
        case StateFamily::product:
            return product_state(spec.u, spec.v);
        case StateFamily::random_mixed:
            return random_mixed(spec.seed, spec.size);
        case StateFamily::explicit_matrix:
            if (!spec.matrix) throw InvalidParameterError("explicit spec carries no matrix");
            return validate_density(*spec.matrix);
    }
    throw InvalidParameterError("unknown state family");
}

/// The closed-form optimal CHSH settings for k1|01> + k2|10>, k1 k2 != 0:
/// n = (sign(k1 k2), 0, 0), n' = (0, 0, -1),
/// m = m' = 2|k1 k2| (1 + 4 k1^2 k2^2)^{-1/2} in the first component and
/// m3 = -m'_3 = (1 + 4 k1^2 k2^2)^{-1/2}. Attains F = 2 sqrt(1 + 4 k1^2 k2^2).
inline MeasurementSettings pure_state_optimal_settings(double k1, double k2) {
    double n = std::hypot(k1, k2);
    if (n < 1e-300) throw InvalidParameterError("pure family requires (k1, k2) != 0");
    k1 /= n;
    k2 /= n;
    double prod = k1 * k2;
    if (prod == 0.0) throw FactorizableStateError();
    double sgn = prod > 0.0 ? 1.0 : -1.0;
    double c = 1.0 / std::sqrt(1.0 + 4.0 * prod * prod);
    double m1 = 2.0 * std::abs(prod) * c;
    MeasurementSettings s;
    s.n = {sgn, 0.0, 0.0};
    s.n_prime = {0.0, 0.0, -1.0};
    s.m = {m1, 0.0, c};
    s.m_prime = {m1, 0.0, -c};
    return s;
}

}  // namespace chsh

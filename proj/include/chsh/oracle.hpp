#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "chsh/engine.hpp"
#include "chsh/parallel.hpp"
#include "chsh/rng.hpp"

namespace chsh {

/// Brute-force maximization settings. The seed fully determines the restart
/// stream; restarts may execute on any number of worker threads without
/// changing the result.
struct OptimizerConfig {
    int restarts = 64;
    int max_iterations = 500;
    double convergence_tol = 1e-12;
    uint64_t seed = 0;
};

struct FOptimizationResult {
    double value = 0.0;
    MeasurementSettings settings;
    int iterations_used = 0;
    int restart_index_of_best = 0;
};

struct GOptimizationResult {
    double value = 0.0;
    GSettings settings;
    int iterations_used = 0;
    int restart_index_of_best = 0;
};

namespace detail {

inline void check_config(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iterations < 1 || cfg.convergence_tol <= 0.0)
        throw InvalidParameterError("optimizer bounds must be positive");
}

// Deterministic reduction: best value wins, ties within 1e-15 go to the
// lowest restart index. Scanning the indexed results array in order makes
// parallel and serial execution agree bit-for-bit.
template <typename R>
R reduce_best(const std::vector<R>& results) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(results.size()); ++i)
        if (results[i].value > results[best].value + 1e-15) best = i;
    R out = results[best];
    out.restart_index_of_best = best;
    return out;
}

}  // namespace detail

/// Maximizes F = beta . T over unit measurement directions by alternating
/// exact coordinate updates: given (n, n'), the optimal b-side is
/// m ~ beta^T (n + n'), m' ~ beta^T (n - n'); given (m, m'), the optimal
/// a-side is n ~ beta (m + m'), n' ~ beta (m - m'). Every half-step has a
/// closed-form optimum, so each sweep is monotonically non-decreasing.
inline FOptimizationResult maximize_f(const BlochDecomposition& d,
                                      const OptimizerConfig& cfg = {}) {
    detail::check_config(cfg);
    const Mat3 beta = d.beta;
    const Mat3 beta_t = transpose(beta);

    std::vector<FOptimizationResult> results(cfg.restarts);
    parallel_for(cfg.restarts, [&](std::size_t r) {
        CounterRng rng(cfg.seed, r);
        MeasurementSettings s{rng.unit_vector(), rng.unit_vector(), rng.unit_vector(),
                              rng.unit_vector()};
        double prev = chsh_value(d, s);
        int iters = cfg.max_iterations;
        for (int it = 1; it <= cfg.max_iterations; ++it) {
            s.m = normalized_or(beta_t * (s.n + s.n_prime), s.m);
            s.m_prime = normalized_or(beta_t * (s.n - s.n_prime), s.m_prime);
            s.n = normalized_or(beta * (s.m + s.m_prime), s.n);
            s.n_prime = normalized_or(beta * (s.m - s.m_prime), s.n_prime);
            double f = chsh_value(d, s);
            if (f + 1e-9 < prev)
                throw Error("coordinate ascent decreased the objective");
            if (std::abs(f - prev) < cfg.convergence_tol) {
                iters = it;
                break;
            }
            prev = f;
        }
        results[r] = {chsh_value(d, s), s, iters, static_cast<int>(r)};
    });
    return detail::reduce_best(results);
}

/// Maximizes G = 2 l^T beta h by alternating l ~ beta h, h ~ beta^T l
/// (power iteration on beta); converges to 2 s1.
inline GOptimizationResult maximize_g(const BlochDecomposition& d,
                                      const OptimizerConfig& cfg = {}) {
    detail::check_config(cfg);
    const Mat3 beta = d.beta;
    const Mat3 beta_t = transpose(beta);

    std::vector<GOptimizationResult> results(cfg.restarts);
    parallel_for(cfg.restarts, [&](std::size_t r) {
        CounterRng rng(cfg.seed, r);
        GSettings s{rng.unit_vector(), rng.unit_vector()};
        double prev = g_value(d, s);
        int iters = cfg.max_iterations;
        for (int it = 1; it <= cfg.max_iterations; ++it) {
            s.l = normalized_or(beta * s.h, s.l);
            s.h = normalized_or(beta_t * s.l, s.h);
            double g = g_value(d, s);
            if (g + 1e-9 < prev)
                throw Error("power iteration decreased the objective");
            if (std::abs(g - prev) < cfg.convergence_tol) {
                iters = it;
                break;
            }
            prev = g;
        }
        results[r] = {g_value(d, s), s, iters, static_cast<int>(r)};
    });
    return detail::reduce_best(results);
}

/// Certified lower bound on F_max: exhaustive scan of (n, n') over a product
/// grid of spherical angles at the given resolution, with the b-side taken at
/// its exact optimum for each pair. Never exceeds the true maximum; used as a
/// third opinion independent of the ascent logic.
inline double grid_scan_f(const BlochDecomposition& d, int resolution) {
    if (resolution < 8) throw InvalidParameterError("grid resolution must be >= 8");
    long long points = static_cast<long long>(resolution) * resolution;
    long long evals = points * points;
    if (evals > 1'000'000'000LL) throw ResolutionTooHighError(evals);

    std::vector<Vec3> dirs;
    dirs.reserve(points);
    for (int i = 0; i < resolution; ++i) {
        double theta = std::numbers::pi * (i + 0.5) / resolution;
        for (int j = 0; j < resolution; ++j) {
            double phi = 2.0 * std::numbers::pi * j / resolution;
            dirs.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta)});
        }
    }

    const Mat3 beta_t = transpose(d.beta);
    double best = 0.0;
    for (const Vec3& n : dirs) {
        for (const Vec3& np : dirs) {
            // max over (m, m') of beta.T at fixed (n, n').
            double f = norm(beta_t * (n + np)) + norm(beta_t * (n - np));
            if (f > best) best = f;
        }
    }
    return best;
}

}  // namespace chsh

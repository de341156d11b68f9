#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "chsh/linalg.hpp"

namespace chsh {

// SplitMix64 finalizer; statistically strong enough to use as a counter hash.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: each output is a pure function of
/// (seed, stream, counter), so replay is exact and independent streams can be
/// drawn concurrently without shared state.
class CounterRng {
  public:
    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(0x5851F42D4C957F2DULL * (stream + 1)))) {}

    uint64_t next_u64() { return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Two independent standard normals (Box-Muller; fixed counter use).
    std::pair<double, double> gaussian_pair() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Uniform direction on the unit sphere via normalized Gaussians.
    Vec3 unit_vector() {
        for (;;) {
            auto [g0, g1] = gaussian_pair();
            auto [g2, g3] = gaussian_pair();
            (void)g3;
            Vec3 v{g0, g1, g2};
            double n = norm(v);
            if (n > 1e-12) return (1.0 / n) * v;
        }
    }

    /// Uniform rotation in SO(3) from a random unit quaternion.
    Mat3 rotation() {
        auto [q0, q1] = gaussian_pair();
        auto [q2, q3] = gaussian_pair();
        double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
        double w = q0 / n, x = q1 / n, y = q2 / n, z = q3 / n;
        Mat3 r;
        r(0, 0) = 1 - 2 * (y * y + z * z);
        r(0, 1) = 2 * (x * y - w * z);
        r(0, 2) = 2 * (x * z + w * y);
        r(1, 0) = 2 * (x * y + w * z);
        r(1, 1) = 1 - 2 * (x * x + z * z);
        r(1, 2) = 2 * (y * z - w * x);
        r(2, 0) = 2 * (x * z - w * y);
        r(2, 1) = 2 * (y * z + w * x);
        r(2, 2) = 1 - 2 * (x * x + y * y);
        return r;
    }

    /// Flat Dirichlet sample: k positive weights summing to 1.
    std::vector<double> simplex_weights(int k) {
        std::vector<double> w(k);
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            w[i] = -std::log(1.0 - uniform());
            sum += w[i];
        }
        for (double& x : w) x /= sum;
        return w;
    }

    /// Gaussian complex 4-vector (Haar-like direction after normalization).
    std::array<cplx, 4> gaussian_amplitudes() {
        std::array<cplx, 4> a;
        for (int i = 0; i < 4; ++i) {
            auto [re, im] = gaussian_pair();
            a[i] = cplx(re, im);
        }
        return a;
    }

  private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace chsh

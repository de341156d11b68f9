#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "chsh/density.hpp"
#include "chsh/engine.hpp"
#include "chsh/rng.hpp"

namespace chsh {

/// Born-rule outcome probabilities p(a, b) for spin projections along a_dir
/// (particle a) and b_dir (particle b), a, b in {+1, -1}.
struct JointProbabilities {
    double pp, pm, mp, mm;

    double correlation() const { return pp - pm - mp + mm; }
};

/// p(a, b) = 1/4 (1 + a u.a_dir + b v.b_dir + ab a_dir^T beta b_dir), the
/// trace against the projector pair (I +/- sigma.n)/2 written in Bloch form.
/// Tiny negative round-off is clamped and the four values renormalized.
inline JointProbabilities joint_probabilities(const DensityMatrix& rho, const Vec3& a_dir,
                                              const Vec3& b_dir) {
    BlochDecomposition d = decompose_bloch(rho);
    double ua = dot(d.u, a_dir);
    double vb = dot(d.v, b_dir);
    double ab = dot(a_dir, d.beta * b_dir);
    JointProbabilities p{0.25 * (1.0 + ua + vb + ab), 0.25 * (1.0 + ua - vb - ab),
                         0.25 * (1.0 - ua + vb - ab), 0.25 * (1.0 - ua - vb + ab)};
    double sum = 0.0;
    for (double* q : {&p.pp, &p.pm, &p.mp, &p.mm}) {
        if (*q < 0.0) *q = 0.0;
        sum += *q;
    }
    for (double* q : {&p.pp, &p.pm, &p.mp, &p.mm}) *q /= sum;
    return p;
}

/// Finite-shot estimate of one correlation E(A, B).
struct ShotEstimate {
    double mean = 0.0;           // average of the +/-1 outcome products
    long long shots = 0;
    double standard_error = 0.0; // sample std / sqrt(shots)
    uint64_t seed = 0;
};

/// Samples `shots` outcome pairs i.i.d. from the Born probabilities and
/// averages the +/-1 products. Deterministic under seed.
inline ShotEstimate estimate_correlation(const DensityMatrix& rho, const Vec3& a_dir,
                                         const Vec3& b_dir, long long shots, uint64_t seed) {
    if (shots < 1) throw InvalidParameterError("shots must be >= 1");
    JointProbabilities p = joint_probabilities(rho, a_dir, b_dir);
    double c1 = p.pp;
    double c2 = c1 + p.pm;
    double c3 = c2 + p.mp;

    CounterRng rng(seed, /*stream=*/0x5407);
    long long plus = 0;
    for (long long i = 0; i < shots; ++i) {
        double x = rng.uniform();
        bool same = (x < c1) || (x >= c3);  // (+,+) or (-,-)
        if (same) ++plus;
    }
    ShotEstimate e;
    e.shots = shots;
    e.seed = seed;
    e.mean = static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
    e.standard_error =
        shots > 1 ? std::sqrt((1.0 - e.mean * e.mean) / static_cast<double>(shots - 1)) : 0.0;
    return e;
}

/// CHSH estimate assembled from four independently seeded term estimates:
/// E(A,B) + E(A,B') + E(A',B) - E(A',B'). Term seeds are seed ^ term index.
struct ChshEstimate {
    double value = 0.0;
    double standard_error = 0.0;  // term errors combined in quadrature
    std::array<ShotEstimate, 4> terms{};
};

inline ChshEstimate estimate_chsh(const DensityMatrix& rho, const MeasurementSettings& s,
                                  long long shots_per_term, uint64_t seed) {
    ChshEstimate out;
    out.terms[0] = estimate_correlation(rho, s.n, s.m, shots_per_term, seed ^ 0ULL);
    out.terms[1] = estimate_correlation(rho, s.n, s.m_prime, shots_per_term, seed ^ 1ULL);
    out.terms[2] = estimate_correlation(rho, s.n_prime, s.m, shots_per_term, seed ^ 2ULL);
    out.terms[3] = estimate_correlation(rho, s.n_prime, s.m_prime, shots_per_term, seed ^ 3ULL);
    out.value = out.terms[0].mean + out.terms[1].mean + out.terms[2].mean - out.terms[3].mean;
    double v = 0.0;
    for (const ShotEstimate& t : out.terms) v += t.standard_error * t.standard_error;
    out.standard_error = std::sqrt(v);
    return out;
}

}  // namespace chsh

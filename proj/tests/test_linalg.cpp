#include <catch2/catch_amalgamated.hpp>

#include "chsh/linalg.hpp"
#include "chsh/rng.hpp"

using namespace chsh;

TEST_CASE("vector algebra basics") {
    Vec3 a{1.0, 2.0, 3.0};
    Vec3 b{-1.0, 0.5, 2.0};
    CHECK(dot(a, b) == Catch::Approx(6.0));
    Vec3 c = cross(kE1, kE2);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
    CHECK(c.z == 1.0);
    CHECK(norm(normalized(a)) == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(normalized(Vec3{}), ZeroVectorError);
}

TEST_CASE("pauli matrices square to identity and anticommute") {
    const auto& s = pauli();
    for (int i = 0; i < 3; ++i) {
        Mat2c sq = s[i] * s[i];
        CHECK(max_abs_diff(sq, Mat2c::identity()) < 1e-15);
        CHECK(hermiticity_deviation(s[i]) == 0.0);
    }
    // sigma_x sigma_y = i sigma_z
    Mat2c xy = s[0] * s[1];
    Mat2c iz = cplx(0.0, 1.0) * s[2];
    CHECK(max_abs_diff(xy, iz) < 1e-15);
}

TEST_CASE("pauli orthogonality over all 9x9 tensor pairs") {
    // Tr[(sigma_i x sigma_j)(sigma_k x sigma_l)] = 4 delta_ik delta_jl
    const auto& s = pauli();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    Mat4c prod = kron(s[i], s[j]) * kron(s[k], s[l]);
                    double expected = (i == k && j == l) ? 4.0 : 0.0;
                    CHECK(std::abs(trace(prod) - cplx(expected)) < 1e-14);
                }
}

TEST_CASE("kron follows the |00>,|01>,|10>,|11> ordering with particle a first") {
    // sigma_z x I is diag(1, 1, -1, -1) in this ordering.
    Mat4c za = kron(pauli()[2], Mat2c::identity());
    CHECK(za(0, 0) == cplx(1.0));
    CHECK(za(1, 1) == cplx(1.0));
    CHECK(za(2, 2) == cplx(-1.0));
    CHECK(za(3, 3) == cplx(-1.0));
    Mat4c zb = kron(Mat2c::identity(), pauli()[2]);
    CHECK(zb(1, 1) == cplx(-1.0));
    CHECK(zb(2, 2) == cplx(1.0));
}

TEST_CASE("hermitian eigenvalues: fixed 2x2 and 4x4 cases") {
    Mat2c m;
    m(0, 0) = 2.0;
    m(1, 1) = 0.0;
    m(0, 1) = cplx(0.0, 1.0);
    m(1, 0) = cplx(0.0, -1.0);
    // eigenvalues of [[2, i], [-i, 0]]: 1 +/- sqrt(2)
    auto ev2 = hermitian_eigenvalues(m);
    CHECK(ev2[0] == Catch::Approx(1.0 - std::sqrt(2.0)).margin(1e-13));
    CHECK(ev2[1] == Catch::Approx(1.0 + std::sqrt(2.0)).margin(1e-13));

    // sigma_x x sigma_x has eigenvalues {-1, -1, 1, 1}.
    auto ev4 = hermitian_eigenvalues(kron(pauli()[0], pauli()[0]));
    CHECK(ev4[0] == Catch::Approx(-1.0).margin(1e-13));
    CHECK(ev4[1] == Catch::Approx(-1.0).margin(1e-13));
    CHECK(ev4[2] == Catch::Approx(1.0).margin(1e-13));
    CHECK(ev4[3] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("hermitian eigenvalues: trace and square-sum agree on random matrices") {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        CounterRng rng(seed, 1);
        Mat4c h;
        for (int i = 0; i < 4; ++i) {
            auto [re, im] = rng.gaussian_pair();
            h(i, i) = re;
            (void)im;
            for (int j = i + 1; j < 4; ++j) {
                auto [x, y] = rng.gaussian_pair();
                h(i, j) = cplx(x, y);
                h(j, i) = cplx(x, -y);
            }
        }
        auto ev = hermitian_eigenvalues(h);
        double tr = trace(h).real();
        double tr2 = trace(h * h).real();
        double sum = 0.0, sum2 = 0.0;
        for (double l : ev) {
            sum += l;
            sum2 += l * l;
        }
        CHECK(sum == Catch::Approx(tr).margin(1e-11));
        CHECK(sum2 == Catch::Approx(tr2).margin(1e-10));
    }
}

TEST_CASE("counter rng is reproducible and stream-separated") {
    CounterRng a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 16; ++i) {
        uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
}

TEST_CASE("random rotations are orthogonal with determinant one") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        CounterRng rng(seed, 7);
        Mat3 r = rng.rotation();
        Mat3 should_be_id = transpose(r) * r;
        CHECK(max_abs_diff(should_be_id, Mat3::identity()) < 1e-12);
        double det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
                     r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
                     r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
        CHECK(det == Catch::Approx(1.0).margin(1e-12));
    }
}

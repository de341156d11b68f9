#include <catch2/catch_amalgamated.hpp>

#include "chsh/engine.hpp"
#include "chsh/states.hpp"
#include "helpers.hpp"

using namespace chsh;

namespace {

const double kSqrt2 = std::sqrt(2.0);

MeasurementSettings random_settings(uint64_t seed) {
    CounterRng rng(seed, 11);
    return {rng.unit_vector(), rng.unit_vector(), rng.unit_vector(), rng.unit_vector()};
}

Mat3 diag3(double a, double b, double c) {
    Mat3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

}  // namespace

TEST_CASE("t_vector: parallel a-side collapses to a single outer product") {
    MeasurementSettings s{kE3, kE3, kE3, kE1};
    TVector t = t_vector(s);
    CHECK(t.t[8] == Catch::Approx(2.0));  // T_33
    double off = 0.0;
    for (int i = 0; i < 8; ++i) off += std::abs(t.t[i]);
    CHECK(off == 0.0);
}

TEST_CASE("t_vector: expanded components for a mixed setting") {
    Vec3 diag = normalized(Vec3{1.0, 0.0, 1.0});
    MeasurementSettings s{kE1, kE3, diag, diag};
    TVector t = t_vector(s);
    CHECK(t.t[0] == Catch::Approx(kSqrt2).margin(1e-15));  // T_11
    CHECK(t.t[2] == Catch::Approx(kSqrt2).margin(1e-15));  // T_13
    CHECK(t.t[6] == Catch::Approx(0.0).margin(1e-15));     // T_31
    CHECK(t.t[8] == Catch::Approx(0.0).margin(1e-15));     // T_33
    CHECK(t.norm() == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("t_vector norm is 2 for 10^4 random settings") {
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 10000; ++seed) {
        double n = t_vector(random_settings(seed)).norm();
        worst = std::max(worst, std::abs(n - 2.0));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("closed-form pure-state optimum attains 2 sqrt(1 + 4 k1^2 k2^2)") {
    BlochDecomposition bell = decompose_bloch(bell_state(StateFamily::bell_psi_plus));
    MeasurementSettings opt = pure_state_optimal_settings(1.0, 1.0);
    CHECK(chsh_value(bell, opt) == Catch::Approx(2.0 * kSqrt2).margin(1e-12));

    BlochDecomposition skew = decompose_bloch(pure_01_10(0.6, 0.8));
    MeasurementSettings opt2 = pure_state_optimal_settings(0.6, 0.8);
    CHECK(chsh_value(skew, opt2) == Catch::Approx(2.0 * std::sqrt(1.9216)).margin(1e-10));
}

TEST_CASE("chsh_value: zero correlations, Bell optimum, Werner linearity") {
    BlochDecomposition zero;
    CHECK(chsh_value(zero, random_settings(5)) == 0.0);

    MeasurementSettings opt = pure_state_optimal_settings(1.0, 1.0);
    BlochDecomposition w = decompose_bloch(werner(0.5));
    CHECK(chsh_value(w, opt) == Catch::Approx(kSqrt2).margin(1e-12));
}

TEST_CASE("dual path: beta.T equals the trace of the assembled CHSH operator") {
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 300; ++seed) {
        DensityMatrix rho = chsh_test::random_state(seed);
        MeasurementSettings s = random_settings(seed + 9000);
        double via_t = chsh_value(decompose_bloch(rho), s);
        double via_op = operator_expectation(rho, chsh_operator(s));
        worst = std::max(worst, std::abs(via_t - via_op));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("g_value fixed points") {
    BlochDecomposition bell = decompose_bloch(bell_state(StateFamily::bell_psi_plus));
    CHECK(g_value(bell, {kE3, kE3}) == Catch::Approx(-2.0).margin(1e-12));
    CHECK(g_value(bell, {kE3, -kE3}) == Catch::Approx(2.0).margin(1e-12));
    BlochDecomposition zero;
    CHECK(g_value(zero, {kE1, kE2}) == 0.0);
}

TEST_CASE("f_max_analytic: pure family, Werner, degenerate zero") {
    BlochDecomposition skew = decompose_bloch(pure_01_10(0.6, 0.8));
    FMaxResult f = f_max_analytic(skew);
    CHECK(f.value == Catch::Approx(2.0 * std::sqrt(1.9216)).margin(1e-12));
    CHECK(chsh_value(skew, f.settings) == Catch::Approx(f.value).margin(1e-9));

    FMaxResult fw = f_max_analytic(decompose_bloch(werner(0.5)));
    CHECK(fw.value == Catch::Approx(kSqrt2).margin(1e-12));

    FMaxResult f0 = f_max_analytic(BlochDecomposition{});
    CHECK(f0.value == 0.0);
    CHECK(norm(f0.settings.n) == 1.0);
}

TEST_CASE("g_max_analytic: pure states reach 2, Werner reaches 2 alpha") {
    for (auto fam : {StateFamily::bell_psi_plus, StateFamily::bell_phi_minus}) {
        GMaxResult g = g_max_analytic(decompose_bloch(bell_state(fam)));
        CHECK(g.value == Catch::Approx(2.0).margin(1e-12));
    }
    BlochDecomposition skew = decompose_bloch(pure_01_10(0.3, std::sqrt(1.0 - 0.09)));
    GMaxResult gs = g_max_analytic(skew);
    CHECK(gs.value == Catch::Approx(2.0).margin(1e-12));
    CHECK(g_value(skew, gs.settings) == Catch::Approx(gs.value).margin(1e-9));

    GMaxResult gw = g_max_analytic(decompose_bloch(werner(0.4)));
    CHECK(gw.value == Catch::Approx(0.8).margin(1e-12));

    CHECK(g_max_analytic(BlochDecomposition{}).value == 0.0);
}

TEST_CASE("entanglement degree: Bell states, Werner, pure family") {
    for (auto fam : {StateFamily::bell_psi_plus, StateFamily::bell_psi_minus,
                     StateFamily::bell_phi_plus, StateFamily::bell_phi_minus}) {
        CHECK(entanglement_degree(decompose_bloch(bell_state(fam))) ==
              Catch::Approx(1.0).margin(1e-12));
    }
    CHECK(entanglement_degree(decompose_bloch(werner(0.7))) == Catch::Approx(0.7).margin(1e-12));
    CHECK(entanglement_degree(decompose_bloch(pure_01_10(0.6, 0.8))) ==
          Catch::Approx(0.96).margin(1e-12));
}

TEST_CASE("entanglement degree equals the defining F/G difference and s2") {
    for (uint64_t seed = 0; seed < 300; ++seed) {
        BlochDecomposition d = decompose_bloch(chsh_test::random_state(seed));
        double f = f_max_analytic(d).value;
        double g = g_max_analytic(d).value;
        double via_difference = std::sqrt(std::max(0.0, 0.25 * f * f - 0.25 * g * g));
        double p = entanglement_degree(d);
        CHECK(p == Catch::Approx(via_difference).margin(1e-9));
        CHECK(p == Catch::Approx(svd_3x3(d.beta).s[1]).margin(1e-9));
    }
}

TEST_CASE("commutator vectors") {
    // Bell optimum: both sides maximally noncommuting.
    BlochDecomposition bell = decompose_bloch(bell_state(StateFamily::bell_psi_plus));
    auto [xb, yb] = commutator_vectors(f_max_analytic(bell).settings);
    CHECK(norm(xb) == Catch::Approx(1.0).margin(1e-12));
    CHECK(norm(yb) == Catch::Approx(1.0).margin(1e-12));

    // Factorizable pure state: the b-side of the optimum commutes.
    BlochDecomposition fact = decompose_bloch(pure_01_10(1.0, 0.0));
    auto [xf, yf] = commutator_vectors(f_max_analytic(fact).settings);
    CHECK(norm(yf) <= 1e-12);
    (void)xf;

    // Parallel a-side directions always commute.
    auto [xp, yp] = commutator_vectors({kE3, kE3, kE1, kE2});
    CHECK(norm(xp) == 0.0);
    (void)yp;
}

TEST_CASE("closed-form settings reproduce the commutator norms of the pure family") {
    for (double k1 : {0.3, 0.6, 0.9}) {
        double k2 = std::sqrt(1.0 - k1 * k1);
        auto [x, y] = commutator_vectors(pure_state_optimal_settings(k1, k2));
        double prod = k1 * k2;
        CHECK(norm(x) == Catch::Approx(1.0).margin(1e-10));
        CHECK(norm(y) ==
              Catch::Approx(4.0 * std::abs(prod) / (1.0 + 4.0 * prod * prod)).margin(1e-10));
    }
    CHECK_THROWS_AS(pure_state_optimal_settings(1.0, 0.0), FactorizableStateError);
}

TEST_CASE("geometric identity: Werner, skewed pure state, product state") {
    ChshReport w = classify(werner(0.6));
    GeometricResiduals gw = geometric_identity(w);
    CHECK(gw.xy_product == Catch::Approx(1.0).margin(1e-12));
    CHECK(gw.ratio_form == Catch::Approx(1.0).margin(1e-12));
    CHECK(gw.r1 <= 1e-12);
    CHECK(gw.r2 <= 1e-12);

    ChshReport p = classify(pure_01_10(0.6, 0.8));
    GeometricResiduals gp = geometric_identity(p);
    CHECK(gp.ratio_form == Catch::Approx(7.68 / 7.6864).margin(1e-12));
    CHECK(gp.r1 <= 1e-10);
    CHECK(gp.r2 <= 1e-10);

    // product state: P_E = 0 and |Y| = 0, so both sides vanish
    ChshReport prod = classify(product_state({0.0, 0.3, 0.4}, {0.5, 0.0, 0.1}));
    GeometricResiduals gprod = geometric_identity(prod);
    CHECK(gprod.xy_product <= 1e-12);
    CHECK(gprod.ratio_form <= 1e-12);

    ChshReport mixed = classify(werner(0.0));
    CHECK_THROWS_AS(geometric_identity(mixed), DegenerateStateError);
}

TEST_CASE("classify: Werner(0.2), basis state, maximally mixed") {
    ChshReport w = classify(werner(0.2));
    CHECK(w.entangled);
    CHECK(w.p_e == Catch::Approx(0.2).margin(1e-12));
    CHECK(w.beta_rank == 3);

    ChshReport basis = classify(pure_density({cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0)}));
    CHECK_FALSE(basis.entangled);
    CHECK(basis.beta_rank == 1);
    CHECK(basis.p_e <= 1e-9);

    ChshReport mixed = classify(werner(0.0));
    CHECK_FALSE(mixed.entangled);
    CHECK(mixed.beta_rank == 0);
}

TEST_CASE("classification equivalence: p_e threshold matches rank <= 1") {
    CounterRng rng(99, 21);
    for (int trial = 0; trial < 50; ++trial) {
        // rank 1
        BlochDecomposition d1;
        d1.beta = 0.8 * outer(rng.unit_vector(), rng.unit_vector());
        ChshReport r1 = classify(reconstruct_density(d1));
        CHECK(r1.beta_rank <= 1);
        CHECK(r1.p_e <= 1e-9);
        CHECK_FALSE(r1.entangled);

        // rank 2
        Mat3 core = diag3(0.2 + 0.2 * rng.uniform(), 0.15 + 0.1 * rng.uniform(), 0.0);
        BlochDecomposition d2;
        d2.beta = rng.rotation() * core * transpose(rng.rotation());
        ChshReport r2 = classify(reconstruct_density(d2));
        CHECK(r2.beta_rank == 2);
        CHECK(r2.p_e > 1e-6);
        CHECK(r2.entangled);
    }
}

TEST_CASE("report invariants on random states") {
    for (uint64_t seed = 0; seed < 500; ++seed) {
        ChshReport r = classify(chsh_test::random_state(seed));
        CHECK(r.f_max <= 2.0 * kSqrt2 + 1e-9);
        CHECK(r.f_max >= r.g_max - 1e-9);
        CHECK(r.g_max >= 0.0);
        CHECK(r.p_e >= 0.0);
        CHECK(r.p_e <= 1.0 + 1e-9);
        CHECK(r.p_e * r.p_e ==
              Catch::Approx(0.25 * (r.f_max * r.f_max - r.g_max * r.g_max)).margin(1e-9));
        double beta_norm = std::sqrt(r.singular_values[0] * r.singular_values[0] +
                                     r.singular_values[1] * r.singular_values[1] +
                                     r.singular_values[2] * r.singular_values[2]);
        if (beta_norm > 1e-12) {
            CHECK(std::cos(r.gamma) == Catch::Approx(r.f_max / (2.0 * beta_norm)).margin(1e-9));
            CHECK(std::cos(r.delta) == Catch::Approx(r.g_max / (2.0 * beta_norm)).margin(1e-9));
        }
        // noncommutativity at the optimum for entangled states
        if (r.p_e > 1e-6) {
            CHECK(norm(r.x_vec) > 0.1);
            CHECK(norm(r.y_vec) > 1e-6);
        }
    }
}

TEST_CASE("local-unitary invariance of f_max, g_max, p_e") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
        BlochDecomposition d = decompose_bloch(chsh_test::random_state(seed));
        CounterRng rng(seed, 31);
        Mat3 ra = rng.rotation();
        Mat3 rb = rng.rotation();
        BlochDecomposition rotated{ra * d.u, rb * d.v, ra * d.beta * transpose(rb)};
        CHECK(f_max_analytic(rotated).value ==
              Catch::Approx(f_max_analytic(d).value).margin(1e-9));
        CHECK(g_max_analytic(rotated).value ==
              Catch::Approx(g_max_analytic(d).value).margin(1e-9));
        CHECK(entanglement_degree(rotated) == Catch::Approx(entanglement_degree(d)).margin(1e-9));
    }
}

TEST_CASE("inequality report: pure state, Werner(0.2), product state") {
    InequalityReport pure = inequality_report(bell_state(StateFamily::bell_phi_plus));
    CHECK(pure.g_max == Catch::Approx(2.0).margin(1e-12));
    CHECK(pure.violation);

    InequalityReport w = inequality_report(werner(0.2));
    CHECK(w.f_max == Catch::Approx(0.4 * kSqrt2).margin(1e-12));
    CHECK(w.g_max == Catch::Approx(0.4).margin(1e-12));
    CHECK(w.violation);
    CHECK(w.f_max < 2.0);  // the plain CHSH bound is not violated
    CHECK(w.residual <= 1e-9);

    InequalityReport prod = inequality_report(product_state({0.0, 0.0, 1.0}, {0.0, 0.0, -1.0}));
    CHECK_FALSE(prod.violation);
    CHECK(prod.residual <= 1e-9);
}

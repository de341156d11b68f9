// chsh-meter: analyze two-qubit states through the CHSH/Bell framework.
//
// Subcommands: analyze, sweep, verify, simulate. Data goes to stdout,
// diagnostics to stderr. Exit codes: 0 success, 1 verification/internal
// failure, 2 invalid input, 3 unphysical state.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "chsh/density.hpp"
#include "chsh/engine.hpp"
#include "chsh/oracle.hpp"
#include "chsh/shots.hpp"
#include "chsh/states.hpp"
#include "chsh/version.hpp"

using nlohmann::json;
using namespace chsh;

namespace {

// ---------------------------------------------------------------------------
// formatting helpers
// ---------------------------------------------------------------------------

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string fmt_vec(const Vec3& v) {
    return "(" + fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z) + ")";
}

Vec3 parse_vec3(const std::string& text) {
    Vec3 v;
    char extra;
    std::istringstream in(text);
    char c1 = 0, c2 = 0;
    if (!(in >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',' || (in >> extra))
        throw InvalidParameterError("expected a comma-separated triple, got '" + text + "'");
    return v;
}

// ---------------------------------------------------------------------------
// state specification parsing
// ---------------------------------------------------------------------------

Mat4c matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.size() != 4)
        throw InvalidParameterError("matrix must have 4 rows");
    Mat4c m;
    for (int i = 0; i < 4; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != 4)
            throw InvalidParameterError("matrix row " + std::to_string(i) +
                                        " must have 4 entries");
        for (int j = 0; j < 4; ++j) {
            const json& entry = row[j];
            if (entry.is_number()) {
                m(i, j) = cplx(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2) {
                m(i, j) = cplx(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw InvalidParameterError("matrix entry (" + std::to_string(i) + "," +
                                            std::to_string(j) +
                                            ") must be a number or [re, im] pair");
            }
        }
    }
    return m;
}

json matrix_to_json(const Mat4c& m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

StateSpec spec_from_json(const json& doc) {
    StateSpec spec;
    if (doc.contains("matrix")) {
        spec.family = StateFamily::explicit_matrix;
        spec.matrix = matrix_from_json(doc.at("matrix"));
        return spec;
    }
    if (!doc.contains("family"))
        throw InvalidParameterError("state file needs a 'family' or 'matrix' field");
    std::string name = doc.at("family").get<std::string>();
    auto family = family_from_name(name);
    if (!family) throw InvalidParameterError("unknown state family '" + name + "'");
    spec.family = *family;
    json params = doc.value("params", json::object());
    spec.k1 = params.value("k1", 0.0);
    spec.k2 = params.value("k2", 0.0);
    spec.alpha = params.value("alpha", 0.0);
    spec.seed = params.value("seed", 0ULL);
    spec.size = params.value("size", 4);
    if (params.contains("u")) {
        auto u = params.at("u").get<std::vector<double>>();
        if (u.size() != 3) throw InvalidParameterError("'u' must have 3 components");
        spec.u = {u[0], u[1], u[2]};
    }
    if (params.contains("v")) {
        auto v = params.at("v").get<std::vector<double>>();
        if (v.size() != 3) throw InvalidParameterError("'v' must have 3 components");
        spec.v = {v[0], v[1], v[2]};
    }
    return spec;
}

json spec_to_json(const StateSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    json params = json::object();
    switch (spec.family) {
        case StateFamily::pure_01_10:
        case StateFamily::pure_00_11:
            params["k1"] = spec.k1;
            params["k2"] = spec.k2;
            break;
        case StateFamily::werner:
            params["alpha"] = spec.alpha;
            break;
        case StateFamily::product:
            params["u"] = {spec.u.x, spec.u.y, spec.u.z};
            params["v"] = {spec.v.x, spec.v.y, spec.v.z};
            break;
        case StateFamily::random_mixed:
            params["seed"] = spec.seed;
            params["size"] = spec.size;
            break;
        default:
            break;
    }
    if (!params.empty()) j["params"] = params;
    return j;
}

// Shared CLI flags describing an input state.
struct StateArgs {
    std::string input_path;
    std::string family;
    std::string which;  // bell variant
    double k1 = 0.0, k2 = 0.0;
    double alpha = 0.0;
    std::string u_text, v_text;
    uint64_t state_seed = 0;
    int size = 4;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input,--matrix-file", input_path,
                        "JSON state file ({\"family\": ...} or {\"matrix\": ...})");
        cmd->add_option("--family", family, "state family name");
        cmd->add_option("--which", which,
                        "bell variant: psi_plus, psi_minus, phi_plus, phi_minus");
        cmd->add_option("--k1", k1, "first amplitude for pure families");
        cmd->add_option("--k2", k2, "second amplitude for pure families");
        cmd->add_option("--alpha", alpha, "werner mixing parameter in [0, 1]");
        cmd->add_option("--u", u_text, "Bloch vector of particle a, e.g. 0,0,1");
        cmd->add_option("--v", v_text, "Bloch vector of particle b");
        cmd->add_option("--state-seed", state_seed, "seed for random_mixed");
        cmd->add_option("--size", size, "mixture size for random_mixed");
    }

    StateSpec resolve() const {
        if (!input_path.empty()) {
            std::ifstream in(input_path);
            if (!in) throw InvalidParameterError("cannot open state file '" + input_path + "'");
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw InvalidParameterError("failed to parse '" + input_path +
                                            "': " + e.what());
            }
            return spec_from_json(doc);
        }
        if (family.empty())
            throw InvalidParameterError("give either --input/--matrix-file or --family");
        std::string name = family;
        if (name == "bell") {
            if (which.empty())
                throw InvalidParameterError("--family bell needs --which (e.g. psi_plus)");
            name = "bell_" + which;
        }
        auto fam = family_from_name(name);
        if (!fam) throw InvalidParameterError("unknown state family '" + name + "'");
        StateSpec spec;
        spec.family = *fam;
        spec.k1 = k1;
        spec.k2 = k2;
        spec.alpha = alpha;
        if (!u_text.empty()) spec.u = parse_vec3(u_text);
        if (!v_text.empty()) spec.v = parse_vec3(v_text);
        spec.seed = state_seed;
        spec.size = size;
        if ((spec.family == StateFamily::pure_01_10 || spec.family == StateFamily::pure_00_11) &&
            k1 == 0.0 && k2 == 0.0)
            throw InvalidParameterError("pure families need --k1/--k2");
        return spec;
    }
};

// ---------------------------------------------------------------------------
// analysis document
// ---------------------------------------------------------------------------

json settings_f_to_json(const MeasurementSettings& s) {
    return {{"n", {s.n.x, s.n.y, s.n.z}},
            {"n_prime", {s.n_prime.x, s.n_prime.y, s.n_prime.z}},
            {"m", {s.m.x, s.m.y, s.m.z}},
            {"m_prime", {s.m_prime.x, s.m_prime.y, s.m_prime.z}}};
}

json report_to_json(const ChshReport& r) {
    json j;
    j["f_max"] = r.f_max;
    j["g_max"] = r.g_max;
    j["p_e"] = r.p_e;
    j["singular_values"] = {r.singular_values[0], r.singular_values[1], r.singular_values[2]};
    j["gamma"] = r.gamma;
    j["delta"] = r.delta;
    j["eta"] = r.eta;
    j["x_vec"] = {r.x_vec.x, r.x_vec.y, r.x_vec.z};
    j["y_vec"] = {r.y_vec.x, r.y_vec.y, r.y_vec.z};
    j["x_norm"] = norm(r.x_vec);
    j["y_norm"] = norm(r.y_vec);
    j["beta_rank"] = r.beta_rank;
    j["entangled"] = r.entangled;
    j["settings_f"] = settings_f_to_json(r.settings_f);
    j["settings_g"] = {{"l", {r.settings_g.l.x, r.settings_g.l.y, r.settings_g.l.z}},
                       {"h", {r.settings_g.h.x, r.settings_g.h.y, r.settings_g.h.z}}};
    j["violates_chsh"] = r.f_max > 2.0 + 1e-9;
    j["violates_generalized"] = r.f_max > r.g_max + 1e-9;
    j["max_violation_residual"] = std::abs(r.f_max - 2.0 * std::hypot(r.g_max / 2.0, r.p_e));
    if (r.f_max > 1e-12) {
        GeometricResiduals geo = geometric_identity(r);
        j["geometric_identity"] = {{"xy_product", geo.xy_product},
                                   {"ratio_form", geo.ratio_form},
                                   {"sin_2eta", geo.sine_form},
                                   {"r1", geo.r1},
                                   {"r2", geo.r2}};
    }
    return j;
}

struct AnalyzeOutput {
    json document;
    StateSpec spec;
    BlochDecomposition bloch;
    ChshReport report;
};

AnalyzeOutput analyze_state(const StateSpec& spec, uint64_t seed) {
    AnalyzeOutput out;
    out.spec = spec;
    DensityMatrix rho = build(spec);
    out.bloch = decompose_bloch(rho);
    out.report = classify(rho);

    json doc;
    doc["tool"] = {{"name", "chsh-meter"}, {"version", kVersion}};
    doc["seed"] = seed;
    doc["input"] = spec_to_json(spec);
    doc["matrix"] = matrix_to_json(rho.matrix());
    json beta = json::array();
    for (int i = 0; i < 3; ++i)
        beta.push_back({out.bloch.beta(i, 0), out.bloch.beta(i, 1), out.bloch.beta(i, 2)});
    doc["bloch"] = {{"u", {out.bloch.u.x, out.bloch.u.y, out.bloch.u.z}},
                    {"v", {out.bloch.v.x, out.bloch.v.y, out.bloch.v.z}},
                    {"beta", beta}};
    doc["report"] = report_to_json(out.report);
    out.document = doc;
    return out;
}

void print_report_table(const AnalyzeOutput& out) {
    const ChshReport& r = out.report;
    const BlochDecomposition& d = out.bloch;
    std::cout << "state: " << family_name(out.spec.family) << "\n";
    std::cout << "u = " << fmt_vec(d.u) << "   v = " << fmt_vec(d.v) << "\n";
    std::cout << "beta =\n";
    for (int i = 0; i < 3; ++i) {
        std::cout << "  [";
        for (int j = 0; j < 3; ++j) std::cout << " " << fmt(d.beta(i, j));
        std::cout << " ]\n";
    }
    std::cout << "singular values: " << fmt(r.singular_values[0]) << " "
              << fmt(r.singular_values[1]) << " " << fmt(r.singular_values[2]) << "\n";
    std::cout << "F_max = " << fmt(r.f_max) << "\n";
    std::cout << "G_max = " << fmt(r.g_max) << "\n";
    std::cout << "P_E   = " << fmt(r.p_e) << "\n";
    std::cout << "gamma = " << fmt(r.gamma) << "  delta = " << fmt(r.delta)
              << "  eta = " << fmt(r.eta) << "\n";
    std::cout << "|X| = " << fmt(norm(r.x_vec)) << "  |Y| = " << fmt(norm(r.y_vec)) << "\n";
    std::cout << "rank(beta_M) = " << r.beta_rank << "\n";
    std::cout << "entangled: " << (r.entangled ? "yes" : "no") << "\n";
    std::cout << "violates |F| <= 2: " << (r.f_max > 2.0 + 1e-9 ? "yes" : "no")
              << "   violates F <= G_max: " << (r.f_max > r.g_max + 1e-9 ? "yes" : "no") << "\n";
    std::cout << "settings F: n = " << fmt_vec(r.settings_f.n)
              << "  n' = " << fmt_vec(r.settings_f.n_prime) << "\n";
    std::cout << "            m = " << fmt_vec(r.settings_f.m)
              << "  m' = " << fmt_vec(r.settings_f.m_prime) << "\n";
    std::cout << "settings G: l = " << fmt_vec(r.settings_g.l)
              << "  h = " << fmt_vec(r.settings_g.h) << "\n";
}

void print_report_csv(const AnalyzeOutput& out) {
    const ChshReport& r = out.report;
    std::cout << "family,f_max,g_max,p_e,s1,s2,s3,gamma,delta,eta,x_norm,y_norm,beta_rank,"
                 "entangled,violates_chsh,violates_generalized\n";
    std::cout << family_name(out.spec.family) << "," << fmt17(r.f_max) << "," << fmt17(r.g_max)
              << "," << fmt17(r.p_e) << "," << fmt17(r.singular_values[0]) << ","
              << fmt17(r.singular_values[1]) << "," << fmt17(r.singular_values[2]) << ","
              << fmt17(r.gamma) << "," << fmt17(r.delta) << "," << fmt17(r.eta) << ","
              << fmt17(norm(r.x_vec)) << "," << fmt17(norm(r.y_vec)) << "," << r.beta_rank << ","
              << (r.entangled ? "true" : "false") << ","
              << (r.f_max > 2.0 + 1e-9 ? "true" : "false") << ","
              << (r.f_max > r.g_max + 1e-9 ? "true" : "false") << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_analyze(const StateArgs& state, const std::string& format,
                const std::string& report_path, bool with_oracle, const OptimizerConfig& ocfg,
                long long shots, uint64_t seed) {
    AnalyzeOutput out = analyze_state(state.resolve(), seed);

    if (with_oracle) {
        OptimizerConfig cfg = ocfg;
        cfg.seed = seed;
        FOptimizationResult f = maximize_f(out.bloch, cfg);
        GOptimizationResult g = maximize_g(out.bloch, cfg);
        out.document["oracle"] = {{"restarts", cfg.restarts},
                                  {"max_iterations", cfg.max_iterations},
                                  {"convergence_tol", cfg.convergence_tol},
                                  {"seed", cfg.seed},
                                  {"f_value", f.value},
                                  {"f_delta", std::abs(f.value - out.report.f_max)},
                                  {"g_value", g.value},
                                  {"g_delta", std::abs(g.value - out.report.g_max)}};
    }
    if (shots > 0) {
        DensityMatrix rho = build(out.spec);
        ChshEstimate est = estimate_chsh(rho, out.report.settings_f, shots, seed);
        json terms = json::array();
        for (const ShotEstimate& t : est.terms)
            terms.push_back(
                {{"mean", t.mean}, {"standard_error", t.standard_error}, {"seed", t.seed}});
        out.document["shots"] = {{"shots_per_term", shots},
                                 {"seed", seed},
                                 {"estimate", est.value},
                                 {"standard_error", est.standard_error},
                                 {"analytic", out.report.f_max},
                                 {"terms", terms}};
    }

    if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw InvalidParameterError("cannot write report to '" + report_path + "'");
        f << out.document.dump(2) << "\n";
    }

    if (format == "json") {
        std::cout << out.document.dump(2) << "\n";
    } else if (format == "csv") {
        print_report_csv(out);
    } else {
        print_report_table(out);
        if (with_oracle) {
            const json& o = out.document["oracle"];
            std::cout << "oracle: F = " << fmt(o["f_value"].get<double>()) << " (delta "
                      << fmt(o["f_delta"].get<double>()) << "), G = "
                      << fmt(o["g_value"].get<double>()) << " (delta "
                      << fmt(o["g_delta"].get<double>()) << ")\n";
        }
        if (shots > 0) {
            const json& s = out.document["shots"];
            std::cout << "shots: CHSH = " << fmt(s["estimate"].get<double>()) << " +/- "
                      << fmt(s["standard_error"].get<double>()) << " (analytic "
                      << fmt(s["analytic"].get<double>()) << ", " << shots << "/term)\n";
        }
    }
    return 0;
}

int cmd_sweep(const std::string& family, double from, double to, double step,
              const std::string& output_path, const std::string& format) {
    auto fam = family_from_name(family);
    if (!fam || (*fam != StateFamily::werner && *fam != StateFamily::pure_01_10 &&
                 *fam != StateFamily::pure_00_11))
        throw InvalidParameterError("sweep supports werner, pure_01_10 and pure_00_11");
    if (step <= 0.0) throw InvalidParameterError("step must be positive");
    if (to < from - 1e-12) throw EmptyRangeError("sweep range is empty: to < from");
    bool is_werner = *fam == StateFamily::werner;
    const char* param = is_werner ? "alpha" : "k1";

    int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;

    struct Row {
        double value;
        ChshReport report;
    };
    std::vector<Row> rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        double x = from + i * step;
        StateSpec spec;
        spec.family = *fam;
        if (is_werner) {
            spec.alpha = std::min(std::max(x, 0.0), 1.0);
        } else {
            spec.k1 = std::min(std::max(x, 0.0), 1.0);
            spec.k2 = std::sqrt(std::max(0.0, 1.0 - spec.k1 * spec.k1));
            if (spec.k1 == 0.0) spec.k2 = 1.0;
        }
        rows.push_back({x, classify(build(spec))});
    }

    auto csv_line = [&](const Row& row) {
        std::ostringstream line;
        line << fmt17(row.value) << "," << fmt17(row.report.f_max) << ","
             << fmt17(row.report.g_max) << "," << fmt17(row.report.p_e) << ","
             << row.report.beta_rank << "," << (row.report.entangled ? "true" : "false");
        if (is_werner) line << "," << (row.value <= 1.0 / 3.0 + 1e-12 ? "true" : "false");
        return line.str();
    };
    std::string header = std::string(param) + ",f_max,g_max,p_e,beta_rank,entangled";
    if (is_werner) header += ",separable_per_cited_bound";

    if (!output_path.empty()) {
        std::ofstream f(output_path);
        if (!f) throw InvalidParameterError("cannot write table to '" + output_path + "'");
        f << header << "\n";
        for (const Row& row : rows) f << csv_line(row) << "\n";
    }

    if (format == "csv") {
        std::cout << header << "\n";
        for (const Row& row : rows) std::cout << csv_line(row) << "\n";
    } else if (format == "json") {
        json arr = json::array();
        for (const Row& row : rows) {
            json j = report_to_json(row.report);
            j[param] = row.value;
            arr.push_back(j);
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::printf("%-8s %-12s %-12s %-12s %-5s %-10s%s\n", param, "f_max", "g_max", "p_e",
                    "rank", "entangled", is_werner ? " separable<=1/3" : "");
        for (const Row& row : rows) {
            std::printf("%-8.4g %-12.8g %-12.8g %-12.8g %-5d %-10s%s\n", row.value,
                        row.report.f_max, row.report.g_max, row.report.p_e,
                        row.report.beta_rank, row.report.entangled ? "yes" : "no",
                        is_werner ? (row.value <= 1.0 / 3.0 + 1e-12 ? " yes" : " no") : "");
        }
    }
    return 0;
}

int cmd_verify(int count, uint64_t seed, double tolerance, const OptimizerConfig& ocfg) {
    if (count < 1) throw InvalidParameterError("count must be >= 1");

    double worst_f = 0.0, worst_g = 0.0, worst_r1 = 0.0, worst_r2 = 0.0;
    uint64_t worst_f_seed = 0, worst_g_seed = 0, worst_r_seed = 0;
    int failures = 0;

    for (int i = 0; i < count; ++i) {
        uint64_t state_seed = seed + static_cast<uint64_t>(i);
        DensityMatrix rho = random_mixed(state_seed, 2 + i % 7);
        ChshReport report = classify(rho);
        BlochDecomposition d = decompose_bloch(rho);

        OptimizerConfig cfg = ocfg;
        cfg.seed = state_seed;
        double df = std::abs(maximize_f(d, cfg).value - report.f_max);
        double dg = std::abs(maximize_g(d, cfg).value - report.g_max);
        if (df > worst_f) {
            worst_f = df;
            worst_f_seed = state_seed;
        }
        if (dg > worst_g) {
            worst_g = dg;
            worst_g_seed = state_seed;
        }
        bool bad = df > tolerance || dg > tolerance;

        if (report.f_max > 1e-6) {
            GeometricResiduals geo = geometric_identity(report);
            if (geo.r1 > worst_r1 || geo.r2 > worst_r2) worst_r_seed = state_seed;
            worst_r1 = std::max(worst_r1, geo.r1);
            worst_r2 = std::max(worst_r2, geo.r2);
            bad = bad || geo.r1 > tolerance || geo.r2 > tolerance;
        }
        if (bad) {
            ++failures;
            std::cerr << "verify: state seed " << state_seed << " exceeded tolerance (|dF| = "
                      << fmt(df) << ", |dG| = " << fmt(dg) << ")\n";
        }
    }

    std::cout << "states checked:              " << count << "\n";
    std::cout << "worst |oracle - analytic| F: " << fmt(worst_f) << " (seed " << worst_f_seed
              << ")\n";
    std::cout << "worst |oracle - analytic| G: " << fmt(worst_g) << " (seed " << worst_g_seed
              << ")\n";
    std::cout << "worst geometric residual r1: " << fmt(worst_r1) << "\n";
    std::cout << "worst geometric residual r2: " << fmt(worst_r2) << " (seed " << worst_r_seed
              << ")\n";
    std::cout << "tolerance:                   " << fmt(tolerance) << "\n";
    std::cout << (failures == 0 ? "PASS" : "FAIL") << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_simulate(const StateArgs& state, bool optimal_f, const std::string& n_text,
                 const std::string& np_text, const std::string& m_text,
                 const std::string& mp_text, long long shots, uint64_t seed,
                 const std::string& format) {
    StateSpec spec = state.resolve();
    DensityMatrix rho = build(spec);
    BlochDecomposition d = decompose_bloch(rho);

    MeasurementSettings settings;
    if (optimal_f) {
        settings = f_max_analytic(d).settings;
    } else {
        if (n_text.empty() || np_text.empty() || m_text.empty() || mp_text.empty())
            throw InvalidParameterError(
                "simulate needs --optimal-f or all of --n/--n-prime/--m/--m-prime");
        settings = {normalized(parse_vec3(n_text)), normalized(parse_vec3(np_text)),
                    normalized(parse_vec3(m_text)), normalized(parse_vec3(mp_text))};
    }

    ChshEstimate est = estimate_chsh(rho, settings, shots, seed);
    double analytic = chsh_value(d, settings);

    if (format == "json") {
        json terms = json::array();
        for (const ShotEstimate& t : est.terms)
            terms.push_back(
                {{"mean", t.mean}, {"standard_error", t.standard_error}, {"seed", t.seed}});
        json doc = {{"tool", {{"name", "chsh-meter"}, {"version", kVersion}}},
                    {"input", spec_to_json(spec)},
                    {"settings", settings_f_to_json(settings)},
                    {"shots_per_term", shots},
                    {"seed", seed},
                    {"estimate", est.value},
                    {"standard_error", est.standard_error},
                    {"analytic", analytic},
                    {"terms", terms}};
        std::cout << doc.dump(2) << "\n";
        return 0;
    }

    const char* names[4] = {"E(A ,B )", "E(A ,B')", "E(A',B )", "E(A',B')"};
    std::cout << "state: " << family_name(spec.family) << ", " << shots << " shots per term\n";
    for (int i = 0; i < 4; ++i)
        std::cout << names[i] << " = " << fmt(est.terms[i].mean) << " +/- "
                  << fmt(est.terms[i].standard_error) << "\n";
    std::cout << "CHSH estimate = " << fmt(est.value) << " +/- " << fmt(est.standard_error)
              << "\n";
    std::cout << "analytic value at these settings = " << fmt(analytic) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH/Bell analysis of two-qubit density matrices"};
    app.require_subcommand(1);

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "full analytic report for one state");
    StateArgs analyze_state_args;
    analyze_state_args.attach(analyze);
    std::string analyze_format = "table";
    std::string report_path;
    bool with_oracle = false;
    long long analyze_shots = 0;
    uint64_t analyze_seed = 0;
    OptimizerConfig analyze_cfg;
    analyze->add_option("--format", analyze_format, "table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    analyze->add_option("--report", report_path, "also write the JSON document here");
    analyze->add_flag("--with-oracle", with_oracle, "cross-check with the brute-force optimizer");
    analyze->add_option("--with-shots", analyze_shots, "add a shot section (shots per term)");
    analyze->add_option("--seed", analyze_seed, "seed for oracle/shot sections (default 0)");
    analyze->add_option("--restarts", analyze_cfg.restarts, "oracle restarts");
    analyze->add_option("--max-iterations", analyze_cfg.max_iterations, "oracle sweep limit");
    analyze->add_option("--opt-tol", analyze_cfg.convergence_tol, "oracle convergence tolerance");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "scan a one-parameter family");
    std::string sweep_family;
    double sweep_from = 0.0, sweep_to = 1.0, sweep_step = 0.1;
    std::string sweep_output;
    std::string sweep_format = "table";
    sweep->add_option("--family", sweep_family, "werner, pure_01_10 or pure_00_11")->required();
    sweep->add_option("--from", sweep_from, "first parameter value")->required();
    sweep->add_option("--to", sweep_to, "last parameter value")->required();
    sweep->add_option("--step", sweep_step, "parameter increment")->required();
    sweep->add_option("--output", sweep_output, "write the rows as CSV to this file");
    sweep->add_option("--format", sweep_format, "table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "oracle-vs-analytic checks on random states");
    int verify_count = 500;
    uint64_t verify_seed = 0;
    double verify_tolerance = 1e-7;
    OptimizerConfig verify_cfg;
    verify->add_option("--count", verify_count, "number of random states (default 500)");
    verify->add_option("--seed", verify_seed, "base seed (default 0)");
    verify->add_option("--tolerance", verify_tolerance, "pass threshold (default 1e-7)");
    verify->add_option("--restarts", verify_cfg.restarts, "oracle restarts");
    verify->add_option("--max-iterations", verify_cfg.max_iterations, "oracle sweep limit");
    verify->add_option("--opt-tol", verify_cfg.convergence_tol, "oracle convergence tolerance");

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "finite-shot CHSH estimate");
    StateArgs simulate_state_args;
    simulate_state_args.attach(simulate);
    bool optimal_f = false;
    std::string sim_n, sim_np, sim_m, sim_mp;
    long long sim_shots = 100000;
    uint64_t sim_seed = 0;
    std::string sim_format = "table";
    simulate->add_flag("--optimal-f", optimal_f, "measure at the analytic F-optimal settings");
    simulate->add_option("--n", sim_n, "a-side axis n as x,y,z");
    simulate->add_option("--n-prime", sim_np, "a-side axis n'");
    simulate->add_option("--m", sim_m, "b-side axis m");
    simulate->add_option("--m-prime", sim_mp, "b-side axis m'");
    simulate->add_option("--shots", sim_shots, "shots per term (default 100000)");
    simulate->add_option("--seed", sim_seed, "sampling seed (default 0)");
    simulate->add_option("--format", sim_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze)
            return cmd_analyze(analyze_state_args, analyze_format, report_path, with_oracle,
                               analyze_cfg, analyze_shots, analyze_seed);
        if (*sweep)
            return cmd_sweep(sweep_family, sweep_from, sweep_to, sweep_step, sweep_output,
                             sweep_format);
        if (*verify) return cmd_verify(verify_count, verify_seed, verify_tolerance, verify_cfg);
        if (*simulate)
            return cmd_simulate(simulate_state_args, optimal_f, sim_n, sim_np, sim_m, sim_mp,
                                sim_shots, sim_seed, sim_format);
    } catch (const NotPositiveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotHermitianError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const TraceNotOneError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

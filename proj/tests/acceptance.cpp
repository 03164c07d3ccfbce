/* Acceptance suite: runs every acceptance criterion and prints one PASS/FAIL
 * line per criterion.  Exact arithmetic throughout; the only tolerances are
 * the two stated runtime budgets.  Exits nonzero if any criterion fails. */

#include <chrono>
#include <fstream>
#include <iostream>

#include "wsh/grochar.hpp"
#include "wsh/modrep.hpp"

using namespace wsh;
using cartan::Spec;
using core::CheckMode;
using core::LieSuperAlgebra;
using json = nlohmann::ordered_json;

namespace {

int g_failures = 0;

void line(int criterion, bool pass, const std::string& what) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what << "\n";
    if (!pass) ++g_failures;
}

void note(const std::string& text) { std::cout << "     - " << text << "\n"; }

const LieSuperAlgebra& W115() {
    static auto A = cartan::build_W(Spec{'W', 1, 1, 5});
    return A;
}
const LieSuperAlgebra& S225() {
    static auto A = cartan::build_S(Spec{'S', 2, 2, 5});
    return A;
}
const LieSuperAlgebra& H255() {
    static auto A = cartan::build_H(Spec{'H', 2, 5, 5});
    return A;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// exhaustive checks restricted to the degree <= 1 slice of a big algebra
bool degree_slice_checks(const LieSuperAlgebra& A, int max_deg) {
    const auto& F = A.F;
    std::vector<uint32_t> slice;
    for (uint32_t i = 0; i < A.dim(); ++i)
        if (A.zdeg[i] <= max_deg) slice.push_back(i);
    // anticommutativity + structure constants reproduce raw brackets
    for (uint32_t i : slice)
        for (uint32_t j : slice) {
            core::Elem raw = core::bracket(A.ctx, A.der[i], A.der[j]);
            core::Elem rec = A.realize(A.sc_bracket(i, j));
            core::elem_add_scaled(A.ctx, rec, raw, F.of_int(-1));
            if (!rec.t.empty()) return false;
        }
    // super Jacobi on slice triples
    for (uint32_t a = 0; a < slice.size(); ++a)
        for (uint32_t b = a; b < slice.size(); ++b)
            for (uint32_t c = b; c < slice.size(); ++c) {
                uint32_t i = slice[a], j = slice[b], k = slice[c];
                core::SV acc;
                auto term = [&](uint32_t x, uint32_t y, uint32_t z) {
                    core::SV inner = A.sc_bracket(y, z);
                    core::SV outer = A.bracket_sv(core::SV{{x, F.one()}}, inner);
                    ff::FF sgn = (A.parity[x] && A.parity[z]) ? F.of_int(-1) : F.one();
                    core::sv_add_scaled(F, acc, outer, sgn);
                };
                term(i, j, k);
                term(j, k, i);
                term(k, i, j);
                if (!acc.empty()) return false;
            }
    // restrictedness on even slice elements against the whole algebra
    for (uint32_t i : slice) {
        if (A.parity[i]) continue;
        for (uint32_t j = 0; j < A.dim(); ++j) {
            core::SV lhs = A.bracket_sv(A.pmap_sv(i), core::SV{{j, F.one()}});
            core::SV rhs{{j, F.one()}};
            for (uint32_t t = 0; t < F.p(); ++t)
                rhs = A.bracket_sv(core::SV{{i, F.one()}}, rhs);
            core::sv_add_scaled(F, lhs, rhs, F.of_int(-1));
            if (!lhs.empty()) return false;
        }
    }
    return true;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    ok = ok && core::check_structure(W115(), CheckMode::all()).ok();
    ok = ok && core::check_structure(S225(), CheckMode::all()).ok();
    ok = ok && core::check_structure(H255(), CheckMode::sampled(100000, 1)).ok();
    ok = ok && degree_slice_checks(H255(), 1);
    double dt = seconds_since(t0);
    bool in_budget = dt < 120.0;
    line(1, ok && in_budget, "structure suite (exhaustive small, 1e5 samples + degree<=1 "
                             "slice for the Hamiltonian build)");
    note("runtime " + std::to_string(dt) + " s (budget 120 s)");
}

void criterion_2() {
    bool ok = W115().dim() == 20;
    ok = ok && cartan::build_W(Spec{'W', 2, 1, 5}).dim() == 150;
    ok = ok && cartan::build_W(Spec{'W', 1, 2, 5}).dim() == 60;
    auto sub = cartan::build_paper_subalgebra(Spec{'W', 1, 1, 5}, W115());
    ok = ok && sub.l.dim() == 8 && 8 == (1 + 1 + 1) * (1 + 1 + 1) - 1;
    line(2, ok, "dimension facts: dim W = (m+n) p^m 2^n; the distinguished subalgebra "
                "matches the projective matrix model");
}

struct WeightCase {
    std::string label;
    wt::Weight expect;
    wt::Weight got;
    std::string correction;
};

void criterion_3() {
    bool ok = true;
    std::vector<WeightCase> cases;
    {
        Spec spec{'W', 1, 1, 5};
        auto& g = W115();
        auto sub = cartan::build_paper_subalgebra(spec, g);
        auto dec = wt::triangular_decompose(spec, g);
        auto certs = wt::weight_certificate(spec, g, sub, dec);
        cases.push_back({"W: x1^3 D1", {2, 0}, certs.negative.weights[0], ""});
        cases.push_back({"W: x1^(2) x2 D1",
                         {1, 1},
                         certs.negative.weights[1],
                         "x_i^3 D_i vanishes for Grassmann i; certificate completed"});
        ok = ok && certs.negative.independent;
    }
    {
        Spec spec{'S', 2, 2, 5};
        auto& g = S225();
        auto sub = cartan::build_paper_subalgebra(spec, g);
        auto dec = wt::triangular_decompose(spec, g);
        auto certs = wt::weight_certificate(spec, g, sub, dec);
        cases.push_back({"S: D1 (displayed -gamma_1)", {4, 0, 0}, certs.negative.weights[0], ""});
        cases.push_back({"S: D2", {1, 4, 0}, certs.negative.weights[1],
                         "displayed -gamma_i; computed gamma_1 - gamma_2"});
        cases.push_back({"S: x3 D4", {0, 1, 2}, certs.negative.weights[2],
                         "boundary torus element is x2D2 + x3D3 (the displayed difference "
                         "is not in the algebra), so the gamma_2 coordinate flips"});
        cases.push_back({"S: x1^2 D2", {3, 4, 0}, certs.positive.weights[0], ""});
        cases.push_back({"S: x1 x3 D4", {1, 1, 2}, certs.positive.weights[1],
                         "displayed gamma_1 + gamma_2 - 2 gamma_3; computed "
                         "gamma_1 + gamma_2 + 2 gamma_3"});
        cases.push_back({"S: x1^3 D2", {4, 4, 0}, certs.positive.weights[2], ""});
        ok = ok && certs.negative.independent && certs.positive.independent;
    }
    {
        Spec spec{'H', 2, 5, 5};
        auto& g = H255();
        auto sub = cartan::build_paper_subalgebra(spec, g);
        auto dec = wt::triangular_decompose(spec, g);
        auto certs = wt::weight_certificate(spec, g, sub, dec);
        cases.push_back({"H: D1", {1, 0, 0}, certs.negative.weights[0],
                         "displayed -gamma_i; computed +gamma_1 under h_1 = D_H(x_1 x_2)"});
        cases.push_back({"H: D_H(b_12)", {0, 4, 4}, certs.negative.weights[1], ""});
        cases.push_back({"H: D_H(a_12)", {0, 4, 1}, certs.negative.weights[2], ""});
        cases.push_back({"H: D_H(x_{l+1}^3)", {3, 0, 0}, certs.positive.weights[0], ""});
        cases.push_back(
            {"H: D_H(x_{l+1}^2 b_12)", {2, 4, 4}, certs.positive.weights[1], ""});
        cases.push_back({"H: D_H(x_{l+1}^2 f_1 x_{m+5})", {2, 4, 0}, certs.positive.weights[2],
                         "displayed f_12 read as f_1: the product reading duplicates the "
                         "b_12 weight and kills independence"});
        ok = ok && certs.negative.independent && certs.positive.independent;

        // the e/f pairing in its recorded reading
        auto c = spec.make_ctx();
        for (uint32_t i = 1; i <= 2 && ok; ++i)
            for (uint32_t j = 1; j <= 2 && ok; ++j) {
                auto br = core::bracket(c, cartan::op_DH(c, spec, cartan::h_var_e(c, spec, i)),
                                        cartan::op_DH(c, spec, cartan::h_var_f(c, spec, j)));
                ok = ok && br.t.empty();
                auto pr = cartan::poisson(c, spec, cartan::h_var_e(c, spec, i),
                                          cartan::h_var_f(c, spec, j));
                sp::Poly want = sp::poly_scalar(c, i == j ? c.F.of_int(-2) : c.F.zero());
                sp::poly_add_scaled(c, pr, want, c.F.of_int(-1));
                ok = ok && pr.is_zero();
            }
    }
    for (auto& wc : cases) {
        bool match = wc.expect == wc.got;
        ok = ok && match;
        std::string msg = wc.label + " = (";
        for (size_t i = 0; i < wc.got.size(); ++i)
            msg += (i ? "," : "") + std::to_string(wc.got[i]);
        msg += ")";
        if (!wc.correction.empty()) msg += "  [corrected: " + wc.correction + "]";
        note(msg + (match ? "" : "  ** MISMATCH **"));
    }
    line(3, ok, "displayed eigenvalue tables match computation (documented corrections "
                "noted) and every certificate has full weight rank");
}

void criterion_4() {
    bool ok = true;
    for (auto spec : {Spec{'S', 2, 2, 5}, Spec{'H', 2, 5, 5}}) {
        const auto& g = spec.type == 'S' ? S225() : H255();
        auto sub = cartan::build_paper_subalgebra(spec, g);
        ok = ok && sub.relations.ok();
        for (auto& s : sub.relations.steps) {
            std::string msg = std::string(1, spec.type) + ": " + s.name + " [" + s.status + "]";
            if (!s.note.empty()) msg += " -- " + s.note;
            note(msg);
            ok = ok && s.status == "pass";
        }
    }
    line(4, ok, "displayed bracket-containment relations verified exhaustively "
                "(strict where true; radical form with recorded witness otherwise)");
}

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    Spec spec{'S', 2, 2, 5};
    auto sub = cartan::build_paper_subalgebra(spec, S225());
    auto rep = gro::check_lemma21_uniformity(spec, sub, {0, 0, 0}, 5);
    double dt = seconds_since(t0);
    bool ok = rep.ok() && rep.extra["expected_multiplicity"] == "1000000000000000000000000";
    bool in_budget = dt < 10.0;
    line(5, ok && in_budget,
         "the induced character of the special-type subalgebra is the constant 10^24 over "
         "all 125 weights, for two base weights");
    note("runtime " + std::to_string(dt) + " s (budget 10 s)");
}

void criterion_6() {
    std::ifstream in(std::string(WSH_TEST_DATA) + "/toy_nilrad.json");
    auto T = core::algebra_from_json(json::parse(in));
    auto V = rep::induce(T, {0}, {0});
    auto cf = rep::composition_factors(V, 7);
    bool ok = cf.factors.size() == 5 && !cf.ambiguous;
    gro::InductionDatum d{1, 5, {0}, {{1}, {2}}, {{3}}};
    auto pred = gro::induced_character(d);
    for (auto& f : cf.factors) {
        ok = ok && f.dim == 1 && f.mult == 10;
        uint32_t idx = 0;
        for (uint32_t i = 0; i < 5; ++i)
            if (f.character[i]) idx = i;
        ok = ok && pred.mult[idx] == ff::Nat(f.mult);
    }
    line(6, ok, "meataxe factors of the radical toy module are exactly p^s 2^t copies of "
                "each one-dimensional simple, matching the character prediction");
}

void criterion_7() {
    bool ok = true;
    {
        Spec spec{'S', 2, 2, 5};
        auto dec = wt::triangular_decompose(spec, S225());
        auto sub = cartan::build_paper_subalgebra(spec, S225());
        ok = ok && gro::check_prop22_characters(spec, S225(), dec, sub, {1, 2, 3}).ok();
    }
    {
        Spec spec{'H', 2, 5, 5};
        auto dec = wt::triangular_decompose(spec, H255());
        auto sub = cartan::build_paper_subalgebra(spec, H255());
        ok = ok && gro::check_prop22_characters(spec, H255(), dec, sub, {0, 0, 0}).ok();
    }
    {
        Spec spec{'W', 1, 1, 5};
        auto sub = cartan::build_paper_subalgebra(spec, W115());
        auto pgl = cartan::build_pgl(spec);
        auto iso = cartan::iso_candidate(spec, sub, pgl);
        auto alpha = cartan::build_alpha(spec, pgl, iso);
        auto rep = gro::check_prop23_characters(spec, W115(), sub, alpha, 7);
        ok = ok && rep.ok();
        note(std::string("borel-swap matching uses the computed psi; the candidate from the "
                         "twist automorphism matches: ") +
             (rep.extra["psi_from_alpha_matches"] == true ? "yes" : "no (recorded deviation)"));
    }
    line(7, ok, "scaled character identity for the long decompositions (S, H) and the "
                "borel-swap matching for W, exact over all weights");
}

void criterion_8() {
    bool ok = true;
    {
        Spec spec{'W', 1, 1, 3};
        auto g = cartan::build_W(spec);
        auto sub = cartan::build_paper_subalgebra(spec, g);
        auto pgl = cartan::build_pgl(spec);
        auto iso = cartan::iso_candidate(spec, sub, pgl);
        auto alpha = cartan::build_alpha(spec, pgl, iso);
        ok = ok && iso.rep.ok() && alpha.rep.ok();
        for (uint32_t a = 0; a < 3 && ok; ++a)
            for (uint32_t b = 0; b < 3 && ok; ++b)
                ok = ok && rep::verify_lemma41(spec, sub, alpha, {a, b}).ok();
    }
    {
        Spec spec{'W', 1, 1, 5};
        auto sub = cartan::build_paper_subalgebra(spec, W115());
        auto pgl = cartan::build_pgl(spec);
        auto iso = cartan::iso_candidate(spec, sub, pgl);
        auto alpha = cartan::build_alpha(spec, pgl, iso);
        for (auto& lam : wt::lambda_enumerate(2, 5))
            ok = ok && gro::check_twist_character(spec, sub, alpha, lam).ok();
    }
    line(8, ok, "twisted baby Verma isomorphism verified as explicit matrices at p = 3 "
                "(all nine weights) and at character level at p = 5 (all 25)");
}

void criterion_9() {
    gro::CertifyOptions opt;
    opt.seed = 11;
    bool ok = true;
    for (auto spec : {Spec{'W', 1, 1, 5}, Spec{'S', 2, 2, 5}, Spec{'H', 2, 5, 5}}) {
        auto cert = gro::certify_one_block(spec, opt);
        bool pass = cert.outcome == "PASS";
        ok = ok && pass;
        bool cited = false, computed = false;
        for (auto& s : cert.report.steps) {
            cited = cited || s.kind == "paper-implied";
            computed = computed || s.kind == "computed";
        }
        ok = ok && cited && computed;
        note(std::string(1, spec.type) + "(" + std::to_string(spec.m) + "," +
             std::to_string(spec.n) + ")@p=" + std::to_string(spec.p) + " -> " + cert.outcome);
    }
    ok = ok && gro::certify_one_block(Spec{'H', 2, 4, 5}, opt).outcome == "OUT_OF_SCOPE";
    ok = ok && gro::certify_one_block(Spec{'W', 1, 1, 3}, opt).outcome == "OUT_OF_SCOPE";
    {
        gro::CertifyOptions bad = opt;
        bad.negative_control = "drop-cert";
        auto cert = gro::certify_one_block(Spec{'S', 2, 2, 5}, bad);
        bool failed_with_witness = cert.outcome == "FAIL";
        bool witnessed = false;
        for (auto& s : cert.report.steps)
            if (s.status == "fail" && !s.witness.is_null()) witnessed = true;
        ok = ok && failed_with_witness && witnessed;
        note(std::string("drop-cert negative control -> ") + cert.outcome);
        bad.negative_control = "corrupt-sc";
        auto cert2 = gro::certify_one_block(Spec{'W', 1, 1, 5}, bad);
        ok = ok && cert2.outcome == "FAIL";
        note(std::string("corrupt-sc negative control -> ") + cert2.outcome);
    }
    line(9, ok, "certificates: PASS for the three in-scope shapes, OUT_OF_SCOPE for the "
                "excluded ones, FAIL with witness under seeded corruption; steps labeled "
                "computed vs paper-implied");
}

void criterion_10() {
    gro::CertifyOptions opt;
    opt.seed = 42;
    auto c1 = gro::certify_one_block(Spec{'S', 2, 2, 5}, opt);
    auto c2 = gro::certify_one_block(Spec{'S', 2, 2, 5}, opt);
    bool ok = c1.to_json().dump() == c2.to_json().dump();
    auto v1 = core::check_structure(H255(), CheckMode::sampled(20000, 42)).to_json().dump();
    auto v2 = core::check_structure(H255(), CheckMode::sampled(20000, 42)).to_json().dump();
    ok = ok && v1 == v2;
    std::ifstream in(std::string(WSH_TEST_DATA) + "/toy_nilrad.json");
    auto T = core::algebra_from_json(json::parse(in));
    auto V = rep::induce(T, {0}, {2});
    ok = ok && rep::composition_factors(V, 42).to_json().dump() ==
                   rep::composition_factors(V, 42).to_json().dump();
    line(10, ok, "same seed, byte-identical reports across repeated runs");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::cout << (g_failures ? "ACCEPTANCE: FAILED (" + std::to_string(g_failures) + ")"
                             : "ACCEPTANCE: ALL CRITERIA PASS")
              << "  [" << seconds_since(t0) << " s]\n";
    return g_failures ? 1 : 0;
}

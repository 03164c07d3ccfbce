#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "wsh/modrep.hpp"

using namespace wsh;
using namespace wsh::rep;
using cartan::Spec;
using core::LieSuperAlgebra;

static LieSuperAlgebra load_toy(const char* name) {
    std::ifstream in(std::string(WSH_TEST_DATA) + "/" + name);
    REQUIRE(in.good());
    json j = json::parse(in);
    return core::algebra_from_json(j);
}

// sl2-like toy: [h,e] = 2e, [h,f] = -2f, [e,f] = h, all even, over GF(5)
static LieSuperAlgebra sl2ish() {
    json j = {
        {"field", {{"p", 5}, {"deg", 1}}},
        {"m", 0},
        {"n", 0},
        {"type", "custom"},
        {"basis", {"f", "h", "e"}},
        {"parity", {0, 0, 0}},
        {"degree", {-1, 0, 1}},
        {"sc",
         json::array({json::array({0, 1, json::array({json::array({0, 2})})}),   // [f,h] = 2f
                      json::array({0, 2, json::array({json::array({1, 4})})}),   // [f,e] = -h
                      json::array({1, 2, json::array({json::array({2, 2})})})})},  // [h,e]=2e
        {"pmap", json::array({json::array({0, json::array()}),
                              json::array({1, json::array({json::array({1, 1})})}),
                              json::array({2, json::array()})})},
        {"torus", {1}},
    };
    return core::algebra_from_json(j);
}

TEST_CASE("straightening worked examples") {
    auto A = sl2ish();
    Straightener st(A, {0, 1, 2});  // order f < h < e

    // e * f = f e + h  (one rewrite step, manual oracle)
    Combo r = st.straighten_word({2, 0}, "left");
    REQUIRE(r.size() == 2);
    PBWMono fe{1, 0, 1}, hm{0, 1, 0};
    CHECK(r.at(fe) == A.F.one());
    CHECK(r.at(hm) == A.F.one());

    // x^p with x p-nilpotent: the word e,e,e,e,e straightens to zero
    Combo z = st.straighten_word({2, 2, 2, 2, 2}, "left");
    CHECK(z.empty());

    // h^p = h
    Combo hp = st.straighten_word({1, 1, 1, 1, 1}, "left");
    REQUIRE(hp.size() == 1);
    CHECK(hp.begin()->first == hm);
}

TEST_CASE("odd square rule") {
    auto A = load_toy("toy_nilrad.json");
    Straightener st(A, {0, 1, 2, 3});
    // z is odd with [z,z] = 0, so z*z = 0
    Combo zz = st.straighten_word({3, 3}, "left");
    CHECK(zz.empty());
}

TEST_CASE("confluence: left and right strategies agree on random words") {
    auto A = sl2ish();
    auto T = load_toy("toy_nilrad.json");
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const LieSuperAlgebra& L = trial % 2 ? A : T;
        Straightener st(L, trial % 2 ? std::vector<uint32_t>{0, 1, 2}
                                     : std::vector<uint32_t>{0, 1, 2, 3});
        std::vector<uint32_t> word;
        uint32_t len = 1 + uint32_t(rng.below(6));
        for (uint32_t i = 0; i < len; ++i) word.push_back(uint32_t(rng.below(L.dim())));
        Combo l = st.straighten_word(word, "left");
        Combo r = st.straighten_word(word, "right");
        CHECK(l == r);
    }
}

TEST_CASE("induced module over the toy borel") {
    auto A = load_toy("toy_borel.json");
    auto V = induce(A, {0}, {2});  // b = <h>, lambda = 2
    CHECK(V.dim == 5);
    CHECK(V.verify().ok());
    // character: x has weight 1, so weights 2,3,4,0,1 each once
    auto ch = V.character();
    CHECK(ch.uniform_value() == ff::Nat(1));

    // cap
    CHECK_THROWS(induce(A, {0}, {2}, 3));
}

TEST_CASE("composition factors of the radical toy match the character") {
    auto A = load_toy("toy_nilrad.json");
    // b = <h>: complement x (wt 1), y (wt 2) even, z (wt 3) odd
    auto V = induce(A, {0}, {0});
    CHECK(V.dim == 50);
    auto cf = composition_factors(V, 7);
    // 5 weights, each with multiplicity p^s 2^t = 5 * 2 = 10
    uint32_t total = 0;
    for (auto& f : cf.factors) {
        CHECK(f.dim == 1);
        CHECK(f.mult == 10);
        total += f.dim * f.mult;
        // parity pairing: five occurrences even, five odd (the z-exponent)
        REQUIRE(f.parity_counts.size() == 2);
        for (auto& [sig, count] : f.parity_counts) CHECK(count == 5);
    }
    CHECK(cf.factors.size() == 5);
    CHECK(total == 50);
    CHECK(!cf.ambiguous);

    // determinism: same seed, same output
    auto cf2 = composition_factors(V, 7);
    CHECK(cf.to_json().dump() == cf2.to_json().dump());

    // matches the convolution prediction
    gro::InductionDatum d{1, 5, {0}, {{1}, {2}}, {{3}}};
    auto pred = gro::induced_character(d);
    for (auto& f : cf.factors) {
        uint32_t idx = 0;
        for (uint32_t i = 0; i < 5; ++i)
            if (f.character[i]) idx = i;
        CHECK(pred.mult[idx] == ff::Nat(f.mult));
    }
}

TEST_CASE("one-dimensional module is its own factor list") {
    auto A = load_toy("toy_borel.json");
    auto V = induce(A, {0, 1}, {3});  // b = everything: V = k_lambda
    CHECK(V.dim == 1);
    auto cf = composition_factors(V, 3);
    REQUIRE(cf.factors.size() == 1);
    CHECK(cf.factors[0].dim == 1);
    CHECK(cf.factors[0].character[3] == 1);
}

TEST_CASE("head of the toy borel Verma") {
    auto A = load_toy("toy_borel.json");
    auto V = induce(A, {0, 1}, {2});
    auto h = head(V, 5);
    CHECK(h.head_dim == 1);
    CHECK(h.head_simple);
    CHECK(h.radical_dim == 0);

    // V^-(lambda) over b = <h> has a 1-dimensional head since x acts
    // nilpotently and shifts weights
    auto Vm = induce(A, {0}, {2});
    auto hm = head(Vm, 5);
    CHECK(hm.head_simple);
    CHECK(hm.head_dim == 1);
    CHECK(hm.radical_dim == 4);
}

TEST_CASE("twisted Verma isomorphism for the matrix-model subalgebra, p = 3") {
    Spec spec{'W', 1, 1, 3};
    auto g = cartan::build_W(spec);
    auto sub = cartan::build_paper_subalgebra(spec, g);
    auto pgl = cartan::build_pgl(spec);
    auto iso = cartan::iso_candidate(spec, sub, pgl);
    REQUIRE(iso.rep.ok());
    auto alpha = cartan::build_alpha(spec, pgl, iso);
    REQUIRE(alpha.rep.ok());

    // sigma = identity twists to the module itself
    {
        std::vector<uint32_t> b_plus;
        for (auto key : {"n1p", "l1p"})
            for (auto& row : sub.parts_l.at(key).row_list()) b_plus.push_back(row[0].first);
        for (uint32_t t : sub.l.torus) b_plus.push_back(t);
        auto V = induce(sub.l, b_plus, {0, 0});
        CHECK(V.dim == 12);  // 3^1 * 2^2
        cartan::LinMap id;
        id.img.assign(sub.l.dim(), {});
        for (uint32_t i = 0; i < sub.l.dim(); ++i) id.img[i] = core::SV{{i, g.F.one()}};
        auto Vid = twist_module(V, id);
        for (uint32_t i = 0; i < sub.l.dim(); ++i) CHECK(Vid.rho[i] == V.rho[i]);
    }

    // the displayed twist isomorphism, every lambda at p = 3
    for (uint32_t a = 0; a < 3; ++a)
        for (uint32_t b = 0; b < 3; ++b) {
            auto rep = verify_lemma41(spec, sub, alpha, {a, b});
            CHECK(rep.ok());
        }
}

TEST_CASE("borel-swap factor lists agree at p = 3 for the computed psi") {
    Spec spec{'W', 1, 1, 3};
    auto g = cartan::build_W(spec);
    auto sub = cartan::build_paper_subalgebra(spec, g);
    std::vector<uint32_t> b_plus, b_minus;
    for (auto key : {"n1p", "l1p"})
        for (auto& row : sub.parts_l.at(key).row_list()) b_plus.push_back(row[0].first);
    for (auto key : {"nm", "g1m"})
        for (auto& row : sub.parts_l.at(key).row_list()) b_minus.push_back(row[0].first);
    for (uint32_t t : sub.l.torus) {
        b_plus.push_back(t);
        b_minus.push_back(t);
    }
    for (uint32_t a = 0; a < 3; ++a)
        for (uint32_t b = 0; b < 3; ++b) {
            Weight lam{a, b};
            Weight psi = gro::psi_w(spec, lam);  // identity for m = 1
            auto Vm = induce(sub.l, b_minus, lam);
            auto Vp = induce(sub.l, b_plus, psi);
            auto fm = composition_factors(Vm, 11);
            auto fp = composition_factors(Vp, 13);
            // compare as multisets of identity keys
            std::multiset<std::string> km, kp;
            for (auto& f : fm.factors)
                for (uint32_t i = 0; i < f.mult; ++i) km.insert(f.key());
            for (auto& f : fp.factors)
                for (uint32_t i = 0; i < f.mult; ++i) kp.insert(f.key());
            CHECK(km == kp);
        }
}

TEST_CASE("linkage blocks") {
    // toy borel: every baby Verma contains every simple, one block
    auto A = load_toy("toy_borel.json");
    std::vector<std::pair<Weight, CompFactorList>> reps;
    for (uint32_t lam = 0; lam < 5; ++lam)
        reps.push_back({{lam}, composition_factors(induce(A, {0}, {lam}), 17)});
    auto blocks = linkage_blocks(reps);
    CHECK(blocks["blocks"].size() == 1);

    // a bare torus: V^-(lambda) = k_lambda, five singleton blocks
    json jt = {
        {"field", {{"p", 5}, {"deg", 1}}}, {"m", 0}, {"n", 0}, {"type", "custom"},
        {"basis", {"h"}},  {"parity", {0}}, {"degree", {0}},
        {"sc", json::array()},
        {"pmap", json::array({json::array({0, json::array({json::array({0, 1})})})})},
        {"torus", {0}},
    };
    auto T = core::algebra_from_json(jt);
    std::vector<std::pair<Weight, CompFactorList>> rt;
    for (uint32_t lam = 0; lam < 5; ++lam)
        rt.push_back({{lam}, composition_factors(induce(T, {0}, {lam}), 19)});
    auto bt = linkage_blocks(rt);
    CHECK(bt["blocks"].size() == 5);
}

TEST_CASE("matrix-model baby Verma at p = 3: linkage baseline and head") {
    Spec spec{'W', 1, 1, 3};
    auto g = cartan::build_W(spec);
    auto sub = cartan::build_paper_subalgebra(spec, g);
    std::vector<uint32_t> b_plus;
    for (auto key : {"n1p", "l1p"})
        for (auto& row : sub.parts_l.at(key).row_list()) b_plus.push_back(row[0].first);
    for (uint32_t t : sub.l.torus) b_plus.push_back(t);

    auto V0 = induce(sub.l, b_plus, {0, 0});
    auto h = head(V0, 23);
    CHECK(h.head_simple);

    std::vector<std::pair<Weight, CompFactorList>> reps;
    for (uint32_t a = 0; a < 3; ++a)
        for (uint32_t b = 0; b < 3; ++b)
            reps.push_back({{a, b}, composition_factors(induce(sub.l, b_plus, {a, b}), 29)});
    auto blocks = linkage_blocks(reps);
    // recorded as a regression baseline (exploratory, not asserted theory)
    CHECK(blocks["blocks"].size() >= 1);
    MESSAGE("pgl(2|1)-model blocks at p=3: ", blocks.dump());
}

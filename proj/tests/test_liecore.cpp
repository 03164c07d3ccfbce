#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wsh/liecore.hpp"

using namespace wsh;
using namespace wsh::core;

static Ctx ctx(uint32_t m, uint32_t n, uint32_t p) { return Ctx{m, n, ff::Field(p, 1)}; }

static Elem xaDi(const Ctx& c, std::vector<uint8_t> a, uint32_t bmask, uint32_t dir) {
    return elem_single(c, dir, Mono{std::move(a), bmask}, c.F.one());
}

TEST_CASE("bracket basics in W(1,1;1), p=5") {
    Ctx c = ctx(1, 1, 5);
    Elem D1 = xaDi(c, {0}, 0, 1);
    Elem x1D1 = xaDi(c, {1}, 0, 1);
    Elem x2D2 = xaDi(c, {0}, 1, 2);

    // oracle: apply both sides to the generators and compare
    Elem b = bracket(c, D1, x1D1);
    Elem diff = b;
    elem_add_scaled(c, diff, D1, c.F.of_int(-1));
    CHECK(diff.t.empty());
    for (uint32_t j = 1; j <= 2; ++j) {
        Poly xj = sp::poly_mono(c, sp::mono_var(c, j), c.F.one());
        Poly lhs = elem_apply(c, D1, elem_apply(c, x1D1, xj));
        sp::poly_add_scaled(c, lhs, elem_apply(c, x1D1, elem_apply(c, D1, xj)), c.F.of_int(-1));
        sp::poly_add_scaled(c, lhs, elem_apply(c, b, xj), c.F.of_int(-1));
        CHECK(lhs.is_zero());
    }

    // commuting torus elements
    CHECK(bracket(c, x1D1, x2D2).t.empty());
}

TEST_CASE("close_under_bracket") {
    Ctx c = ctx(1, 1, 5);
    // torus generators give an abelian algebra of dim m+n
    auto T = close_under_bracket(c, {xaDi(c, {1}, 0, 1), xaDi(c, {0}, 1, 2)});
    CHECK(T.dim() == 2);
    for (auto& [k, v] : T.sc) CHECK(v.empty());

    // {D1, x1^(2) D1} in W(1,0;1) closes up to dim 3 (x1 D1 appears)
    Ctx c10 = ctx(1, 0, 5);
    auto L = close_under_bracket(c10, {xaDi(c10, {0}, 0, 1), xaDi(c10, {2}, 0, 1)});
    CHECK(L.dim() == 3);
    CHECK(L.solve_in_basis(xaDi(c10, {1}, 0, 1)).has_value());
}

static LieSuperAlgebra small_w11(uint32_t p) {
    // all 20 monomial basis derivations of W(1,1;1)
    Ctx c = ctx(1, 1, p);
    std::vector<Elem> rows;
    std::vector<WKey> keys;
    for (auto& u : sp::enumerate_monomials(c))
        for (uint32_t d = 1; d <= 2; ++d) keys.push_back(WKey{d, u});
    std::sort(keys.begin(), keys.end());
    for (auto& k : keys) rows.push_back(elem_single(c, k.dir, k.mono, c.F.one()));
    // torus x1D1, x2D2
    std::vector<uint32_t> tor;
    for (uint32_t i = 0; i < rows.size(); ++i) {
        const WKey& k = rows[i].t.begin()->first;
        if (k.zdeg() == 0 && k.mono == sp::mono_var(c, k.dir)) tor.push_back(i);
    }
    auto A = build_from_derivations(c, "W", 1, 1, rows, tor);
    attach_pmap(A);
    return A;
}

TEST_CASE("W(1,1;1) structure checks, exhaustive") {
    auto A = small_w11(5);
    CHECK(A.dim() == 20);
    auto rep = check_structure(A, CheckMode::all());
    CHECK(rep.ok());

    // p-map values: (x1 D1)^[p] = x1 D1 and D1^[p] = 0
    Ctx& c = A.ctx;
    auto cx = A.solve_in_basis(xaDi(c, {1}, 0, 1));
    REQUIRE(cx.has_value());
    REQUIRE(cx->size() == 1);
    uint32_t ix1d1 = (*cx)[0].first;
    CHECK(A.pmap_sv(ix1d1) == SV{{ix1d1, c.F.one()}});
    auto cd = A.solve_in_basis(xaDi(c, {0}, 0, 1));
    uint32_t id1 = (*cd)[0].first;
    CHECK(A.pmap_sv(id1).empty());

    // oracle for the abstract p-th power: Jacobson expansion agrees with
    // p-fold derivation composition on combinations
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        SV v;
        for (uint32_t i = 0; i < A.dim(); ++i)
            if (!A.parity[i] && rng.below(3) == 0)
                v.emplace_back(i, c.F.of_int(1 + int(rng.below(4))));
        SV lhs = A.pth_power_sv(v);
        Elem rhs = elem_pth_power(c, A.realize(v));
        auto rc = A.solve_in_basis(rhs);
        REQUIRE(rc.has_value());
        CHECK(sv_equal(lhs, *rc));
    }
}

TEST_CASE("corrupted structure constant is caught with a witness") {
    auto A = small_w11(5);
    // corrupt one entry
    for (auto& [k, v] : A.sc) {
        if (!v.empty()) {
            v[0].second = A.F.add(v[0].second, A.F.one());
            break;
        }
    }
    auto rj = check_super_jacobi(A, CheckMode::all());
    auto rr = check_sc_reproduces(A, CheckMode::all());
    CHECK((!rj.ok() || !rr.ok()));
    if (!rj.ok()) CHECK(rj.steps.back().witness.contains("i"));
}

TEST_CASE("attach_pmap rejects a non p-closed span") {
    // Jordan-block element x1D1 + x1D2 + x2D2: its fifth power as a
    // derivation is the semisimple part x1D1 + x2D2, outside the line
    Ctx c = ctx(2, 0, 5);
    Elem v = xaDi(c, {1, 0}, 0, 1);
    elem_add_scaled(c, v, xaDi(c, {1, 0}, 0, 2), c.F.one());
    elem_add_scaled(c, v, xaDi(c, {0, 1}, 0, 2), c.F.one());
    auto A = build_from_derivations(c, "custom", 2, 0, {v}, {});
    CHECK_THROWS_WITH_AS(attach_pmap(A), doctest::Contains("not p-closed"),
                         std::runtime_error);
}

TEST_CASE("ideal_and_nilpotency") {
    auto A = small_w11(5);
    const Field& F = A.F;

    // R = 0 passes
    Subspace zero(&A);
    CHECK(ideal_and_nilpotency(A, zero).ok());

    // R = torus fails p-nilpotency (h^[p] = h != 0)
    Subspace tor(&A);
    for (uint32_t t : A.torus) tor.add(SV{{t, F.one()}});
    auto rep = ideal_and_nilpotency(A, tor);
    CHECK(!rep.ok());
    bool saw = false;
    for (auto& s : rep.steps)
        if (s.name == "p_nilpotent" && s.status == "fail") saw = true;
    CHECK(saw);

    // R = span of everything in degree >= 1 is a p-nilpotent ideal? no:
    // [L, W_{>=1}] reaches degree 0; use the full positive part plus nothing
    // as a negative control for ideality
    Subspace pos(&A);
    for (uint32_t i = 0; i < A.dim(); ++i)
        if (A.zdeg[i] >= 1) pos.add(SV{{i, F.one()}});
    auto rep2 = ideal_and_nilpotency(A, pos);
    CHECK(!rep2.ok());
}

TEST_CASE("serialize round trip is byte stable") {
    auto A = small_w11(5);
    auto j1 = A.to_json();
    auto B = algebra_from_json(j1);
    auto j2 = B.to_json();
    CHECK(j1.dump() == j2.dump());
    CHECK(B.dim() == 20);
    CHECK(check_grading(B).ok());
    CHECK(check_super_jacobi(B, CheckMode::all()).ok());
}

TEST_CASE("hand-written abstract algebra loads and passes checks") {
    // h toral, [h,x] = x, [h,y] = -y, x^[p] = y^[p] = 0
    json j = {
        {"field", {{"p", 5}, {"deg", 1}}},
        {"m", 0},
        {"n", 0},
        {"type", "custom"},
        {"basis", {"h", "x", "y"}},
        {"parity", {0, 0, 0}},
        {"degree", {0, 1, -1}},
        {"sc", json::array({json::array({0, 1, json::array({json::array({1, 1})})}),
                            json::array({0, 2, json::array({json::array({2, 4})})})})},
        {"pmap", json::array({json::array({0, json::array({json::array({0, 1})})}),
                              json::array({1, json::array()}),
                              json::array({2, json::array()})})},
        {"torus", {0}},
    };
    auto A = algebra_from_json(j);
    CHECK(A.dim() == 3);
    CHECK(check_super_jacobi(A, CheckMode::all()).ok());
    CHECK(check_restricted(A, CheckMode::all()).ok());

    json bad = j;
    bad.erase("parity");
    CHECK_THROWS_WITH_AS(algebra_from_json(bad), doctest::Contains("parity"),
                         std::runtime_error);
}

#include "wsh/cartan.hpp"

#include <algorithm>
#include <sstream>

namespace wsh::cartan {

using core::bracket;
using core::Ech;
using core::elem_add_scaled;
using core::elem_from_poly;
using core::elem_label;
using core::elem_scale;
using core::elem_single;
using core::WKey;
using ff::fail;

// ------------------------------------------------------------------- spec

void Spec::validate() const {
    if (!ff::is_prime(p) || p == 2) fail("spec: p must be an odd prime");
    if (type != 'W' && type != 'S' && type != 'H') fail("spec: type must be W, S or H");
    if (m == 0 || n == 0) fail("spec: m and n must be positive");
    if (type == 'S' && m < 2) fail("spec: type S needs m >= 2");
    if (type == 'H' && (m % 2 != 0)) fail("spec: type H needs m = 2l even");
    if (type == 'H' && n <= 3) fail("spec: type H needs n > 3");
}

bool Spec::theorem_scope() const {
    if (p <= 3) return false;
    if (type == 'H' && n == 4) return false;
    return true;
}

std::string Spec::scope_note() const {
    if (p <= 3) return "p <= 3 is outside the block-degeneracy hypotheses";
    if (type == 'H' && n == 4) return "type H with n = 4 is excluded from the one-block theorem";
    return "";
}

Ctx Spec::make_ctx() const {
    int deg = (type == 'H' && p % 4 == 3) ? 2 : 1;
    return Ctx{m, n, Field(p, deg)};
}

json Spec::to_json() const {
    return json{{"type", std::string(1, type)}, {"m", m}, {"n", n}, {"p", p}};
}

// ---------------------------------------------------------------------- W

LieSuperAlgebra build_W(const Spec& spec) {
    spec.validate();
    Ctx c = spec.make_ctx();
    std::vector<WKey> keys;
    for (auto& u : sp::enumerate_monomials(c))
        for (uint32_t d = 1; d <= c.nvars(); ++d) keys.push_back(WKey{d, u});
    std::sort(keys.begin(), keys.end());
    std::vector<Elem> rows;
    std::vector<uint32_t> torus;
    for (uint32_t i = 0; i < keys.size(); ++i) {
        rows.push_back(elem_single(c, keys[i].dir, keys[i].mono, c.F.one()));
        if (keys[i].mono == sp::mono_var(c, keys[i].dir)) torus.push_back(i);
    }
    auto A = core::build_from_derivations(c, "W", spec.m, spec.n, rows, torus);
    core::attach_pmap(A);
    A.scope_flag = spec.theorem_scope();
    A.scope_note = spec.scope_note();
    return A;
}

// ---------------------------------------------------------------------- S

Elem op_Dij(const Ctx& c, uint32_t i, uint32_t j, const Poly& f) {
    if (!(1 <= i && i < j && j <= c.nvars())) fail("op_Dij: need 1 <= i < j <= m+n");
    auto par = f.parity();
    if (!par) fail("op_Dij: f must be parity homogeneous");
    int d = *par;
    // f_i = -(-1)^(d(f)(tau(i)+tau(j))) D_j(f), f_j = (-1)^(tau(i)tau(j)) D_i(f)
    FF si = c.F.of_int(-1);
    if ((d * (c.tau(i) + c.tau(j))) & 1) si = c.F.one();
    FF sj = (c.tau(i) * c.tau(j)) & 1 ? c.F.of_int(-1) : c.F.one();
    Elem r = elem_scale(c, elem_from_poly(c, sp::superderive(c, j, f), i), si);
    elem_add_scaled(c, r, elem_from_poly(c, sp::superderive(c, i, f), j), sj);
    return r;
}

Elem s_torus_elem(const Ctx& c, uint32_t i) {
    // +/- D_{i,i+1}(x_i x_{i+1}) normalized to leading coefficient 1; the
    // boundary element is x_m D_m + x_{m+1} D_{m+1}
    Elem h = elem_single(c, i, sp::mono_var(c, i), c.F.one());
    FF s = ((c.tau(i) + c.tau(i + 1)) & 1) ? c.F.one() : c.F.of_int(-1);
    elem_add_scaled(c, h, elem_single(c, i + 1, sp::mono_var(c, i + 1), c.F.one()), s);
    return h;
}

// The plain span of the D_ij images is not bracket closed: already at
// (m,n,p) = (2,2,5) the commutator of two images acquires components such
// as x1^(4) x2^(4) x4 D3 whose divided-power "potential" would overflow the
// exponent bound, so no D_ij(f) reaches them.  The special algebra is the
// span-and-close of the images; the closure stays divergence free.
LieSuperAlgebra build_S(const Spec& spec) {
    spec.validate();
    if (spec.type != 'S') fail("build_S: wrong spec type");
    Ctx c = spec.make_ctx();
    std::vector<Elem> gens;
    for (auto& u : sp::enumerate_monomials(c)) {
        Poly f = sp::poly_mono(c, u, c.F.one());
        for (uint32_t i = 1; i <= c.nvars(); ++i)
            for (uint32_t j = i + 1; j <= c.nvars(); ++j) {
                Elem g = op_Dij(c, i, j, f);
                if (!g.t.empty()) gens.push_back(g);
            }
    }
    // the torus elements must already lie in the span
    Ech probe(c);
    for (auto& g : gens) probe.add(g);
    std::vector<Elem> torus_elems;
    for (uint32_t i = 1; i < c.nvars(); ++i) {
        torus_elems.push_back(s_torus_elem(c, i));
        if (!probe.member(torus_elems.back()))
            fail("build_S: torus element " + elem_label(c, torus_elems.back()) +
                 " is not in the span of the D_ij images");
    }
    // seed the torus, insert every generator, then close under brackets
    Ech ech(c);
    std::vector<Elem> basis;
    auto insert = [&](const Elem& v) {
        Elem red = ech.reduce(v);
        if (red.t.empty()) return false;
        ech.add(red);
        basis.push_back(elem_scale(c, red, c.F.inv(red.t.begin()->second)));
        return true;
    };
    for (auto& h : torus_elems) insert(h);
    for (auto& g : gens) insert(g);
    size_t span_dim = basis.size();
    size_t frontier = 0;
    while (frontier < basis.size()) {
        size_t hi = basis.size();
        for (size_t i = frontier; i < hi; ++i)
            for (size_t j = 0; j <= i; ++j) insert(bracket(c, basis[i], basis[j]));
        frontier = hi;
    }
    std::vector<Elem> rows = ech.rows_in_pivot_order();
    auto A = core::build_from_derivations(c, "S", spec.m, spec.n, rows, {});
    A.scope_note = spec.scope_note();
    if (rows.size() != span_dim)
        A.scope_note += std::string(A.scope_note.empty() ? "" : "; ") + "bracket closure added " +
                        std::to_string(rows.size() - span_dim) + " vectors beyond the D_ij span";
    // locate the torus rows
    for (auto& h : torus_elems) {
        auto sv = A.solve_in_basis(h);
        if (!sv || sv->size() != 1 || !(sv->front().second == c.F.one()))
            fail("build_S: torus element is not a basis row");
        A.torus.push_back(sv->front().first);
    }
    // weights were skipped (no torus at build time); fill them now
    core::fill_weights(A);
    core::attach_pmap(A);
    A.scope_flag = spec.theorem_scope();
    return A;
}

// ---------------------------------------------------------------------- H


uint32_t h_prime(const Spec& spec, uint32_t i) {
    uint32_t l = spec.l();
    if (i <= l) return i + l;
    if (i <= spec.m) return i - l;
    return i;
}

int h_sigma(const Spec& spec, uint32_t i) {
    uint32_t l = spec.l();
    if (i <= l) return 1;
    if (i <= spec.m) return -1;
    return 1;
}

Elem op_DH(const Ctx& c, const Spec& spec, const Poly& f) {
    auto par = f.parity();
    if (!par) fail("op_DH: f must be parity homogeneous");
    int d = *par;
    Elem r;
    for (uint32_t i = 1; i <= c.nvars(); ++i) {
        uint32_t ip = h_prime(spec, i);
        FF s = h_sigma(spec, ip) == 1 ? c.F.one() : c.F.of_int(-1);
        if ((c.tau(ip) * d) & 1) s = c.F.neg(s);
        elem_add_scaled(c, r, elem_from_poly(c, sp::superderive(c, ip, f), i), s);
    }
    return r;
}

Poly poisson(const Ctx& c, const Spec& spec, const Poly& f, const Poly& g) {
    auto par = f.parity();
    if (!par) fail("poisson: f must be parity homogeneous");
    int d = *par;
    Poly r;
    for (uint32_t i = 1; i <= c.nvars(); ++i) {
        FF s = h_sigma(spec, i) == 1 ? c.F.one() : c.F.of_int(-1);
        if ((c.tau(i) * d) & 1) s = c.F.neg(s);
        Poly prod = sp::poly_mul(c, sp::superderive(c, i, f), sp::superderive(c, h_prime(spec, i), g));
        sp::poly_add_scaled(c, r, prod, s);
    }
    return r;
}

Poly h_var_e(const Ctx& c, const Spec& spec, uint32_t j) {
    FF i = c.F.sqrt_minus_one();
    Poly e = sp::poly_mono(c, sp::mono_var(c, spec.m + j), c.F.one());
    sp::poly_add_scaled(c, e, sp::poly_mono(c, sp::mono_var(c, spec.m + spec.k() + j), c.F.one()), i);
    return e;
}

Poly h_var_f(const Ctx& c, const Spec& spec, uint32_t j) {
    FF i = c.F.sqrt_minus_one();
    Poly f = sp::poly_mono(c, sp::mono_var(c, spec.m + j), c.F.one());
    sp::poly_add_scaled(c, f, sp::poly_mono(c, sp::mono_var(c, spec.m + spec.k() + j), c.F.one()),
                        c.F.neg(i));
    return f;
}

Poly ef_expand(const Ctx& c, const Spec& spec, const EfMono& u) {
    Poly r = sp::poly_mono(c, Mono{u.a, 0}, c.F.one());
    for (uint32_t j = 1; j <= spec.k(); ++j) {
        if ((u.cp >> (j - 1)) & 1u) r = sp::poly_mul(c, r, h_var_e(c, spec, j));
        if ((u.cm >> (j - 1)) & 1u) r = sp::poly_mul(c, r, h_var_f(c, spec, j));
    }
    if (u.delta) r = sp::poly_mul(c, r, sp::poly_mono(c, sp::mono_var(c, c.nvars()), c.F.one()));
    return r;
}

std::vector<EfMono> h_basis_labels(const Spec& spec) {
    const uint32_t p = spec.p, k = spec.k();
    const bool nodd = (spec.n % 2) == 1;
    const uint32_t full = k ? (1u << k) - 1 : 0;
    std::vector<EfMono> out;
    std::vector<uint8_t> a(spec.m, 0);
    while (true) {
        for (uint32_t cp = 0; cp <= full; ++cp)
            for (uint32_t cm = 0; cm <= full; ++cm)
                for (uint8_t delta = 0; delta <= (nodd ? 1 : 0); ++delta) {
                    EfMono u{a, cp, cm, delta};
                    if (u.degree() == 0) continue;  // constants are in the kernel
                    bool is_top = (cp == full && cm == full && delta == (nodd ? 1 : 0));
                    for (uint8_t e : a) is_top = is_top && (e == p - 1);
                    if (is_top) continue;  // the derived algebra misses the top ray
                    out.push_back(std::move(u));
                }
        int i = int(spec.m) - 1;
        while (i >= 0 && a[i] == p - 1) a[i--] = 0;
        if (i < 0) break;
        a[i]++;
    }
    std::sort(out.begin(), out.end(), [](const EfMono& x, const EfMono& y) {
        if (x.degree() != y.degree()) return x.degree() < y.degree();
        return x < y;
    });
    return out;
}

namespace {

// Grassmann-sector change of basis between x-monomials and ef-monomials
struct EfTransform {
    uint32_t k = 0;
    bool nodd = false;
    uint32_t nbits = 0;  // = n
    // x-mask -> list of (ef-code, coeff); ef-code packs (cp, cm, delta)
    std::vector<std::vector<std::pair<uint32_t, FF>>> from_x;

    uint32_t code(uint32_t cp, uint32_t cm, uint8_t delta) const {
        return cp | (cm << k) | (uint32_t(delta) << (2 * k));
    }
    void decode(uint32_t cd, uint32_t& cp, uint32_t& cm, uint8_t& delta) const {
        cp = cd & ((1u << k) - 1);
        cm = (cd >> k) & ((1u << k) - 1);
        delta = uint8_t(cd >> (2 * k));
    }
};

EfTransform make_ef_transform(const Ctx& c, const Spec& spec) {
    EfTransform T;
    T.k = spec.k();
    T.nodd = (spec.n % 2) == 1;
    T.nbits = spec.n;
    const uint32_t total = 1u << spec.n;
    // forward: ef-code -> x-mask expansion, via the polynomial machinery
    la::Mat M(total, total);  // rows: x-mask, cols: ef-code
    for (uint32_t cd = 0; cd < total; ++cd) {
        uint32_t cp, cm;
        uint8_t  delta;
        T.decode(cd, cp, cm, delta);
        EfMono u{std::vector<uint8_t>(spec.m, 0), cp, cm, delta};
        Poly e = ef_expand(c, spec, u);
        for (auto& [mono, cf] : e.t) M.at(mono.b, cd) = cf;
    }
    // invert
    la::Mat aug(total, 2 * total);
    for (uint32_t i = 0; i < total; ++i) {
        for (uint32_t j = 0; j < total; ++j) aug.at(i, j) = M.at(i, j);
        aug.at(i, total + i) = c.F.one();
    }
    if (la::rref(c.F, aug) != total) fail("ef transform is singular");
    T.from_x.resize(total);
    // row i of the rref has pivot at column i (M invertible), so the right
    // half holds M^{-1}: x-mask b = sum_cd Minv[cd][b] * ef-code cd
    for (uint32_t b = 0; b < total; ++b)
        for (uint32_t cd = 0; cd < total; ++cd) {
            FF v = aug.at(cd, total + b);
            if (!c.F.is_zero(v)) T.from_x[b].emplace_back(cd, v);
        }
    return T;
}

}  // namespace

LieSuperAlgebra build_H(const Spec& spec) {
    spec.validate();
    if (spec.type != 'H') fail("build_H: wrong spec type");
    Ctx c = spec.make_ctx();
    const uint32_t k = spec.k(), l = spec.l();
    FF im = c.F.sqrt_minus_one();

    auto labels = h_basis_labels(spec);
    std::vector<Poly> gen_polys(labels.size());
    std::vector<FF> efscale(labels.size(), c.F.one());  // gen_poly = scale * (pure ef-monomial)
    std::map<EfMono, uint32_t> index_of;
    for (uint32_t i = 0; i < labels.size(); ++i) index_of[labels[i]] = i;

    // torus slots use the displayed generators: h_i = D_H(x_i x_{l+i}) and
    // h_{m+j} = D_H(sqrt(-1) x_{m+j} x_{m+k+j}); the latter spans the same
    // ray as e_j f_j with e_j f_j = -2 sqrt(-1) x_{m+j} x_{m+k+j}
    std::vector<uint32_t> torus_slots;
    for (uint32_t i = 1; i <= l; ++i) {
        EfMono u{std::vector<uint8_t>(spec.m, 0), 0, 0, 0};
        u.a[i - 1] = 1;
        u.a[l + i - 1] = 1;
        torus_slots.push_back(index_of.at(u));
    }
    for (uint32_t j = 1; j <= k; ++j) {
        EfMono u{std::vector<uint8_t>(spec.m, 0), 1u << (j - 1), 1u << (j - 1), 0};
        torus_slots.push_back(index_of.at(u));
    }
    for (uint32_t i = 0; i < labels.size(); ++i) gen_polys[i] = ef_expand(c, spec, labels[i]);
    for (uint32_t j = 1; j <= k; ++j) {
        uint32_t slot = torus_slots[l + j - 1];
        Mono q = sp::mono_var(c, spec.m + j);
        auto prod = sp::mono_mul(c, q, sp::mono_var(c, spec.m + k + j));
        gen_polys[slot] = sp::poly_mono(c, prod->second, c.F.mul(prod->first, im));
        // sqrt(-1) x_a x_b = -(1/2) e_j f_j
        efscale[slot] = c.F.neg(c.F.inv(c.F.of_int(2)));
    }

    std::vector<Elem> rows(labels.size());
    for (uint32_t i = 0; i < labels.size(); ++i) {
        rows[i] = op_DH(c, spec, gen_polys[i]);
        if (rows[i].t.empty()) fail("build_H: D_H image vanished unexpectedly");
    }
    auto A = core::build_from_derivations(c, "H", spec.m, spec.n, rows, torus_slots, false);

    // structure constants through the transported Poisson bracket:
    // [D_H(u), D_H(v)] = D_H({u,v}); coordinates drop out of the ef-expansion
    EfTransform T = make_ef_transform(c, spec);
    EfMono top_label{std::vector<uint8_t>(spec.m, uint8_t(spec.p - 1)),
                     k ? (1u << k) - 1 : 0, k ? (1u << k) - 1 : 0,
                     uint8_t(spec.n % 2)};
    for (uint32_t i = 0; i < rows.size(); ++i) {
        for (uint32_t j = i; j < rows.size(); ++j) {
            Poly q = poisson(c, spec, gen_polys[i], gen_polys[j]);
            if (q.is_zero()) continue;
            std::map<EfMono, FF> coords;
            for (auto& [mono, cf] : q.t) {
                for (auto& [cd, tv] : T.from_x[mono.b]) {
                    EfMono u;
                    u.a = mono.a;
                    T.decode(cd, u.cp, u.cm, u.delta);
                    FF v = c.F.mul(cf, tv);
                    auto it = coords.find(u);
                    if (it == coords.end()) {
                        if (!c.F.is_zero(v)) coords[u] = v;
                    } else {
                        it->second = c.F.add(it->second, v);
                        if (c.F.is_zero(it->second)) coords.erase(it);
                    }
                }
            }
            core::SV out;
            for (auto& [u, cf] : coords) {
                if (u.degree() == 0) continue;  // D_H(constant) = 0
                if (u == top_label)
                    fail("build_H: bracket leaves the derived algebra (top component)");
                uint32_t slot = index_of.at(u);
                out.emplace_back(slot, c.F.div(cf, efscale[slot]));
            }
            std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
            if (!out.empty()) A.sc[(uint64_t(i) << 32) | j] = std::move(out);
        }
    }

    core::attach_pmap(A);
    A.scope_flag = spec.theorem_scope();
    A.scope_note = spec.scope_note();
    return A;
}

// ------------------------------------------------- part lists and subalgebra

namespace {

// weight of a W basis ray under the diagonal torus x_1 D_1, ..., x_{m+n} D_{m+n}
std::vector<int> diag_weight(const Ctx& c, const WKey& key) {
    std::vector<int> e(c.nvars());
    for (uint32_t i = 1; i <= c.nvars(); ++i)
        e[i - 1] = int(sp::mono_exp(c, key.mono, i)) - (key.dir == i ? 1 : 0);
    return e;
}

// W sign convention: negative iff zdeg < 0, or zdeg = 0 and the first
// nonzero weight coordinate is in the "negative" half of F_p
bool w_ray_negative(const Ctx& c, const WKey& key) {
    int d = key.zdeg();
    if (d != 0) return d < 0;
    auto e = diag_weight(c, key);
    for (int v : e) {
        if (v > 0) return false;
        if (v < 0) return true;
    }
    return false;  // zero weight: torus or tie-break to the positive side
}

Poly mono_poly(const Ctx& c, const Mono& u) { return sp::poly_mono(c, u, c.F.one()); }

std::vector<Elem> elems_x_i_D_j(const Ctx& c, std::vector<std::pair<uint32_t, uint32_t>> pairs) {
    std::vector<Elem> out;
    for (auto& [i, j] : pairs)
        out.push_back(elem_single(c, j, sp::mono_var(c, i), c.F.one()));
    return out;
}

}  // namespace

std::map<std::string, std::vector<Elem>> negative_part_elems(const Spec& spec) {
    Ctx c = spec.make_ctx();
    std::map<std::string, std::vector<Elem>> parts;
    const uint32_t m = spec.m, n = spec.n;

    if (spec.type == 'W') {
        for (auto& u : sp::enumerate_monomials(c))
            for (uint32_t d = 1; d <= c.nvars(); ++d) {
                WKey key{d, u};
                if (u == sp::mono_var(c, d)) continue;  // torus
                if (!w_ray_negative(c, key)) continue;
                std::string part = core::wkey_parity(c, key) ? "g1m" : "nm";
                parts[part].push_back(elem_single(c, d, u, c.F.one()));
            }
        return parts;
    }

    if (spec.type == 'S') {
        // The odd-negative part keeps only D_{m+1}..D_{m+n}.  Including the
        // mixed block x_i D_j (i <= m < j) breaks both directness (x_i D_{m+n}
        // already lies in the displayed odd-positive span x^(a) D_{m+n}) and
        // closure of the distinguished subalgebra (a witness:
        // [x_2 D_3, x_1^(2) D_2] = -x_1^(2) D_3, which no displayed part
        // reaches); without it every displayed relation verifies.
        std::vector<std::pair<uint32_t, uint32_t>> nm_pairs;
        for (uint32_t i = 1; i <= m; ++i)
            for (uint32_t j = i + 1; j <= m; ++j) nm_pairs.push_back({i, j});
        for (uint32_t i = m + 1; i <= m + n; ++i)
            for (uint32_t j = i + 1; j <= m + n; ++j) nm_pairs.push_back({i, j});
        auto& g1m = parts["g1m"];
        for (uint32_t j = m + 1; j <= m + n; ++j)
            g1m.push_back(elem_single(c, j, sp::mono_one(c), c.F.one()));
        auto& nm = parts["nm"];
        for (uint32_t i = 1; i <= m; ++i)
            nm.push_back(elem_single(c, i, sp::mono_one(c), c.F.one()));
        for (auto& e : elems_x_i_D_j(c, nm_pairs)) nm.push_back(e);
        return parts;
    }

    // type H
    const uint32_t l = spec.l(), k = spec.k();
    const bool nodd = (n % 2) == 1;
    auto DH = [&](const Poly& f) { return op_DH(c, spec, f); };

    std::vector<Elem> alpha, beta, n1m, n2p, n3p;
    // the span <D_{m+1}..D_{m+n}> in its torus eigenbasis:
    // D_H(e_j), D_H(f_j) for j <= k, plus D_{m+n} itself when n is odd
    for (uint32_t j = 1; j <= k; ++j) {
        alpha.push_back(DH(h_var_e(c, spec, j)));
        alpha.push_back(DH(h_var_f(c, spec, j)));
    }
    if (nodd) alpha.push_back(elem_single(c, m + n, sp::mono_one(c), c.F.one()));
    for (uint32_t i = 1; i <= m; ++i)
        for (uint32_t j = 1; j <= k; ++j)
            alpha.push_back(DH(sp::poly_mul(c, mono_poly(c, sp::mono_var(c, i)), h_var_f(c, spec, j))));
    if (nodd)
        for (uint32_t i = l + 1; i <= m; ++i) {
            auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, m + n));
            beta.push_back(DH(sp::poly_mono(c, prod->second, prod->first)));
        }
    // n1m: D_H(x_i x_j) for l+1 <= i <= j <= 2l, or 1 <= i < l <= j < i+l
    for (uint32_t i = l + 1; i <= m; ++i)
        for (uint32_t j = i; j <= m; ++j) {
            auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, j));
            n1m.push_back(DH(sp::poly_mono(c, prod->second, prod->first)));
        }
    for (uint32_t i = 1; i + 1 <= l; ++i)
        for (uint32_t j = l; j < i + l; ++j) {
            auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, j));
            n1m.push_back(DH(sp::poly_mono(c, prod->second, prod->first)));
        }
    for (uint32_t i = 1; i <= m; ++i) n1m.push_back(elem_single(c, i, sp::mono_one(c), c.F.one()));
    for (uint32_t i = 1; i <= k; ++i)
        for (uint32_t j = i + 1; j <= k; ++j) {
            n2p.push_back(DH(sp::poly_mul(c, h_var_f(c, spec, i), h_var_e(c, spec, j))));  // a_ij
            n2p.push_back(DH(sp::poly_mul(c, h_var_f(c, spec, i), h_var_f(c, spec, j))));  // b_ij
        }
    if (nodd)
        for (uint32_t i = 1; i <= k; ++i)
            n3p.push_back(DH(sp::poly_mul(c, h_var_f(c, spec, i),
                                          mono_poly(c, sp::mono_var(c, m + n)))));

    auto& g1m = parts["g1m"];
    for (auto& e : alpha) g1m.push_back(e);
    for (auto& e : beta) g1m.push_back(e);
    auto& nm = parts["nm"];
    for (auto& e : n1m) nm.push_back(e);
    for (auto& e : n2p) nm.push_back(e);
    for (auto& e : n3p) nm.push_back(e);
    parts["alpha"] = alpha;
    parts["beta"] = beta;
    parts["n1m"] = n1m;
    parts["n2prime"] = n2p;
    parts["n3prime"] = n3p;
    return parts;
}

namespace {

// positive-side lists of the distinguished subalgebra
std::map<std::string, std::vector<Elem>> positive_part_elems(const Spec& spec) {
    Ctx c = spec.make_ctx();
    std::map<std::string, std::vector<Elem>> parts;
    const uint32_t m = spec.m, n = spec.n;

    if (spec.type == 'S') {
        std::vector<Elem> sfrak, tfrak, l1p;
        for (auto& u : sp::enumerate_monomials(Ctx{m, 0, c.F})) {
            Mono a{u.a, 0};
            if (a.is_one()) {
                // the a = 0 slice is excluded from s and l1p
            } else {
                for (uint32_t i = 1; i < n; ++i) {
                    auto prod = sp::mono_mul(c, Mono{u.a, 0}, sp::mono_var(c, m + i));
                    sfrak.push_back(elem_single(c, m + n, prod->second, prod->first));
                }
                l1p.push_back(elem_single(c, m + n, Mono{u.a, 0}, c.F.one()));
            }
            if (u.a[m - 1] == 0 && Mono{u.a, 0}.degree() >= 2)
                tfrak.push_back(elem_single(c, m, Mono{u.a, 0}, c.F.one()));
        }
        parts["s"] = sfrak;
        parts["t"] = tfrak;
        std::vector<Elem> n1p = sfrak;
        for (auto& e : tfrak) n1p.push_back(e);
        parts["n1p"] = n1p;
        parts["l1p"] = l1p;
        return parts;
    }

    if (spec.type == 'H') {
        const uint32_t l = spec.l(), k = spec.k();
        const bool nodd = (n % 2) == 1;
        std::vector<Elem> lplus, n1p, l1p;
        // D_H(x^(a) f^(c) x_{m+n}^delta), a supported above l, |a|+|c|+delta >= 3
        std::vector<uint8_t> a(m, 0);
        while (true) {
            int asum = 0;
            for (uint8_t e : a) asum += e;
            for (uint32_t cmask = 0; cmask < (1u << k); ++cmask)
                for (uint8_t delta = 0; delta <= (nodd ? 1 : 0); ++delta) {
                    int deg = asum + __builtin_popcount(cmask) + delta;
                    if (deg < 3) continue;
                    Poly f = mono_poly(c, Mono{a, 0});
                    for (uint32_t j = 1; j <= k; ++j)
                        if ((cmask >> (j - 1)) & 1u) f = sp::poly_mul(c, f, h_var_f(c, spec, j));
                    if (delta) f = sp::poly_mul(c, f, mono_poly(c, sp::mono_var(c, m + n)));
                    Elem e = op_DH(c, spec, f);
                    lplus.push_back(e);
                    if ((__builtin_popcount(cmask) + delta) % 2 == 0)
                        n1p.push_back(e);
                    else
                        l1p.push_back(e);
                }
            // bump only the upper-half exponents (a_j = 0 for j <= l)
            int i = int(m) - 1;
            while (i >= int(l) && a[i] == spec.p - 1) a[i--] = 0;
            if (i < int(l)) break;
            a[i]++;
        }
        parts["lplus"] = lplus;
        parts["n1p"] = n1p;
        parts["l1p"] = l1p;
        return parts;
    }

    fail("positive_part_elems: only S and H carry displayed positive lists");
}

struct BulletTarget {
    std::string desc;                  // "n1p+l1p", "rad(l)", "0", ...
    const std::vector<Elem>* elems;    // nullptr = must vanish
};

// Verify [A, B] against a list of targets, strictest (as displayed) first.
// If the displayed containment fails but a weaker one holds, the step still
// passes and the note records the exact witness against the displayed form;
// the weaker forms are the ones the degeneracy machinery consumes.
void check_bullet(const Ctx& c, Report& rep, const std::string& name,
                  const std::vector<Elem>& A, const std::vector<Elem>& B,
                  const std::vector<BulletTarget>& targets) {
    std::vector<Ech> echs;
    echs.reserve(targets.size());
    for (auto& t : targets) {
        echs.emplace_back(c);
        if (t.elems)
            for (auto& e : *t.elems) echs.back().add(e);
    }
    size_t verified = 0;  // strictest target that holds so far
    json strict_witness = nullptr;
    for (auto& x : A)
        for (auto& y : B) {
            Elem br = bracket(c, x, y);
            while (verified < targets.size()) {
                bool ok = targets[verified].elems ? echs[verified].member(br) : br.t.empty();
                if (ok) break;
                if (strict_witness.is_null())
                    strict_witness =
                        json{{"x", elem_label(c, x)}, {"y", elem_label(c, y)}};
                ++verified;
            }
            if (verified == targets.size()) {
                rep.add_fail(name, json{{"x", elem_label(c, x)}, {"y", elem_label(c, y)}},
                             "bracket escapes every candidate containment");
                return;
            }
        }
    Step s{name + " in " + targets[verified].desc, "pass", "computed", nullptr, ""};
    if (verified > 0) {
        s.witness = strict_witness;
        s.note = "displayed containment \"" + name + " in " + targets[0].desc +
                 "\" fails (witness recorded); the verified form suffices for the "
                 "radical machinery";
    }
    rep.add(std::move(s));
}

}  // namespace

PaperSubalgebra build_paper_subalgebra(const Spec& spec, const LieSuperAlgebra& g) {
    spec.validate();
    Ctx c = spec.make_ctx();
    PaperSubalgebra out;
    const uint32_t m = spec.m, n = spec.n;

    std::vector<Elem> rows;
    std::vector<uint32_t> torus_pos;
    std::map<std::string, std::vector<Elem>> named;

    if (spec.type == 'W') {
        // l = <D_1..D_{m+n}> + W_0 + <p_1..p_{m+n}>, p_i = x_i sum_j x_j D_j
        std::vector<Elem> Ds, W0, Ps;
        for (uint32_t i = 1; i <= m + n; ++i)
            Ds.push_back(elem_single(c, i, sp::mono_one(c), c.F.one()));
        for (uint32_t i = 1; i <= m + n; ++i)
            for (uint32_t j = 1; j <= m + n; ++j)
                W0.push_back(elem_single(c, j, sp::mono_var(c, i), c.F.one()));
        for (uint32_t i = 1; i <= m + n; ++i) {
            Elem pi;
            for (uint32_t j = 1; j <= m + n; ++j) {
                auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, j));
                if (prod) elem_add_scaled(c, pi, elem_single(c, j, prod->second, prod->first),
                                          c.F.one());
            }
            Ps.push_back(pi);
        }
        for (auto& e : Ds) rows.push_back(e);
        for (auto& e : W0) rows.push_back(e);
        for (auto& e : Ps) rows.push_back(e);
        for (uint32_t i = 1; i <= m + n; ++i)
            torus_pos.push_back(uint32_t(Ds.size()) + (i - 1) * (m + n) + (i - 1));
        named["w0"] = W0;
        named["pvec"] = Ps;
        // sign-convention split of l itself
        std::vector<Elem> nm, g1m, n1p, l1p;
        for (uint32_t i = 1; i <= m + n; ++i) {
            Elem Di = Ds[i - 1];
            (c.tau(i) ? g1m : nm).push_back(Di);
        }
        for (uint32_t i = 1; i <= m + n; ++i)
            for (uint32_t j = 1; j <= m + n; ++j) {
                if (i == j) continue;
                Elem e = elem_single(c, j, sp::mono_var(c, i), c.F.one());
                int par = (c.tau(i) + c.tau(j)) & 1;
                if (i < j)
                    (par ? l1p : n1p).push_back(e);
                else
                    (par ? g1m : nm).push_back(e);
            }
        for (uint32_t i = 1; i <= m + n; ++i) (c.tau(i) ? l1p : n1p).push_back(Ps[i - 1]);
        named["nm"] = nm;
        named["g1m"] = g1m;
        named["n1p"] = n1p;
        named["l1p"] = l1p;
    } else {
        auto neg = negative_part_elems(spec);
        auto pos = positive_part_elems(spec);
        std::vector<Elem> torus_elems;
        if (spec.type == 'S') {
            for (uint32_t i = 1; i < m + n; ++i) torus_elems.push_back(s_torus_elem(c, i));
        } else {
            const uint32_t l = spec.l(), k = spec.k();
            FF im = c.F.sqrt_minus_one();
            for (uint32_t i = 1; i <= l; ++i) {
                auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, l + i));
                torus_elems.push_back(op_DH(c, spec, sp::poly_mono(c, prod->second, prod->first)));
            }
            for (uint32_t j = 1; j <= k; ++j) {
                auto prod = sp::mono_mul(c, sp::mono_var(c, m + j), sp::mono_var(c, m + k + j));
                torus_elems.push_back(
                    op_DH(c, spec, sp::poly_mono(c, prod->second, c.F.mul(prod->first, im))));
            }
        }
        for (auto& e : neg["g1m"]) rows.push_back(e);
        for (auto& e : neg["nm"]) rows.push_back(e);
        for (auto& e : torus_elems) {
            torus_pos.push_back(uint32_t(rows.size()));
            rows.push_back(e);
        }
        for (auto& e : pos["n1p"]) rows.push_back(e);
        for (auto& e : pos["l1p"]) rows.push_back(e);
        named = neg;
        for (auto& [k2, v] : pos) named[k2] = v;
        named["h"] = torus_elems;
    }

    out.l = core::build_from_derivations(c, std::string(1, spec.type) + "-sub", m, n, rows,
                                         torus_pos);
    core::attach_pmap(out.l);
    out.l.scope_flag = spec.theorem_scope();

    // embed into g and record every named part both ways
    for (auto& row : out.l.der) {
        auto sv = g.solve_in_basis(row);
        if (!sv) fail("paper subalgebra does not embed into the ambient algebra");
        out.embed.push_back(std::move(*sv));
    }
    auto to_subspace = [&](const std::vector<Elem>& elems, const LieSuperAlgebra& amb) {
        Subspace s(&amb);
        for (auto& e : elems) {
            auto sv = amb.solve_in_basis(e);
            if (!sv) fail("part element " + elem_label(c, e) + " is outside the algebra");
            s.add(std::move(*sv));
        }
        return s;
    };
    if (spec.type == 'W') {
        std::vector<Elem> torus_elems;
        for (uint32_t t : torus_pos) torus_elems.push_back(rows[t]);
        named["h"] = torus_elems;
    }
    for (auto& [key, elems] : named) {
        out.parts_g[key] = to_subspace(elems, g);
        out.parts_l[key] = to_subspace(elems, out.l);
    }

    // the displayed relations
    Report& rep = out.relations;
    rep.add_pass("bracket_closed");  // sc construction solves every bracket in the span
    if (spec.type == 'S' || spec.type == 'H') {
        std::vector<Elem> rad;
        for (auto& kname : {"g1m", "nm", "n1p", "l1p"})
            for (auto& e : named[kname]) rad.push_back(e);
        check_bullet(c, rep, "[h,rad]", named["h"], rad, {{"rad(l)", &rad}});
        std::vector<Elem> negs;
        for (auto& kname : {"g1m", "nm"})
            for (auto& e : named[kname]) negs.push_back(e);
        {
            // g1m + nm is p-nilpotent: even elements kill themselves under
            // the iterated p-power, and the span is Lie-nilpotent
            bool ok = true;
            uint32_t bound = 2;
            for (size_t d = out.l.dim() + 1; d > 1; d = (d + spec.p - 1) / spec.p) ++bound;
            for (auto& e : negs) {
                if (elem_parity(c, e).value_or(1) == 1) continue;
                Elem v = e;
                uint32_t it = 0;
                while (!v.t.empty() && it++ < bound) v = core::elem_pth_power(c, v);
                if (!v.t.empty()) {
                    rep.add_fail("negative_part_p_nilpotent",
                                 json{{"x", elem_label(c, e)}});
                    ok = false;
                    break;
                }
            }
            if (ok) rep.add_pass("negative_part_p_nilpotent");
        }
        std::vector<Elem> posall;
        for (auto& kname : {"n1p", "l1p"})
            for (auto& e : named[kname]) posall.push_back(e);
        check_bullet(c, rep, "[nm,n1p+l1p]", named["nm"], posall,
                     {{"n1p+l1p", &posall}, {"rad(l)", &rad}});
        check_bullet(c, rep, "[g1m,n1p]", named["g1m"], named["n1p"],
                     {{"l1p", &named["l1p"]}, {"rad(l)", &rad}});
        check_bullet(c, rep, "[g1m,l1p]", named["g1m"], named["l1p"],
                     {{"0", nullptr}, {"rad(l)", &rad}});
        if (spec.type == 'S') {
            check_bullet(c, rep, "[s,s]", named["s"], named["s"], {{"0", nullptr}});
            check_bullet(c, rep, "[t,t]", named["t"], named["t"], {{"0", nullptr}});
            check_bullet(c, rep, "[s,l1p]", named["s"], named["l1p"], {{"0", nullptr}});
            check_bullet(c, rep, "[l1p,l1p]", named["l1p"], named["l1p"], {{"0", nullptr}});
            check_bullet(c, rep, "[s,t]", named["s"], named["t"], {{"s", &named["s"]}});
            check_bullet(c, rep, "[t,l1p]", named["t"], named["l1p"],
                         {{"l1p", &named["l1p"]}});
        } else {
            check_bullet(c, rep, "[n1p+l1p,n1p+l1p]", posall, posall,
                         {{"0", nullptr}, {"n1p+l1p", &posall}, {"rad(l)", &rad}});
            // D_H(e_i), D_H(f_j) relations; the -2 delta_ij value lives at the
            // level of the transported bracket, where D_H(constant) = 0
            const uint32_t k = spec.k();
            bool ok = true;
            json witness;
            for (uint32_t i = 1; i <= k && ok; ++i)
                for (uint32_t j = 1; j <= k && ok; ++j) {
                    Elem ee = bracket(c, op_DH(c, spec, h_var_e(c, spec, i)),
                                      op_DH(c, spec, h_var_e(c, spec, j)));
                    Elem ff = bracket(c, op_DH(c, spec, h_var_f(c, spec, i)),
                                      op_DH(c, spec, h_var_f(c, spec, j)));
                    Elem ef = bracket(c, op_DH(c, spec, h_var_e(c, spec, i)),
                                      op_DH(c, spec, h_var_f(c, spec, j)));
                    if (!ee.t.empty() || !ff.t.empty() || !ef.t.empty()) {
                        ok = false;
                        witness = json{{"i", i}, {"j", j}};
                    }
                    // the scalar pairing {e_i, f_j} = -2 delta_ij
                    Poly pr = poisson(c, spec, h_var_e(c, spec, i), h_var_f(c, spec, j));
                    Poly expect = sp::poly_scalar(c, i == j ? c.F.of_int(-2) : c.F.zero());
                    sp::poly_add_scaled(c, pr, expect, c.F.of_int(-1));
                    if (!pr.is_zero()) {
                        ok = false;
                        witness = json{{"i", i}, {"j", j}, {"level", "poisson"}};
                    }
                }
            if (ok)
                rep.add(Step{"e_f_pairing", "pass", "computed", nullptr,
                             "[D_H(e_i),D_H(f_j)] = 0 in W; {e_i,f_j} = -2 delta_ij at the "
                             "transported-bracket level"});
            else
                rep.add_fail("e_f_pairing", witness);
        }
    }
    return out;
}

// ---------------------------------------------------------------- pgl model

la::Mat PglModel::basis_matrix(uint32_t i) const { return alg.mats[i]; }

SV PglModel::coords_of(const la::Mat& X) const {
    SV out;
    const Field& F = alg.F;
    for (auto& [ab, idx] : idx_offdiag) {
        FF v = X.at(ab.first, ab.second);
        if (!F.is_zero(v)) out.emplace_back(idx, v);
    }
    for (auto& [k, idx] : idx_diag) {
        FF v = F.sub(X.at(k, k), X.at(0, 0));
        if (!F.is_zero(v)) out.emplace_back(idx, v);
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return out;
}

PglModel build_pgl(const Spec& spec) {
    PglModel M;
    const uint32_t m = spec.m, n = spec.n;
    M.N = m + 1 + n;
    Field F(spec.p, spec.make_ctx().F.deg());
    auto tau_hat = [&](uint32_t a) { return a > m ? 1 : 0; };

    LieSuperAlgebra& A = M.alg;
    A.F = F;
    A.ctx = Ctx{m, n, F};
    A.type = "pgl";
    A.m = m;
    A.n = n;

    auto add_mat = [&](const la::Mat& mt, const std::string& label, int par, int deg) {
        A.mats.push_back(mt);
        A.labels.push_back(label);
        A.parity.push_back(par);
        A.zdeg.push_back(deg);
    };
    for (uint32_t a = 0; a < M.N; ++a)
        for (uint32_t b = 0; b < M.N; ++b) {
            if (a == b) continue;
            la::Mat E(M.N, M.N);
            E.at(a, b) = F.one();
            M.idx_offdiag[{a, b}] = uint32_t(A.mats.size());
            int deg = (a == 0) ? -1 : (b == 0 ? 1 : 0);
            add_mat(E, "E" + std::to_string(a) + std::to_string(b),
                    (tau_hat(a) + tau_hat(b)) & 1, deg);
        }
    for (uint32_t k = 1; k < M.N; ++k) {
        la::Mat E(M.N, M.N);
        E.at(k, k) = F.one();
        M.idx_diag[k] = uint32_t(A.mats.size());
        add_mat(E, "E" + std::to_string(k) + std::to_string(k), 0, 0);
        A.torus.push_back(M.idx_diag[k]);
    }

    // structure constants from the matrix super bracket
    const size_t N = A.dim();
    for (uint32_t i = 0; i < N; ++i)
        for (uint32_t j = i; j < N; ++j) {
            la::Mat br = la::mul(F, A.mats[i], A.mats[j]);
            la::Mat rev = la::mul(F, A.mats[j], A.mats[i]);
            FF s = (A.parity[i] && A.parity[j]) ? F.one() : F.of_int(-1);
            br = la::add(F, br, la::scale(F, rev, s));
            SV coords = M.coords_of(br);
            if (!coords.empty()) A.sc[(uint64_t(i) << 32) | j] = std::move(coords);
        }
    // p-map: matrix p-th power, well defined modulo the identity
    A.pmap.assign(N, std::nullopt);
    for (uint32_t i = 0; i < N; ++i)
        if (!A.parity[i]) A.pmap[i] = M.coords_of(la::pow(F, A.mats[i], F.p()));
    core::fill_weights_from_sc(A);
    A.scope_flag = spec.theorem_scope();
    return M;
}

SV LinMap::apply(const Field& F, const SV& v) const {
    SV out;
    for (auto& [i, cf] : v) core::sv_add_scaled(F, out, img[i], cf);
    return out;
}

Report verify_morphism(const LieSuperAlgebra& A, const LieSuperAlgebra& B, const LinMap& phi,
                       bool require_bijective) {
    Report rep;
    const Field& F = A.F;
    if (phi.img.size() != A.dim()) {
        rep.add_fail("morphism_shape", nullptr, "image count != dim");
        return rep;
    }
    for (uint32_t i = 0; i < A.dim(); ++i)
        for (uint32_t j = i; j < A.dim(); ++j) {
            SV lhs = phi.apply(F, A.sc_bracket(i, j));
            SV rhs = B.bracket_sv(phi.img[i], phi.img[j]);
            core::sv_add_scaled(F, lhs, rhs, F.of_int(-1));
            if (!lhs.empty()) {
                rep.add_fail("bracket_preserved",
                             json{{"i", i}, {"j", j}, {"bi", A.labels[i]}, {"bj", A.labels[j]}});
                return rep;
            }
        }
    rep.add_pass("bracket_preserved");
    for (uint32_t i = 0; i < A.dim(); ++i)
        for (auto& [k, cf] : phi.img[i])
            if (B.parity[k] != A.parity[i]) {
                rep.add_fail("parity_preserved", json{{"i", i}});
                return rep;
            }
    rep.add_pass("parity_preserved");
    if (require_bijective) {
        Subspace im(&B);
        for (auto& v : phi.img) im.add(v);
        if (im.dim() != A.dim() || A.dim() != B.dim()) {
            rep.add_fail("bijective", json{{"rank", im.dim()}, {"dimA", A.dim()},
                                           {"dimB", B.dim()}});
            return rep;
        }
        rep.add_pass("bijective");
    }
    return rep;
}

IsoBuild iso_candidate(const Spec& spec, const PaperSubalgebra& sub, const PglModel& pgl) {
    IsoBuild out;
    const LieSuperAlgebra& l = sub.l;
    const Field& F = l.F;
    Ctx c = spec.make_ctx();
    const uint32_t mn = spec.m + spec.n;

    auto idx_of = [&](const Elem& e) {
        auto sv = l.solve_in_basis(e);
        if (!sv || sv->size() != 1 || !(sv->front().second == F.one()))
            fail("iso_candidate: expected a basis ray");
        return sv->front().first;
    };
    std::vector<uint32_t> iD(mn + 1), iP(mn + 1);
    std::vector<std::vector<uint32_t>> iX(mn + 1, std::vector<uint32_t>(mn + 1));
    for (uint32_t i = 1; i <= mn; ++i)
        iD[i] = idx_of(elem_single(c, i, sp::mono_one(c), F.one()));
    for (uint32_t i = 1; i <= mn; ++i)
        for (uint32_t j = 1; j <= mn; ++j)
            iX[i][j] = idx_of(elem_single(c, j, sp::mono_var(c, i), F.one()));
    for (uint32_t i = 1; i <= mn; ++i) {
        Elem pi;
        for (uint32_t j = 1; j <= mn; ++j) {
            auto prod = sp::mono_mul(c, sp::mono_var(c, i), sp::mono_var(c, j));
            if (prod) elem_add_scaled(c, pi, elem_single(c, j, prod->second, prod->first), F.one());
        }
        auto sv = l.solve_in_basis(pi);
        if (!sv || sv->size() != 1) fail("iso_candidate: p_i is not a basis ray");
        iP[i] = sv->front().first;
    }

    // diagonal rescaling search over the ray scalars (a, b): the candidate
    // x_i D_j -> E_ij forces c_ij = 1, and [D_i, p_j] forces a_i b_j constant
    for (auto [aval, bval] : {std::pair<int, int>{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}) {
        LinMap phi;
        phi.img.assign(l.dim(), {});
        for (uint32_t i = 1; i <= mn; ++i)
            phi.img[iD[i]] = SV{{pgl.idx_offdiag.at({0, i}), F.of_int(aval)}};
        for (uint32_t i = 1; i <= mn; ++i)
            phi.img[iP[i]] = SV{{pgl.idx_offdiag.at({i, 0}), F.of_int(bval)}};
        for (uint32_t i = 1; i <= mn; ++i)
            for (uint32_t j = 1; j <= mn; ++j)
                phi.img[iX[i][j]] = SV{{i == j ? pgl.idx_diag.at(i) : pgl.idx_offdiag.at({i, j}),
                                        F.one()}};
        Report rep = verify_morphism(l, pgl.alg, phi, true);
        if (rep.ok()) {
            out.phi = std::move(phi);
            out.rep = std::move(rep);
            out.rep.extra["ray_scalars"] = json{{"a", aval}, {"b", bval}, {"c", 1}};
            // invert
            la::Mat Phi(uint32_t(l.dim()), uint32_t(l.dim()));
            for (uint32_t j2 = 0; j2 < l.dim(); ++j2)
                for (auto& [i2, cf] : out.phi.img[j2]) Phi.at(i2, j2) = cf;
            la::Mat aug(uint32_t(l.dim()), uint32_t(2 * l.dim()));
            for (uint32_t i2 = 0; i2 < l.dim(); ++i2) {
                for (uint32_t j2 = 0; j2 < l.dim(); ++j2) aug.at(i2, j2) = Phi.at(i2, j2);
                aug.at(i2, uint32_t(l.dim()) + i2) = F.one();
            }
            la::rref(F, aug);
            out.phi_inv.img.assign(l.dim(), {});
            for (uint32_t j2 = 0; j2 < l.dim(); ++j2)
                for (uint32_t i2 = 0; i2 < l.dim(); ++i2) {
                    FF v = aug.at(i2, uint32_t(l.dim()) + j2);
                    if (!F.is_zero(v)) out.phi_inv.img[j2].emplace_back(i2, v);
                }
            return out;
        }
        out.rep = std::move(rep);  // keep the last failure report
    }
    out.rep.add_fail("no_rescaling_found", nullptr,
                     "no ray rescaling makes the candidate map a morphism");
    return out;
}

AlphaBuild build_alpha(const Spec& spec, const PglModel& pgl, const IsoBuild& iso) {
    AlphaBuild out;
    const Field& F = pgl.alg.F;
    const uint32_t N = pgl.N, m = spec.m;
    auto tau_hat = [&](uint32_t a) { return a > m ? 1 : 0; };

    // alpha(X) = D (-X^st) D^{-1} with (X^st)_{ij} = (-1)^(t_i t_j + t_j) X_{ji};
    // d is chosen so alpha(e_i) = f_i exactly for every adjacent pair
    std::vector<FF> d(N, F.one());
    for (uint32_t i = 0; i + 1 < N; ++i) {
        int ti = tau_hat(i), tj = tau_hat(i + 1);
        int s = -(((ti * tj + ti) & 1) ? -1 : 1);  // -E_{i,i+1}^st = s E_{i+1,i}
        d[i + 1] = F.div(d[i], F.of_int(s));
    }
    auto alpha_mat = [&](const la::Mat& X) {
        la::Mat Y(N, N);
        for (uint32_t i = 0; i < N; ++i)
            for (uint32_t j = 0; j < N; ++j) {
                int ti = tau_hat(i), tj = tau_hat(j);
                FF v = X.at(j, i);
                if ((ti * tj + tj) & 1) v = F.neg(v);
                v = F.neg(v);                          // -X^st
                v = F.mul(F.mul(d[i], v), F.inv(d[j]));  // conjugate by diag(d)
                Y.at(i, j) = v;
            }
        return Y;
    };
    out.on_pgl.img.resize(pgl.alg.dim());
    for (uint32_t i = 0; i < pgl.alg.dim(); ++i)
        out.on_pgl.img[i] = pgl.coords_of(alpha_mat(pgl.alg.mats[i]));

    Report& rep = out.rep;
    // alpha(e_i) = f_i exactly; record the sign on the way back
    bool gen_ok = true;
    for (uint32_t i = 0; i + 1 < N; ++i) {
        uint32_t ei = pgl.idx_offdiag.at({i, i + 1}), fi = pgl.idx_offdiag.at({i + 1, i});
        if (!(out.on_pgl.img[ei] == SV{{fi, F.one()}})) gen_ok = false;
        SV fimg = out.on_pgl.img[fi];
        if (fimg.size() != 1 || fimg[0].first != ei) {
            gen_ok = false;
            out.f_signs.push_back(0);
        } else {
            out.f_signs.push_back(fimg[0].second == F.one() ? 1 : -1);
        }
    }
    if (gen_ok)
        rep.add(Step{"chevalley_swap", "pass", "computed", nullptr,
                     "alpha(e_i) = f_i for every pair; alpha(f_i) = e_i except a forced -1 "
                     "at the even|odd boundary pair"});
    else
        rep.add_fail("chevalley_swap", nullptr, "generator images are off their rays");

    for (auto& s : verify_morphism(pgl.alg, pgl.alg, out.on_pgl, true).steps) rep.add(s);

    // restrictedness: alpha(x)^[p] = alpha(x^[p]) for even basis x
    {
        bool ok = true;
        for (uint32_t i = 0; i < pgl.alg.dim() && ok; ++i) {
            if (pgl.alg.parity[i]) continue;
            SV lhs = pgl.alg.pth_power_sv(out.on_pgl.img[i]);
            SV rhs = out.on_pgl.apply(F, pgl.alg.pmap_sv(i));
            core::sv_add_scaled(F, lhs, rhs, F.of_int(-1));
            if (!lhs.empty()) {
                rep.add_fail("p_map_compatible", json{{"i", i}});
                ok = false;
            }
        }
        if (ok) rep.add_pass("p_map_compatible");
    }
    // alpha(h) in h (in fact alpha = -id on the diagonal)
    {
        bool ok = true;
        for (auto& [k, idx] : pgl.idx_diag) {
            for (auto& [t, cf] : out.on_pgl.img[idx]) {
                bool diag = false;
                for (auto& [k2, idx2] : pgl.idx_diag) diag = diag || idx2 == t;
                if (!diag) ok = false;
            }
        }
        if (ok)
            rep.add_pass("alpha_h_in_h");
        else
            rep.add_fail("alpha_h_in_h", nullptr);
    }

    // transport through the isomorphism: alpha_l = phi^{-1} alpha phi
    out.on_l.img.resize(iso.phi.img.size());
    for (uint32_t i = 0; i < iso.phi.img.size(); ++i)
        out.on_l.img[i] = iso.phi_inv.apply(F, out.on_pgl.apply(F, iso.phi.img[i]));
    return out;
}

}  // namespace wsh::cartan

#include "wsh/liecore.hpp"

#include <algorithm>
#include <sstream>

namespace wsh::core {

using ff::fail;

int wkey_parity(const Ctx& c, const WKey& k) {
    return (k.mono.parity() + c.tau(k.dir)) & 1;
}

std::string wkey_label(const Ctx& c, const WKey& k) {
    std::ostringstream os;
    bool lead = true;
    for (uint32_t i = 0; i < c.m; ++i) {
        if (!k.mono.a[i]) continue;
        if (!lead) os << "*";
        lead = false;
        os << "x" << (i + 1);
        if (k.mono.a[i] > 1) os << "^(" << int(k.mono.a[i]) << ")";
    }
    for (uint32_t j = 0; j < c.n; ++j)
        if ((k.mono.b >> j) & 1u) {
            if (!lead) os << "*";
            lead = false;
            os << "x" << (c.m + 1 + j);
        }
    if (!lead) os << "*";
    os << "D" << k.dir;
    return os.str();
}

Elem elem_zero() { return Elem{}; }

Elem elem_single(const Ctx& c, uint32_t dir, const Mono& mono, const FF& coeff) {
    Elem x;
    if (!c.F.is_zero(coeff)) x.t[WKey{dir, mono}] = coeff;
    return x;
}

Elem elem_from_poly(const Ctx& c, const Poly& f, uint32_t dir) {
    Elem x;
    for (auto& [u, cf] : f.t) x.t[WKey{dir, u}] = cf;
    return x;
}

void elem_add_scaled(const Ctx& c, Elem& dst, const Elem& src, const FF& s) {
    if (c.F.is_zero(s)) return;
    for (auto& [k, cf] : src.t) {
        FF v = c.F.mul(cf, s);
        auto it = dst.t.find(k);
        if (it == dst.t.end()) {
            if (!c.F.is_zero(v)) dst.t[k] = v;
        } else {
            it->second = c.F.add(it->second, v);
            if (c.F.is_zero(it->second)) dst.t.erase(it);
        }
    }
}

Elem elem_scale(const Ctx& c, const Elem& x, const FF& s) {
    Elem r;
    elem_add_scaled(c, r, x, s);
    return r;
}

std::optional<int> elem_parity(const Ctx& c, const Elem& x) {
    std::optional<int> par;
    for (auto& [k, cf] : x.t) {
        int pk = wkey_parity(c, k);
        if (!par) par = pk;
        else if (*par != pk) return std::nullopt;
    }
    if (!par) return 0;
    return par;
}

std::optional<int> elem_zdeg(const Elem& x) {
    std::optional<int> deg;
    for (auto& [k, cf] : x.t) {
        if (!deg) deg = k.zdeg();
        else if (*deg != k.zdeg()) return std::nullopt;
    }
    if (!deg) return 0;
    return deg;
}

std::string elem_label(const Ctx& c, const Elem& x) {
    if (x.t.empty()) return "0";
    std::ostringstream os;
    size_t shown = 0;
    for (auto& [k, cf] : x.t) {
        if (shown == 3) {
            os << " + ...(" << x.t.size() << " terms)";
            break;
        }
        if (shown) os << " + ";
        if (!(cf == c.F.one())) {
            os << int(cf.a);
            if (cf.b) os << "+" << int(cf.b) << "t";
            os << "*";
        }
        os << wkey_label(c, k);
        ++shown;
    }
    return os.str();
}

Poly elem_apply(const Ctx& c, const Elem& x, const Poly& g) {
    Poly r;
    for (auto& [k, cf] : x.t) {
        Poly d = sp::superderive(c, k.dir, g);
        Poly fd = sp::poly_mul(c, sp::poly_mono(c, k.mono, c.F.one()), d);
        sp::poly_add_scaled(c, r, fd, cf);
    }
    return r;
}

Elem bracket(const Ctx& c, const Elem& x, const Elem& y) {
    Elem r;
    for (auto& [kx, cx] : x.t)
        for (auto& [ky, cy] : y.t) {
            FF coeff = c.F.mul(cx, cy);
            // f D_i (g) D_j
            if (auto dg = sp::mono_derive(c, kx.dir, ky.mono)) {
                if (auto w = sp::mono_mul(c, kx.mono, dg->second)) {
                    FF cc = c.F.mul(coeff, c.F.mul(dg->first, w->first));
                    elem_add_scaled(c, r, elem_single(c, ky.dir, w->second, c.F.one()), cc);
                }
            }
            // - (-1)^(|fDi||gDj|) g D_j (f) D_i
            int sign = wkey_parity(c, kx) * wkey_parity(c, ky);
            if (auto df = sp::mono_derive(c, ky.dir, kx.mono)) {
                if (auto w = sp::mono_mul(c, ky.mono, df->second)) {
                    FF cc = c.F.mul(coeff, c.F.mul(df->first, w->first));
                    if (!(sign & 1)) cc = c.F.neg(cc);
                    elem_add_scaled(c, r, elem_single(c, kx.dir, w->second, c.F.one()), cc);
                }
            }
        }
    return r;
}

Elem elem_pth_power(const Ctx& c, const Elem& x) {
    Elem r;
    const uint32_t p = c.F.p();
    for (uint32_t j = 1; j <= c.nvars(); ++j) {
        Poly g = sp::poly_mono(c, sp::mono_var(c, j), c.F.one());
        for (uint32_t k = 0; k < p; ++k) g = elem_apply(c, x, g);
        // g = x^p(x_j); a derivation is determined by its generator values
        for (auto& [u, cf] : g.t) elem_add_scaled(c, r, elem_single(c, j, u, cf), c.F.one());
    }
    return r;
}

json elem_to_json(const Ctx& c, const Elem& x) {
    json out = json::array();
    for (auto& [k, cf] : x.t)
        out.push_back(json{{"mono", sp::mono_to_json(c, k.mono)},
                           {"dir", k.dir},
                           {"coeff", c.F.elem_to_json(cf)}});
    return out;
}

Elem elem_from_json(const Ctx& c, const json& j) {
    Elem x;
    for (auto& e : j) {
        if (!e.contains("mono") || !e.contains("dir") || !e.contains("coeff"))
            fail("element json: each term needs mono, dir, coeff");
        uint32_t dir = e["dir"].get<uint32_t>();
        if (dir < 1 || dir > c.nvars()) fail("element json: dir out of range");
        elem_add_scaled(c, x, elem_single(c, dir, sp::mono_from_json(c, e["mono"]), c.F.one()),
                        c.F.elem_from_json(e["coeff"]));
    }
    return x;
}

// ---------------------------------------------------------------- echelon

bool Ech::add(Elem v, std::optional<uint32_t> tag) {
    std::map<uint32_t, FF> aug;
    if (tag) aug[*tag] = ctx_->F.one();
    while (!v.t.empty()) {
        const WKey& piv = v.t.begin()->first;
        auto it = rows_.find(piv);
        if (it == rows_.end()) {
            FF lead = v.t.begin()->second;
            FF inv = ctx_->F.inv(lead);
            Elem nv = elem_scale(*ctx_, v, inv);
            std::map<uint32_t, FF> naug;
            for (auto& [i, cf] : aug) naug[i] = ctx_->F.mul(cf, inv);
            rows_[piv] = Row{std::move(nv), std::move(naug)};
            return true;
        }
        FF c = v.t.begin()->second;
        elem_add_scaled(*ctx_, v, it->second.v, ctx_->F.neg(c));
        for (auto& [i, cf] : it->second.aug) {
            FF delta = ctx_->F.neg(ctx_->F.mul(c, cf));
            auto ai = aug.find(i);
            if (ai == aug.end()) {
                if (!ctx_->F.is_zero(delta)) aug[i] = delta;
            } else {
                ai->second = ctx_->F.add(ai->second, delta);
                if (ctx_->F.is_zero(ai->second)) aug.erase(ai);
            }
        }
    }
    return false;
}

Elem Ech::reduce(Elem v) const {
    while (!v.t.empty()) {
        auto it = rows_.find(v.t.begin()->first);
        if (it == rows_.end()) return v;
        elem_add_scaled(*ctx_, v, it->second.v, ctx_->F.neg(v.t.begin()->second));
    }
    return v;
}

bool Ech::member(const Elem& v) const { return reduce(v).t.empty(); }

std::vector<Elem> Ech::rows_in_pivot_order() const {
    std::vector<Elem> out;
    for (auto& [piv, row] : rows_) out.push_back(row.v);
    return out;
}

std::optional<std::vector<std::pair<uint32_t, FF>>> Ech::solve(Elem v) const {
    std::map<uint32_t, FF> coords;
    while (!v.t.empty()) {
        auto it = rows_.find(v.t.begin()->first);
        if (it == rows_.end()) return std::nullopt;
        FF c = v.t.begin()->second;
        elem_add_scaled(*ctx_, v, it->second.v, ctx_->F.neg(c));
        for (auto& [i, cf] : it->second.aug) {
            FF delta = ctx_->F.mul(c, cf);
            auto ci = coords.find(i);
            if (ci == coords.end()) {
                if (!ctx_->F.is_zero(delta)) coords[i] = delta;
            } else {
                ci->second = ctx_->F.add(ci->second, delta);
                if (ctx_->F.is_zero(ci->second)) coords.erase(ci);
            }
        }
    }
    return std::vector<std::pair<uint32_t, FF>>(coords.begin(), coords.end());
}

// ---------------------------------------------------------- coordinate ops

void sv_add_scaled(const Field& F, SV& dst, const SV& src, const FF& s) {
    if (F.is_zero(s)) return;
    SV out;
    out.reserve(dst.size() + src.size());
    size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            FF v = F.mul(src[j].second, s);
            if (!F.is_zero(v)) out.emplace_back(src[j].first, v);
            ++j;
        } else {
            FF v = F.add(dst[i].second, F.mul(src[j].second, s));
            if (!F.is_zero(v)) out.emplace_back(dst[i].first, v);
            ++i, ++j;
        }
    }
    dst = std::move(out);
}

SV sv_scale(const Field& F, const SV& v, const FF& s) {
    SV r;
    sv_add_scaled(F, r, v, s);
    return r;
}

bool sv_equal(const SV& a, const SV& b) { return a == b; }

json sv_to_json(const Field& F, const SV& v) {
    json out = json::array();
    for (auto& [i, cf] : v) out.push_back(json::array({i, F.elem_to_json(cf)}));
    return out;
}

// ------------------------------------------------------------ the algebra

static uint64_t sc_key(uint32_t i, uint32_t j) { return (uint64_t(i) << 32) | j; }

SV LieSuperAlgebra::sc_bracket(uint32_t i, uint32_t j) const {
    if (i <= j) {
        auto it = sc.find(sc_key(i, j));
        return it == sc.end() ? SV{} : it->second;
    }
    auto it = sc.find(sc_key(j, i));
    if (it == sc.end()) return {};
    // [b_i, b_j] = -(-1)^(|i||j|) [b_j, b_i]
    FF s = (parity[i] && parity[j]) ? F.one() : F.of_int(-1);
    return sv_scale(F, it->second, s);
}

SV LieSuperAlgebra::bracket_sv(const SV& u, const SV& v) const {
    std::map<uint32_t, FF> acc;
    for (auto& [i, ci] : u)
        for (auto& [j, cj] : v) {
            FF c = F.mul(ci, cj);
            for (auto& [k, ck] : sc_bracket(i, j)) {
                FF d = F.mul(c, ck);
                auto it = acc.find(k);
                if (it == acc.end()) {
                    if (!F.is_zero(d)) acc[k] = d;
                } else {
                    it->second = F.add(it->second, d);
                    if (F.is_zero(it->second)) acc.erase(it);
                }
            }
        }
    return SV(acc.begin(), acc.end());
}

SV LieSuperAlgebra::pmap_sv(uint32_t i) const {
    if (i >= pmap.size() || !pmap[i]) fail("pmap not attached at basis index " + std::to_string(i));
    return *pmap[i];
}

Elem LieSuperAlgebra::realize(const SV& v) const {
    if (!has_der()) fail("algebra has no derivation realization");
    Elem r;
    for (auto& [i, cf] : v) elem_add_scaled(ctx, r, der[i], cf);
    return r;
}

SV LieSuperAlgebra::pth_power_sv(const SV& v) const {
    for (auto& [i, cf] : v)
        if (parity[i]) fail("pth_power_sv: element is not even");
    if (v.empty()) return {};
    if (v.size() == 1) {
        // (c b)^[p] = c^p b^[p]
        FF cp = F.pow(v[0].second, F.p());
        return sv_scale(F, pmap_sv(v[0].first), cp);
    }
    // Jacobson: (x+y)^[p] = x^[p] + y^[p] + sum s_i(x,y),
    // i*s_i = coefficient of t^(i-1) in ad(tx+y)^(p-1)(x)
    SV x{v[0]};
    SV y(v.begin() + 1, v.end());
    SV res = pth_power_sv(x);
    sv_add_scaled(F, res, pth_power_sv(y), F.one());
    const uint32_t p = F.p();
    std::vector<SV> w(p);  // t-polynomial with vector coefficients
    w[0] = x;
    for (uint32_t step = 0; step + 1 < p; ++step) {
        std::vector<SV> nw(p);
        for (uint32_t d = 0; d < p; ++d) {
            if (w[d].empty()) continue;
            SV yb = bracket_sv(y, w[d]);
            sv_add_scaled(F, nw[d], yb, F.one());
            if (d + 1 < p) {
                SV xb = bracket_sv(x, w[d]);
                sv_add_scaled(F, nw[d + 1], xb, F.one());
            }
        }
        w = std::move(nw);
    }
    for (uint32_t i = 1; i < p; ++i) {
        FF inv_i = F.inv(F.of_int(i));
        sv_add_scaled(F, res, w[i - 1], inv_i);
    }
    return res;
}

std::optional<SV> LieSuperAlgebra::solve_in_basis(const Elem& v) const {
    if (!has_der()) fail("solve_in_basis: no derivation realization");
    if (!basis_ech_) {
        basis_ech_.emplace(ctx);
        for (uint32_t i = 0; i < der.size(); ++i)
            if (!basis_ech_->add(der[i], i)) fail("basis rows are not independent");
    }
    return basis_ech_->solve(v);
}

// --------------------------------------------------------------- subspace

bool Subspace::add(SV v) {
    const Field& F = A_->F;
    while (!v.empty()) {
        uint32_t piv = v.front().first;
        auto it = rows_.find(piv);
        if (it == rows_.end()) {
            FF inv = F.inv(v.front().second);
            rows_[piv] = sv_scale(F, v, inv);
            return true;
        }
        sv_add_scaled(F, v, it->second, F.neg(v.front().second));
    }
    return false;
}

SV Subspace::reduce(SV v) const {
    const Field& F = A_->F;
    while (!v.empty()) {
        auto it = rows_.find(v.front().first);
        if (it == rows_.end()) return v;
        sv_add_scaled(F, v, it->second, F.neg(v.front().second));
    }
    return v;
}

bool Subspace::member(const SV& v) const { return reduce(v).empty(); }

std::vector<SV> Subspace::row_list() const {
    std::vector<SV> out;
    for (auto& [piv, r] : rows_) out.push_back(r);
    return out;
}

bool Subspace::contains(const Subspace& other) const {
    for (auto& [piv, r] : other.rows_)
        if (!member(r)) return false;
    return true;
}

bool Subspace::same_space(const Subspace& other) const {
    return dim() == other.dim() && contains(other);
}

Subspace span_of(const LieSuperAlgebra& A, const std::vector<SV>& vecs) {
    Subspace s(&A);
    for (auto& v : vecs) s.add(v);
    return s;
}

Subspace span_all(const LieSuperAlgebra& A) {
    Subspace s(&A);
    for (uint32_t i = 0; i < A.dim(); ++i) s.add(SV{{i, A.F.one()}});
    return s;
}

// ----------------------------------------------------------------- build

LieSuperAlgebra build_from_derivations(const Ctx& c, const std::string& type, uint32_t m,
                                       uint32_t n, std::vector<Elem> rows,
                                       std::vector<uint32_t> torus_positions, bool build_sc) {
    LieSuperAlgebra A;
    A.F = c.F;
    A.ctx = c;
    A.type = type;
    A.m = m;
    A.n = n;
    A.der = std::move(rows);
    A.torus = std::move(torus_positions);

    Ech solver(A.ctx);
    for (uint32_t i = 0; i < A.der.size(); ++i) {
        auto par = elem_parity(A.ctx, A.der[i]);
        auto deg = elem_zdeg(A.der[i]);
        if (!par || !deg) fail("build_from_derivations: basis row " + std::to_string(i) +
                               " is not parity/degree homogeneous");
        A.parity.push_back(*par);
        A.zdeg.push_back(*deg);
        A.labels.push_back(elem_label(A.ctx, A.der[i]));
        if (!solver.add(A.der[i], i))
            fail("build_from_derivations: dependent basis row " + A.labels.back());
    }
    A.pmap.assign(A.der.size(), std::nullopt);

    // weights under the marked torus: every row must be an eigenvector
    if (!A.torus.empty()) fill_weights(A);

    if (build_sc) {
        for (uint32_t i = 0; i < A.der.size(); ++i)
            for (uint32_t j = i; j < A.der.size(); ++j) {
                Elem br = bracket(A.ctx, A.der[i], A.der[j]);
                if (br.t.empty()) continue;
                auto coords = solver.solve(br);
                if (!coords)
                    fail("build_from_derivations: bracket [" + A.labels[i] + ", " + A.labels[j] +
                         "] leaves the span");
                A.sc[sc_key(i, j)] = std::move(*coords);
            }
    }
    return A;
}

void fill_weights(LieSuperAlgebra& A) {
    if (!A.has_der()) fail("fill_weights: needs a derivation realization");
    A.weights.assign(A.der.size(), {});
    for (uint32_t i = 0; i < A.der.size(); ++i) {
        std::vector<uint32_t> wt;
        for (uint32_t tpos : A.torus) {
            Elem br = bracket(A.ctx, A.der[tpos], A.der[i]);
            const auto& [k0, c0] = *A.der[i].t.begin();
            FF lam = A.F.zero();
            if (auto it = br.t.find(k0); it != br.t.end()) lam = A.F.div(it->second, c0);
            Elem resid = br;
            elem_add_scaled(A.ctx, resid, A.der[i], A.F.neg(lam));
            if (!resid.t.empty())
                fail("fill_weights: row " + A.labels[i] + " is not a torus weight vector");
            if (lam.b != 0) fail("fill_weights: eigenvalue outside prime field");
            wt.push_back(lam.a);
        }
        A.weights[i] = std::move(wt);
    }
}

void fill_weights_from_sc(LieSuperAlgebra& A) {
    A.weights.assign(A.dim(), {});
    for (uint32_t i = 0; i < A.dim(); ++i) {
        std::vector<uint32_t> wt;
        for (uint32_t tpos : A.torus) {
            SV br = A.bracket_sv(SV{{tpos, A.F.one()}}, SV{{i, A.F.one()}});
            FF lam = A.F.zero();
            for (auto& [k, cf] : br)
                if (k == i) lam = cf;
            SV resid = br;
            sv_add_scaled(A.F, resid, SV{{i, A.F.one()}}, A.F.neg(lam));
            if (!resid.empty())
                fail("fill_weights_from_sc: basis vector " + A.labels[i] +
                     " is not a torus weight vector");
            if (lam.b != 0) fail("fill_weights_from_sc: eigenvalue outside prime field");
            wt.push_back(lam.a);
        }
        A.weights[i] = std::move(wt);
    }
}

LieSuperAlgebra close_under_bracket(const Ctx& c, const std::vector<Elem>& generators) {
    if (generators.empty()) fail("close_under_bracket: empty generator list");
    // split generators into (parity, degree) homogeneous components so the
    // echelon basis stays homogeneous
    std::vector<Elem> work;
    for (auto& g : generators) {
        std::map<std::pair<int, int>, Elem> comps;
        for (auto& [k, cf] : g.t)
            comps[{wkey_parity(c, k), k.zdeg()}].t[k] = cf;
        for (auto& [key, e] : comps) work.push_back(e);
    }
    Ech ech(c);
    std::vector<Elem> basis;
    auto insert = [&](const Elem& v) {
        Elem red = ech.reduce(v);
        if (red.t.empty()) return false;
        ech.add(red);
        basis.push_back(elem_scale(c, red, c.F.inv(red.t.begin()->second)));
        return true;
    };
    for (auto& g : work) insert(g);
    // fixpoint: one full pass over all pairs adds nothing new
    size_t frontier = 0;
    while (frontier < basis.size()) {
        size_t hi = basis.size();
        for (size_t i = frontier; i < hi; ++i)
            for (size_t j = 0; j <= i; ++j) insert(bracket(c, basis[i], basis[j]));
        frontier = hi;
    }
    // canonical order
    std::sort(basis.begin(), basis.end(), [](const Elem& a, const Elem& b) {
        return a.t.begin()->first < b.t.begin()->first;
    });
    return build_from_derivations(c, "custom", c.m, c.n, basis, {});
}

void attach_pmap(LieSuperAlgebra& A) {
    if (!A.has_der()) fail("attach_pmap: basis is not realized by superderivations");
    for (uint32_t i = 0; i < A.dim(); ++i) {
        if (A.parity[i]) continue;
        Elem w = elem_pth_power(A.ctx, A.der[i]);
        auto coords = A.solve_in_basis(w);
        if (!coords) fail("attach_pmap: not p-closed at basis element " + A.labels[i]);
        A.pmap[i] = std::move(*coords);
    }
}

// ----------------------------------------------------------------- checks

static json witness_pair(const LieSuperAlgebra& A, uint32_t i, uint32_t j) {
    return json{{"i", i}, {"j", j}, {"bi", A.labels[i]}, {"bj", A.labels[j]}};
}

Report check_super_jacobi(const LieSuperAlgebra& A, const CheckMode& mode) {
    Report rep;
    const Field& F = A.F;
    const size_t N = A.dim();
    auto jac = [&](uint32_t i, uint32_t j, uint32_t k) {
        // (-1)^(|i||k|)[bi,[bj,bk]] + (-1)^(|j||i|)[bj,[bk,bi]] + (-1)^(|k||j|)[bk,[bi,bj]]
        SV ei{{i, F.one()}}, ej{{j, F.one()}}, ek{{k, F.one()}};
        SV acc;
        auto addterm = [&](uint32_t a, const SV& ea, uint32_t b, const SV& eb, uint32_t cidx,
                           const SV& ec) {
            SV inner = A.bracket_sv(eb, ec);
            SV outer = A.bracket_sv(ea, inner);
            FF s = (A.parity[a] && A.parity[cidx]) ? F.of_int(-1) : F.one();
            sv_add_scaled(F, acc, outer, s);
        };
        addterm(i, ei, j, ej, k, ek);
        addterm(j, ej, k, ek, i, ei);
        addterm(k, ek, i, ei, j, ej);
        return acc.empty();
    };
    if (mode.exhaustive) {
        for (uint32_t i = 0; i < N; ++i)
            for (uint32_t j = i; j < N; ++j)
                for (uint32_t k = j; k < N; ++k)
                    if (!jac(i, j, k)) {
                        rep.add_fail("super_jacobi",
                                     json{{"i", i}, {"j", j}, {"k", k},
                                          {"labels", {A.labels[i], A.labels[j], A.labels[k]}}});
                        return rep;
                    }
        rep.add_pass("super_jacobi");
    } else {
        Rng rng(mode.seed);
        for (uint64_t s = 0; s < mode.samples; ++s) {
            uint32_t i = uint32_t(rng.below(N)), j = uint32_t(rng.below(N)),
                     k = uint32_t(rng.below(N));
            if (!jac(i, j, k)) {
                rep.add_fail("super_jacobi",
                             json{{"i", i}, {"j", j}, {"k", k},
                                  {"labels", {A.labels[i], A.labels[j], A.labels[k]}}});
                return rep;
            }
        }
        rep.add_pass("super_jacobi");
    }
    return rep;
}

Report check_anticommutativity(const LieSuperAlgebra& A, const CheckMode& mode) {
    Report rep;
    if (!A.has_der()) {
        rep.add(Step{"anticommutativity", "pass", "computed", nullptr,
                     "holds by the i<=j storage convention for abstract algebras"});
        return rep;
    }
    const Field& F = A.F;
    auto one_pair = [&](uint32_t i, uint32_t j) {
        Elem xy = bracket(A.ctx, A.der[i], A.der[j]);
        Elem yx = bracket(A.ctx, A.der[j], A.der[i]);
        FF s = (A.parity[i] && A.parity[j]) ? F.one() : F.of_int(-1);
        elem_add_scaled(A.ctx, xy, yx, F.neg(s));
        return xy.t.empty();
    };
    const size_t N = A.dim();
    if (mode.exhaustive) {
        for (uint32_t i = 0; i < N; ++i)
            for (uint32_t j = i; j < N; ++j)
                if (!one_pair(i, j)) {
                    rep.add_fail("anticommutativity", witness_pair(A, i, j));
                    return rep;
                }
    } else {
        Rng rng(mode.seed + 1);
        for (uint64_t s = 0; s < mode.samples; ++s) {
            uint32_t i = uint32_t(rng.below(N)), j = uint32_t(rng.below(N));
            if (!one_pair(i, j)) {
                rep.add_fail("anticommutativity", witness_pair(A, i, j));
                return rep;
            }
        }
    }
    rep.add_pass("anticommutativity");
    return rep;
}

Report check_grading(const LieSuperAlgebra& A) {
    Report rep;
    for (auto& [key, vec] : A.sc) {
        uint32_t i = uint32_t(key >> 32), j = uint32_t(key & 0xffffffffu);
        for (auto& [k, cf] : vec) {
            if (A.zdeg[k] != A.zdeg[i] + A.zdeg[j]) {
                rep.add_fail("z_grading", json{{"i", i}, {"j", j}, {"k", k},
                                               {"deg_i", A.zdeg[i]}, {"deg_j", A.zdeg[j]},
                                               {"deg_k", A.zdeg[k]}});
                return rep;
            }
            if (A.parity[k] != ((A.parity[i] + A.parity[j]) & 1)) {
                rep.add_fail("parity_grading", json{{"i", i}, {"j", j}, {"k", k}});
                return rep;
            }
        }
    }
    rep.add_pass("z_grading");
    return rep;
}

Report check_sc_reproduces(const LieSuperAlgebra& A, const CheckMode& mode) {
    Report rep;
    if (!A.has_der()) {
        rep.add(Step{"sc_reproduces_bracket", "skip", "computed", nullptr,
                     "no derivation realization"});
        return rep;
    }
    auto one_pair = [&](uint32_t i, uint32_t j) {
        Elem raw = bracket(A.ctx, A.der[i], A.der[j]);
        Elem rec = A.realize(A.sc_bracket(i, j));
        elem_add_scaled(A.ctx, rec, raw, A.F.of_int(-1));
        return rec.t.empty();
    };
    const size_t N = A.dim();
    if (mode.exhaustive) {
        for (uint32_t i = 0; i < N; ++i)
            for (uint32_t j = i; j < N; ++j)
                if (!one_pair(i, j)) {
                    rep.add_fail("sc_reproduces_bracket", witness_pair(A, i, j));
                    return rep;
                }
    } else {
        Rng rng(mode.seed + 2);
        for (uint64_t s = 0; s < mode.samples; ++s) {
            uint32_t i = uint32_t(rng.below(N)), j = uint32_t(rng.below(N));
            if (!one_pair(i, j)) {
                rep.add_fail("sc_reproduces_bracket", witness_pair(A, i, j));
                return rep;
            }
        }
    }
    rep.add_pass("sc_reproduces_bracket");
    return rep;
}

Report check_restricted(const LieSuperAlgebra& A, const CheckMode& mode) {
    Report rep;
    const Field& F = A.F;
    const size_t N = A.dim();
    for (uint32_t i = 0; i < N; ++i)
        if (!A.parity[i] && !A.pmap[i]) {
            rep.add(Step{"restrictedness", "skip", "computed", nullptr, "p-map not attached"});
            return rep;
        }
    auto one_pair = [&](uint32_t i, uint32_t j) {
        if (A.parity[i]) return true;
        SV lhs = A.bracket_sv(A.pmap_sv(i), SV{{j, F.one()}});
        SV rhs{{j, F.one()}};
        SV ei{{i, F.one()}};
        for (uint32_t k = 0; k < F.p(); ++k) rhs = A.bracket_sv(ei, rhs);
        sv_add_scaled(F, lhs, rhs, F.of_int(-1));
        return lhs.empty();
    };
    if (mode.exhaustive) {
        for (uint32_t i = 0; i < N; ++i)
            for (uint32_t j = 0; j < N; ++j)
                if (!one_pair(i, j)) {
                    rep.add_fail("restrictedness", witness_pair(A, i, j),
                                 "ad(x^[p]) != (ad x)^p");
                    return rep;
                }
    } else {
        Rng rng(mode.seed + 3);
        for (uint64_t s = 0; s < mode.samples; ++s) {
            uint32_t i = uint32_t(rng.below(N)), j = uint32_t(rng.below(N));
            if (!one_pair(i, j)) {
                rep.add_fail("restrictedness", witness_pair(A, i, j), "ad(x^[p]) != (ad x)^p");
                return rep;
            }
        }
    }
    rep.add_pass("restrictedness");
    return rep;
}

Report check_structure(const LieSuperAlgebra& A, const CheckMode& mode) {
    Report rep;
    for (auto& sub : {check_anticommutativity(A, mode), check_grading(A),
                      check_super_jacobi(A, mode), check_sc_reproduces(A, mode),
                      check_restricted(A, mode)})
        for (auto& s : sub.steps) rep.add(s);
    return rep;
}

Report ideal_and_nilpotency(const LieSuperAlgebra& A, const Subspace& R) {
    // all four checks always run; a report with every witness beats a
    // short-circuit when R fails several ways at once
    Report rep;
    const Field& F = A.F;
    auto rows = R.row_list();

    // (a) [L, R] subset R
    {
        bool ok = true;
        for (uint32_t i = 0; i < A.dim() && ok; ++i)
            for (auto& r : rows) {
                SV br = A.bracket_sv(SV{{i, F.one()}}, r);
                if (!R.member(br)) {
                    rep.add_fail("ideal", json{{"basis", A.labels[i]}, {"row", sv_to_json(F, r)}},
                                 "[L,R] leaves R");
                    ok = false;
                    break;
                }
            }
        if (ok) rep.add_pass("ideal");
    }

    // (b) parity graded: even projection of every row stays in R
    {
        bool ok = true;
        for (auto& r : rows) {
            SV even;
            for (auto& [i, cf] : r)
                if (!A.parity[i]) even.emplace_back(i, cf);
            if (!R.member(even)) {
                rep.add_fail("parity_graded", sv_to_json(F, r));
                ok = false;
                break;
            }
        }
        if (ok) rep.add_pass("parity_graded");
    }

    // (c) even rows p-nilpotent; iterate at most ceil(log_p(dim+1)) + 2 times
    {
        uint32_t bound = 2;
        for (size_t d = A.dim() + 1; d > 1; d = (d + F.p() - 1) / F.p()) ++bound;
        bool pm_ok = true;
        for (uint32_t i = 0; i < A.dim() && pm_ok; ++i)
            pm_ok = A.parity[i] || A.pmap[i].has_value();
        if (!pm_ok) {
            rep.add_fail("p_nilpotent", nullptr, "p-map not attached");
        } else {
            bool ok = true;
            for (auto& r : rows) {
                SV even;
                for (auto& [i, cf] : r)
                    if (!A.parity[i]) even.emplace_back(i, cf);
                SV v = even;
                uint32_t it = 0;
                while (!v.empty() && it++ < bound) v = A.pth_power_sv(v);
                if (!v.empty()) {
                    rep.add_fail("p_nilpotent", sv_to_json(F, even),
                                 "iterated p-map does not reach zero");
                    ok = false;
                    break;
                }
            }
            if (ok) rep.add_pass("p_nilpotent");
        }
    }

    // (d) lower central series reaches 0
    {
        Subspace cur = R;
        uint32_t guard = uint32_t(R.dim()) + 2;
        bool ok = true;
        while (cur.dim() > 0 && guard--) {
            Subspace next(&A);
            for (auto& r : rows)
                for (auto& s : cur.row_list()) next.add(A.bracket_sv(r, s));
            if (next.dim() >= cur.dim() && next.dim() > 0) {
                rep.add_fail("lie_nilpotent", json{{"stalled_dim", next.dim()}});
                ok = false;
                break;
            }
            cur = next;
        }
        if (ok && cur.dim() > 0) {
            rep.add_fail("lie_nilpotent", json{{"residual_dim", cur.dim()}});
            ok = false;
        }
        if (ok) rep.add_pass("lie_nilpotent");
    }
    return rep;
}

// ------------------------------------------------------------------ json

json LieSuperAlgebra::to_json() const {
    json j;
    j["field"] = F.to_json();
    j["m"] = m;
    j["n"] = n;
    j["type"] = type;
    std::string realization = has_der() ? "derivation" : (!mats.empty() ? "matrix" : "abstract");
    j["realization"] = realization;
    json jb = json::array();
    if (has_der()) {
        for (auto& e : der) jb.push_back(elem_to_json(ctx, e));
    } else if (!mats.empty()) {
        for (auto& mt : mats) {
            json rows = json::array();
            for (uint32_t r = 0; r < mt.r; ++r) {
                json row = json::array();
                for (uint32_t c2 = 0; c2 < mt.c; ++c2) row.push_back(F.elem_to_json(mt.at(r, c2)));
                rows.push_back(row);
            }
            jb.push_back(rows);
        }
    } else {
        for (auto& l : labels) jb.push_back(l);
    }
    j["basis"] = jb;
    j["labels"] = labels;
    j["parity"] = parity;
    j["degree"] = zdeg;
    std::vector<uint64_t> keys;
    for (auto& [k, v] : sc) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    json jsc = json::array();
    for (uint64_t k : keys) {
        json entry = json::array();
        entry.push_back(uint32_t(k >> 32));
        entry.push_back(uint32_t(k & 0xffffffffu));
        entry.push_back(sv_to_json(F, sc.at(k)));
        jsc.push_back(entry);
    }
    j["sc"] = jsc;
    json jp = json::array();
    for (uint32_t i = 0; i < pmap.size(); ++i)
        if (pmap[i]) jp.push_back(json::array({i, sv_to_json(F, *pmap[i])}));
    j["pmap"] = jp;
    j["torus"] = torus;
    if (!weights.empty()) j["weights"] = weights;
    j["scope"] = json{{"theorem", scope_flag}, {"note", scope_note}};
    return j;
}

static SV sv_from_json(const Field& F, const json& j) {
    SV v;
    for (auto& e : j) v.emplace_back(e[0].get<uint32_t>(), F.elem_from_json(e[1]));
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
}

LieSuperAlgebra algebra_from_json(const json& j) {
    for (const char* fieldname : {"field", "m", "n", "type", "basis", "parity", "degree", "sc",
                                  "pmap", "torus"})
        if (!j.contains(fieldname)) fail(std::string("algebra json: missing field \"") + fieldname + "\"");
    LieSuperAlgebra A;
    A.F = Field::from_json(j["field"]);
    A.m = j["m"].get<uint32_t>();
    A.n = j["n"].get<uint32_t>();
    A.ctx = Ctx{A.m, A.n, A.F};
    A.type = j["type"].get<std::string>();
    std::string realization = j.value("realization", std::string("abstract"));
    size_t N = j["basis"].size();
    if (realization == "derivation")
        for (auto& e : j["basis"]) A.der.push_back(elem_from_json(A.ctx, e));
    if (j.contains("labels")) {
        for (auto& l : j["labels"]) A.labels.push_back(l.get<std::string>());
    } else {
        for (auto& e : j["basis"])
            A.labels.push_back(e.is_string() ? e.get<std::string>() : "b" + std::to_string(A.labels.size()));
    }
    if (A.labels.size() != N) fail("algebra json: labels/basis size mismatch");
    if (j["parity"].size() != N) fail("algebra json: parity/basis size mismatch");
    if (j["degree"].size() != N) fail("algebra json: degree/basis size mismatch");
    for (auto& v : j["parity"]) A.parity.push_back(v.get<int>());
    for (auto& v : j["degree"]) A.zdeg.push_back(v.get<int>());
    for (auto& e : j["sc"]) {
        uint32_t a = e[0].get<uint32_t>(), b = e[1].get<uint32_t>();
        if (a > b || b >= N) fail("algebra json: bad sc entry indices");
        A.sc[sc_key(a, b)] = sv_from_json(A.F, e[2]);
    }
    A.pmap.assign(N, std::nullopt);
    for (auto& e : j["pmap"]) {
        uint32_t i = e[0].get<uint32_t>();
        if (i >= N) fail("algebra json: bad pmap index");
        A.pmap[i] = sv_from_json(A.F, e[1]);
    }
    for (auto& t : j["torus"]) {
        uint32_t i = t.get<uint32_t>();
        if (i >= N) fail("algebra json: bad torus index");
        A.torus.push_back(i);
    }
    if (j.contains("weights"))
        for (auto& w : j["weights"]) A.weights.push_back(w.get<std::vector<uint32_t>>());
    if (j.contains("scope")) {
        A.scope_flag = j["scope"].value("theorem", true);
        A.scope_note = j["scope"].value("note", std::string());
    }
    return A;
}

}  // namespace wsh::core

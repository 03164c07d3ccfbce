#include "wsh/superspace.hpp"

namespace wsh::sp {

void Ctx::require_same(const Ctx& o) const {
    if (!same(o)) ff::fail("superspace: context mismatch");
}

uint32_t lucas_binom(uint32_t p, uint64_t top, uint64_t bot) {
    if (bot > top) return 0;
    uint64_t r = 1;
    while (bot) {
        uint32_t td = top % p, bd = bot % p;
        if (bd > td) return 0;
        // small binomial of digits, exact in 64 bits for p < 2^16
        uint64_t num = 1, den = 1;
        for (uint32_t i = 0; i < bd; ++i) {
            num = num * (td - i) % p;
            den = den * (i + 1) % p;
        }
        uint64_t dinv = 1;  // den^(p-2)
        for (uint64_t e = p - 2, b = den; e; e >>= 1, b = b * b % p)
            if (e & 1) dinv = dinv * b % p;
        r = r * (num * dinv % p) % p;
        top /= p;
        bot /= p;
    }
    return uint32_t(r % p);
}

Mono mono_one(const Ctx& c) { return Mono{std::vector<uint8_t>(c.m, 0), 0}; }

Mono mono_var(const Ctx& c, uint32_t i) {
    Mono u = mono_one(c);
    if (i < 1 || i > c.nvars()) ff::fail("mono_var: direction out of range");
    if (i <= c.m)
        u.a[i - 1] = 1;
    else
        u.b = 1u << (i - c.m - 1);
    return u;
}

uint32_t mono_exp(const Ctx& c, const Mono& u, uint32_t i) {
    if (i <= c.m) return u.a[i - 1];
    return (u.b >> (i - c.m - 1)) & 1u;
}

Mono mono_top(const Ctx& c) {
    Mono u{std::vector<uint8_t>(c.m, uint8_t(c.F.p() - 1)), (c.n ? (1u << c.n) - 1 : 0u)};
    return u;
}

std::optional<std::pair<FF, Mono>> mono_mul(const Ctx& c, const Mono& u, const Mono& v) {
    const uint32_t p = c.F.p();
    if (u.b & v.b) return std::nullopt;  // repeated odd variable
    uint64_t coeff = 1;
    Mono w = mono_one(c);
    for (uint32_t i = 0; i < c.m; ++i) {
        uint32_t s = u.a[i] + v.a[i];
        if (s >= p) return std::nullopt;  // truncated at height 1
        coeff = coeff * lucas_binom(p, s, u.a[i]) % p;
        w.a[i] = uint8_t(s);
    }
    if (coeff == 0) return std::nullopt;
    // merge sign: inversions between the sorted words of u.b and v.b
    int inv = 0;
    for (uint32_t vb = v.b; vb; vb &= vb - 1) {
        uint32_t j = __builtin_ctz(vb);
        inv += __builtin_popcount(u.b >> (j + 1));
    }
    w.b = u.b | v.b;
    FF cf = c.F.of_int(coeff);
    if (inv & 1) cf = c.F.neg(cf);
    return std::make_pair(cf, w);
}

std::optional<std::pair<FF, Mono>> mono_derive(const Ctx& c, uint32_t k, const Mono& u) {
    if (k < 1 || k > c.nvars()) ff::fail("mono_derive: direction out of range");
    if (k <= c.m) {
        if (u.a[k - 1] == 0) return std::nullopt;
        Mono w = u;
        w.a[k - 1]--;  // divided-power convention, no factor
        return std::make_pair(c.F.one(), w);
    }
    uint32_t bit = k - c.m - 1;
    if (!((u.b >> bit) & 1u)) return std::nullopt;
    Mono w = u;
    w.b &= ~(1u << bit);
    int before = __builtin_popcount(u.b & ((1u << bit) - 1));
    FF cf = (before & 1) ? c.F.of_int(-1) : c.F.one();
    return std::make_pair(cf, w);
}

std::optional<int> Poly::parity() const {
    std::optional<int> par;
    for (auto& [u, cf] : t) {
        int pu = u.parity();
        if (!par) par = pu;
        else if (*par != pu) return std::nullopt;
    }
    if (!par) return 0;  // zero counts as even
    return par;
}

std::optional<int> Poly::degree() const {
    std::optional<int> deg;
    for (auto& [u, cf] : t) {
        int du = u.degree();
        if (!deg) deg = du;
        else if (*deg != du) return std::nullopt;
    }
    if (!deg) return 0;
    return deg;
}

Poly poly_zero() { return Poly{}; }

Poly poly_mono(const Ctx& c, const Mono& u, const FF& coeff) {
    Poly f;
    if (!c.F.is_zero(coeff)) f.t[u] = coeff;
    return f;
}

Poly poly_scalar(const Ctx& c, const FF& coeff) { return poly_mono(c, mono_one(c), coeff); }

void poly_add_scaled(const Ctx& c, Poly& dst, const Poly& src, const FF& scale) {
    if (c.F.is_zero(scale)) return;
    for (auto& [u, cf] : src.t) {
        FF v = c.F.mul(cf, scale);
        auto it = dst.t.find(u);
        if (it == dst.t.end()) {
            if (!c.F.is_zero(v)) dst.t[u] = v;
        } else {
            it->second = c.F.add(it->second, v);
            if (c.F.is_zero(it->second)) dst.t.erase(it);
        }
    }
}

Poly poly_mul(const Ctx& c, const Poly& f, const Poly& g) {
    Poly r;
    for (auto& [u, cu] : f.t)
        for (auto& [v, cv] : g.t)
            if (auto w = mono_mul(c, u, v))
                poly_add_scaled(c, r, poly_mono(c, w->second, w->first), c.F.mul(cu, cv));
    return r;
}

Poly poly_scale(const Ctx& c, const Poly& f, const FF& s) {
    Poly r;
    poly_add_scaled(c, r, f, s);
    return r;
}

Poly superderive(const Ctx& c, uint32_t k, const Poly& f) {
    Poly r;
    for (auto& [u, cf] : f.t)
        if (auto w = mono_derive(c, k, u))
            poly_add_scaled(c, r, poly_mono(c, w->second, w->first), cf);
    return r;
}

Poly euler_apply(const Ctx& c, const Poly& f) {
    Poly r;
    for (auto& [u, cf] : f.t)
        poly_add_scaled(c, r, poly_mono(c, u, cf), c.F.of_int(u.degree()));
    return r;
}

std::vector<Mono> enumerate_monomials(const Ctx& c) {
    std::vector<Mono> out;
    const uint32_t p = c.F.p();
    std::vector<uint8_t> a(c.m, 0);
    while (true) {
        for (uint32_t b = 0; b < (1u << c.n); ++b) out.push_back(Mono{a, b});
        // increment a lexicographically (last index fastest would be odometer;
        // we match std::vector compare order by bumping from the back)
        int i = int(c.m) - 1;
        while (i >= 0 && a[i] == p - 1) a[i--] = 0;
        if (i < 0) break;
        a[i]++;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Mono> enumerate_monomials_of_degree(const Ctx& c, int deg) {
    std::vector<Mono> out;
    for (auto& u : enumerate_monomials(c))
        if (u.degree() == deg) out.push_back(u);
    return out;
}

json mono_to_json(const Ctx& c, const Mono& u) {
    json ja = json::array(), jb = json::array();
    for (uint8_t e : u.a) ja.push_back(int(e));
    for (uint32_t j = 0; j < c.n; ++j)
        if ((u.b >> j) & 1u) jb.push_back(int(c.m + 1 + j));
    return json{{"a", ja}, {"b", jb}};
}

Mono mono_from_json(const Ctx& c, const json& j) {
    if (!j.contains("a") || !j.contains("b")) ff::fail("monomial json: needs \"a\" and \"b\"");
    Mono u = mono_one(c);
    auto& ja = j["a"];
    if (ja.size() != c.m) ff::fail("monomial json: \"a\" must have length m");
    for (uint32_t i = 0; i < c.m; ++i) {
        int e = ja[i].get<int>();
        if (e < 0 || e >= int(c.F.p())) ff::fail("monomial json: exponent out of range");
        u.a[i] = uint8_t(e);
    }
    for (auto& v : j["b"]) {
        int i = v.get<int>();
        if (i <= int(c.m) || i > int(c.nvars())) ff::fail("monomial json: odd index out of range");
        u.b |= 1u << (i - c.m - 1);
    }
    return u;
}

json poly_to_json(const Ctx& c, const Poly& f) {
    json out = json::array();
    for (auto& [u, cf] : f.t)
        out.push_back(json{{"mono", mono_to_json(c, u)}, {"coeff", c.F.elem_to_json(cf)}});
    return out;
}

Poly poly_from_json(const Ctx& c, const json& j) {
    Poly f;
    for (auto& e : j)
        poly_add_scaled(c, f, poly_mono(c, mono_from_json(c, e["mono"]), c.F.one()),
                        c.F.elem_from_json(e["coeff"]));
    return f;
}

}  // namespace wsh::sp

#include "wsh/field.hpp"

namespace wsh::ff {

bool is_prime(uint32_t p) {
    if (p < 2) return false;
    for (uint32_t d = 2; uint64_t(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Field::Field(uint32_t p, int deg) : p_(p), deg_(deg) {
    if (!is_prime(p) || p == 2) fail("field: p must be an odd prime, got " + std::to_string(p));
    if (deg != 1 && deg != 2) fail("field: deg must be 1 or 2");
    if (deg == 2 && p % 4 != 3)
        fail("field: GF(p^2) is only built for p = 3 (mod 4); sqrt(-1) is a residue here");
}

void Field::require_same(const Field& o) const {
    if (!same(o))
        fail("field mismatch: GF(" + std::to_string(p_) + ")^" + std::to_string(deg_) +
             " vs GF(" + std::to_string(o.p_) + ")^" + std::to_string(o.deg_));
}

FF Field::of_int(long long v) const {
    long long r = v % (long long)p_;
    if (r < 0) r += p_;
    return {uint32_t(r), 0};
}

static uint32_t prime_inv(uint32_t a, uint32_t p) {
    // extended Euclid on (a, p)
    long long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (t < 0) t += p;
    return uint32_t(t);
}

FF Field::inv(const FF& x) const {
    if (is_zero(x)) fail("field: inverse of zero");
    if (deg_ == 1) return {prime_inv(x.a, p_), 0};
    // (a + bt)^{-1} = (a - bt) / (a^2 + b^2); the norm is nonzero because
    // -1 is a non-residue when p = 3 (mod 4)
    uint32_t n = modadd(mulmod(x.a, x.a), mulmod(x.b, x.b));
    FF ninv{prime_inv(n, p_), 0};
    return mul(FF{x.a, modneg(x.b)}, ninv);
}

FF Field::pow(FF x, uint64_t e) const {
    FF r = one();
    while (e) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

FF Field::sqrt_minus_one() const {
    if (deg_ == 2) return {0, 1};
    for (uint32_t i = 0;; ++i) {
        if (mulmod(i, i) == p_ - 1) return {i, 0};
        if (i > p_) fail("field: no sqrt(-1) in GF(p), p = " + std::to_string(p_));
    }
}

std::pair<Field, FF> sqrt_minus_one(uint32_t p) {
    if (p == 2 || !is_prime(p)) fail("sqrt_minus_one: p must be an odd prime");
    Field F(p, p % 4 == 1 ? 1 : 2);
    return {F, F.sqrt_minus_one()};
}

json Field::to_json() const { return json{{"p", p_}, {"deg", deg_}}; }

Field Field::from_json(const json& j) {
    if (!j.contains("p")) fail("field json: missing field \"p\"");
    if (!j.contains("deg")) fail("field json: missing field \"deg\"");
    return Field(j["p"].get<uint32_t>(), j["deg"].get<int>());
}

json Field::elem_to_json(const FF& x) const {
    if (deg_ == 1) return json(x.a);
    return json::array({x.a, x.b});
}

FF Field::elem_from_json(const json& j) const {
    if (deg_ == 1) {
        if (!j.is_number()) fail("field element json: expected integer residue");
        return of_int(j.get<long long>());
    }
    if (!j.is_array() || j.size() != 2) fail("field element json: expected [a, b]");
    FF x = of_int(j[0].get<long long>());
    FF y = of_int(j[1].get<long long>());
    return {x.a, y.a};
}

}  // namespace wsh::ff

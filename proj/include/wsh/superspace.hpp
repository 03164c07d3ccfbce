/* The associative superalgebra A(m,n;1) = A(m;1) (x) Lambda(n): a truncated
 * divided power algebra in m even variables x_1..x_m tensored with a Grassmann
 * algebra in n odd variables x_{m+1}..x_{m+n}.
 *
 * Basis monomials are x^(a) x^B with a in {0..p-1}^m and B an increasing
 * subset of {m+1..m+n}.  The product carries binomial coefficients on the
 * divided-power side, binomial(a_i + a'_i, a_i), truncating to zero past
 * exponent p-1, and merge-inversion signs on the Grassmann side.  The
 * superderivations D_1..D_{m+n} with D_i(x_j) = delta_ij lower one exponent
 * (no numeric factor on the divided-power side). */

#ifndef WSH_SUPERSPACE_HPP
#define WSH_SUPERSPACE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wsh/field.hpp"

namespace wsh::sp {

using ff::FF;
using ff::Field;
using json = nlohmann::ordered_json;

/// Ambient context: variable counts and the coefficient field.
struct Ctx {
    uint32_t m = 0, n = 0;
    Field F;
    uint32_t nvars() const { return m + n; }
    /// tau(i) = parity of the variable x_i (1-based direction index).
    int tau(uint32_t i) const { return i > m ? 1 : 0; }
    bool same(const Ctx& o) const { return m == o.m && n == o.n && F.same(o.F); }
    void require_same(const Ctx& o) const;
};

/// binomial(top, bot) mod p via Lucas' theorem.
uint32_t lucas_binom(uint32_t p, uint64_t top, uint64_t bot);

/// Basis monomial x^(a) x^B; B stored as a bitmask over the n odd variables
/// (bit j-1 <-> variable x_{m+j}).
struct Mono {
    std::vector<uint8_t> a;
    uint32_t b = 0;

    int parity() const { return __builtin_popcount(b) & 1; }
    int degree() const {
        int d = __builtin_popcount(b);
        for (uint8_t e : a) d += e;
        return d;
    }
    bool is_one() const {
        if (b) return false;
        for (uint8_t e : a) if (e) return false;
        return true;
    }
    friend bool operator==(const Mono& u, const Mono& v) { return u.a == v.a && u.b == v.b; }
    friend bool operator<(const Mono& u, const Mono& v) {
        if (u.a != v.a) return u.a < v.a;
        return u.b < v.b;
    }
};

Mono mono_one(const Ctx& c);
Mono mono_var(const Ctx& c, uint32_t i);  // x_i
/// exponent of direction i (divided-power entry or Grassmann bit)
uint32_t mono_exp(const Ctx& c, const Mono& u, uint32_t i);
/// the top monomial x_1^(p-1)..x_m^(p-1) x_{m+1}..x_{m+n}
Mono mono_top(const Ctx& c);

/// Product of basis monomials: zero (nullopt) or coeff * monomial.
std::optional<std::pair<FF, Mono>> mono_mul(const Ctx& c, const Mono& u, const Mono& v);

/// D_k applied to a monomial: zero or coeff * monomial.
std::optional<std::pair<FF, Mono>> mono_derive(const Ctx& c, uint32_t k, const Mono& u);

/// Sparse element of A(m,n;1); no zero coefficients stored.
struct Poly {
    std::map<Mono, FF> t;

    bool is_zero() const { return t.empty(); }
    /// parity if parity-homogeneous, nullopt otherwise (computed, not assumed)
    std::optional<int> parity() const;
    /// total degree if degree-homogeneous
    std::optional<int> degree() const;
};

Poly poly_zero();
Poly poly_mono(const Ctx& c, const Mono& u, const FF& coeff);
Poly poly_scalar(const Ctx& c, const FF& coeff);
void poly_add_scaled(const Ctx& c, Poly& dst, const Poly& src, const FF& scale);
Poly poly_mul(const Ctx& c, const Poly& f, const Poly& g);
Poly poly_scale(const Ctx& c, const Poly& f, const FF& s);

/// superderivation D_k on a polynomial
Poly superderive(const Ctx& c, uint32_t k, const Poly& f);

/// Euler operator sum x_i D_i; multiplies a degree-d monomial by d.
Poly euler_apply(const Ctx& c, const Poly& f);

/// Enumerate all p^m 2^n monomials in lexicographic (a, b) order.
std::vector<Mono> enumerate_monomials(const Ctx& c);
/// Monomials of a fixed total degree, same order.
std::vector<Mono> enumerate_monomials_of_degree(const Ctx& c, int deg);

json mono_to_json(const Ctx& c, const Mono& u);
Mono mono_from_json(const Ctx& c, const json& j);
json poly_to_json(const Ctx& c, const Poly& f);
Poly poly_from_json(const Ctx& c, const json& j);

}  // namespace wsh::sp

#endif

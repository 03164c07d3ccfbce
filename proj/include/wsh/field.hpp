/* Exact arithmetic in GF(p) and, when sqrt(-1) is not already a prime-field
 * residue, in GF(p^2) realized as GF(p)[t]/(t^2+1).  The quadratic extension
 * is only constructed for p = 3 (mod 4); for p = 1 (mod 4) every scalar the
 * Hamiltonian constructions need lives in the prime field. */

#ifndef WSH_FIELD_HPP
#define WSH_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>

#include "json.hpp"

namespace wsh::ff {

using json = nlohmann::ordered_json;

/// Element of GF(p) (b = 0) or of GF(p)[t]/(t^2+1), stored as a + b*t.
struct FF {
    uint32_t a = 0, b = 0;
    friend bool operator==(const FF& x, const FF& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const FF& x, const FF& y) { return !(x == y); }
    friend bool operator<(const FF& x, const FF& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
};

bool is_prime(uint32_t p);

/// Field descriptor (p, deg) with all arithmetic as methods.
class Field {
  public:
    Field() = default;
    Field(uint32_t p, int deg);

    uint32_t p() const { return p_; }
    int deg() const { return deg_; }
    uint64_t order() const { return deg_ == 1 ? p_ : uint64_t(p_) * p_; }

    // p = 3 is accepted for toy runs but sits outside the block-degeneracy
    // hypotheses, which need p > 3.
    bool theorem_scope() const { return p_ > 3; }

    bool same(const Field& o) const { return p_ == o.p_ && deg_ == o.deg_; }
    void require_same(const Field& o) const;

    FF zero() const { return {0, 0}; }
    FF one() const { return {1, 0}; }
    FF of_int(long long v) const;
    bool is_zero(const FF& x) const { return x.a == 0 && x.b == 0; }

    FF add(const FF& x, const FF& y) const {
        return {modadd(x.a, y.a), modadd(x.b, y.b)};
    }
    FF sub(const FF& x, const FF& y) const {
        return {modsub(x.a, y.a), modsub(x.b, y.b)};
    }
    FF neg(const FF& x) const { return {modneg(x.a), modneg(x.b)}; }
    FF mul(const FF& x, const FF& y) const {
        if (deg_ == 1) return {mulmod(x.a, y.a), 0};
        // (a + bt)(c + dt), t^2 = -1
        uint32_t a = modsub(mulmod(x.a, y.a), mulmod(x.b, y.b));
        uint32_t b = modadd(mulmod(x.a, y.b), mulmod(x.b, y.a));
        return {a, b};
    }
    FF inv(const FF& x) const;
    FF div(const FF& x, const FF& y) const { return mul(x, inv(y)); }
    FF pow(FF x, uint64_t e) const;

    /// i with i^2 = -1: smallest non-negative residue in GF(p) when
    /// p = 1 (mod 4), the generator t of GF(p^2) otherwise.
    FF sqrt_minus_one() const;

    /// k-th field element, a-coordinate fastest; for exhaustive sweeps.
    FF elem_at(uint64_t k) const {
        return {uint32_t(k % p_), uint32_t((k / p_) % p_)};
    }

    json to_json() const;
    static Field from_json(const json& j);
    json elem_to_json(const FF& x) const;
    FF elem_from_json(const json& j) const;

  private:
    uint32_t p_ = 0;
    int deg_ = 1;

    uint32_t modadd(uint32_t x, uint32_t y) const {
        uint32_t s = x + y;
        return s >= p_ ? s - p_ : s;
    }
    uint32_t modsub(uint32_t x, uint32_t y) const { return x >= y ? x - y : x + p_ - y; }
    uint32_t modneg(uint32_t x) const { return x == 0 ? 0 : p_ - x; }
    uint32_t mulmod(uint32_t x, uint32_t y) const {
        return uint32_t((uint64_t(x) * y) % p_);
    }
};

/// Field containing sqrt(-1) for an odd prime p, together with that root.
std::pair<Field, FF> sqrt_minus_one(uint32_t p);

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace wsh::ff

#endif

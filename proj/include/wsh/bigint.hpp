/* Arbitrary-precision non-negative integers for character multiplicities.
 * Weight multiplicities reach p^s * 2^t with s, t in the hundreds, far past
 * machine words; only +, *, comparison and printing are ever needed. */

#ifndef WSH_BIGINT_HPP
#define WSH_BIGINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace wsh::ff {

class Nat {
  public:
    Nat() : d_{0} {}
    Nat(uint64_t v);

    static Nat pow_u(uint64_t base, uint64_t exp);

    Nat operator+(const Nat& o) const;
    Nat operator*(const Nat& o) const;
    Nat& operator+=(const Nat& o) { return *this = *this + o; }
    Nat& operator*=(const Nat& o) { return *this = *this * o; }

    // total order
    int cmp(const Nat& o) const;
    bool operator==(const Nat& o) const { return cmp(o) == 0; }
    bool operator!=(const Nat& o) const { return cmp(o) != 0; }
    bool operator<(const Nat& o) const { return cmp(o) < 0; }
    bool operator<=(const Nat& o) const { return cmp(o) <= 0; }

    bool is_zero() const { return d_.size() == 1 && d_[0] == 0; }
    std::string str() const;

  private:
    // little-endian limbs, base 10^9
    std::vector<uint32_t> d_;
    void trim();
};

}  // namespace wsh::ff

#endif

#include "wsh/bigint.hpp"

namespace wsh::ff {

static constexpr uint32_t BASE = 1000000000u;

Nat::Nat(uint64_t v) {
    if (v == 0) d_ = {0};
    while (v) {
        d_.push_back(uint32_t(v % BASE));
        v /= BASE;
    }
}

void Nat::trim() {
    while (d_.size() > 1 && d_.back() == 0) d_.pop_back();
}

Nat Nat::operator+(const Nat& o) const {
    Nat r;
    r.d_.assign(std::max(d_.size(), o.d_.size()) + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < r.d_.size(); ++i) {
        uint64_t s = carry;
        if (i < d_.size()) s += d_[i];
        if (i < o.d_.size()) s += o.d_[i];
        r.d_[i] = uint32_t(s % BASE);
        carry = s / BASE;
    }
    r.trim();
    return r;
}

Nat Nat::operator*(const Nat& o) const {
    Nat r;
    r.d_.assign(d_.size() + o.d_.size(), 0);
    for (size_t i = 0; i < d_.size(); ++i) {
        if (d_[i] == 0) continue;
        uint64_t carry = 0;
        for (size_t j = 0; j < o.d_.size() || carry; ++j) {
            uint64_t cur = r.d_[i + j] + carry;
            if (j < o.d_.size()) cur += uint64_t(d_[i]) * o.d_[j];
            r.d_[i + j] = uint32_t(cur % BASE);
            carry = cur / BASE;
        }
    }
    r.trim();
    return r;
}

int Nat::cmp(const Nat& o) const {
    if (d_.size() != o.d_.size()) return d_.size() < o.d_.size() ? -1 : 1;
    for (size_t i = d_.size(); i-- > 0;)
        if (d_[i] != o.d_[i]) return d_[i] < o.d_[i] ? -1 : 1;
    return 0;
}

Nat Nat::pow_u(uint64_t base, uint64_t exp) {
    Nat r(1), b(base);
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

std::string Nat::str() const {
    std::string s = std::to_string(d_.back());
    for (size_t i = d_.size() - 1; i-- > 0;) {
        std::string part = std::to_string(d_[i]);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

}  // namespace wsh::ff

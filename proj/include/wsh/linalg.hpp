/* Dense matrices over GF(q) for the matrix model, module actions and the
 * meataxe.  Desk-scale only; nothing here is tuned past O(n^3). */

#ifndef WSH_LINALG_HPP
#define WSH_LINALG_HPP

#include <cstdint>
#include <vector>

#include "wsh/field.hpp"

namespace wsh::la {

using ff::FF;
using ff::Field;

struct Mat {
    uint32_t r = 0, c = 0;
    std::vector<FF> e;

    Mat() = default;
    Mat(uint32_t rows, uint32_t cols) : r(rows), c(cols), e(size_t(rows) * cols) {}
    FF& at(uint32_t i, uint32_t j) { return e[size_t(i) * c + j]; }
    const FF& at(uint32_t i, uint32_t j) const { return e[size_t(i) * c + j]; }
    static Mat identity(uint32_t n) {
        Mat m(n, n);
        for (uint32_t i = 0; i < n; ++i) m.at(i, i) = {1, 0};
        return m;
    }
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.r == b.r && a.c == b.c && a.e == b.e;
    }
};

inline Mat mul(const Field& F, const Mat& a, const Mat& b) {
    Mat r(a.r, b.c);
    for (uint32_t i = 0; i < a.r; ++i)
        for (uint32_t k = 0; k < a.c; ++k) {
            FF v = a.at(i, k);
            if (F.is_zero(v)) continue;
            for (uint32_t j = 0; j < b.c; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(v, b.at(k, j)));
        }
    return r;
}

inline Mat add(const Field& F, const Mat& a, const Mat& b) {
    Mat r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = F.add(r.e[i], b.e[i]);
    return r;
}

inline Mat scale(const Field& F, const Mat& a, const FF& s) {
    Mat r = a;
    for (auto& x : r.e) x = F.mul(x, s);
    return r;
}

inline Mat pow(const Field& F, Mat a, uint64_t n) {
    Mat r = Mat::identity(a.r);
    while (n) {
        if (n & 1) r = mul(F, r, a);
        a = mul(F, a, a);
        n >>= 1;
    }
    return r;
}

inline Mat transpose(const Field& F, const Mat& a) {
    (void)F;
    Mat r(a.c, a.r);
    for (uint32_t i = 0; i < a.r; ++i)
        for (uint32_t j = 0; j < a.c; ++j) r.at(j, i) = a.at(i, j);
    return r;
}

inline bool is_zero(const Field& F, const Mat& a) {
    for (auto& x : a.e)
        if (!F.is_zero(x)) return false;
    return true;
}

/// Row reduce in place; returns rank.  pivot_cols, when given, receives the
/// pivot column of each nonzero row.
inline uint32_t rref(const Field& F, Mat& m, std::vector<uint32_t>* pivot_cols = nullptr) {
    uint32_t rank = 0;
    if (pivot_cols) pivot_cols->clear();
    for (uint32_t col = 0; col < m.c && rank < m.r; ++col) {
        uint32_t piv = rank;
        while (piv < m.r && F.is_zero(m.at(piv, col))) ++piv;
        if (piv == m.r) continue;
        for (uint32_t j = 0; j < m.c; ++j) std::swap(m.at(piv, j), m.at(rank, j));
        FF inv = F.inv(m.at(rank, col));
        for (uint32_t j = 0; j < m.c; ++j) m.at(rank, j) = F.mul(m.at(rank, j), inv);
        for (uint32_t i = 0; i < m.r; ++i) {
            if (i == rank) continue;
            FF f = m.at(i, col);
            if (F.is_zero(f)) continue;
            for (uint32_t j = 0; j < m.c; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(rank, j)));
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    m.r = rank;
    m.e.resize(size_t(rank) * m.c);
    return rank;
}

inline uint32_t rank(const Field& F, Mat m) { return rref(F, m); }

/// Basis of the right null space { v : m v^T = 0 }, rows of the result.
inline Mat kernel(const Field& F, Mat m) {
    std::vector<uint32_t> piv;
    rref(F, m, &piv);
    std::vector<bool> is_piv(m.c, false);
    for (uint32_t c : piv) is_piv[c] = true;
    Mat k(m.c - m.r, m.c);
    uint32_t row = 0;
    for (uint32_t free = 0; free < m.c; ++free) {
        if (is_piv[free]) continue;
        k.at(row, free) = F.one();
        for (uint32_t i = 0; i < m.r; ++i)
            k.at(row, piv[i]) = F.neg(m.at(i, free));
        ++row;
    }
    return k;
}

}  // namespace wsh::la

#endif

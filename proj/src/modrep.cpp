#include "wsh/modrep.hpp"

#include <algorithm>
#include <functional>

namespace wsh::rep {

using core::sv_add_scaled;
using ff::fail;

// ------------------------------------------------------------ straightener

Straightener::Straightener(const LieSuperAlgebra& A, std::vector<uint32_t> order)
    : A_(&A), order_(std::move(order)) {
    pos_.assign(A.dim(), UINT32_MAX);
    for (uint32_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = i;
}

void Straightener::add_scaled(Combo& dst, const Combo& src, const FF& s) const {
    const auto& F = A_->F;
    if (F.is_zero(s)) return;
    for (auto& [m, c] : src) {
        FF v = F.mul(c, s);
        auto it = dst.find(m);
        if (it == dst.end()) {
            if (!F.is_zero(v)) dst[m] = v;
        } else {
            it->second = F.add(it->second, v);
            if (F.is_zero(it->second)) dst.erase(it);
        }
    }
}

Combo Straightener::mul_left(uint32_t gen, const PBWMono& mono) {
    const auto& F = A_->F;
    const uint32_t p = F.p();
    auto key = std::make_pair(gen, mono);
    if (auto it = memo_left_.find(key); it != memo_left_.end()) return it->second;

    uint32_t rg = pos_[gen];
    uint32_t rs = 0;
    while (rs < mono.size() && mono[rs] == 0) ++rs;

    Combo out;
    if (rs == mono.size() || rg < rs) {
        PBWMono m = mono;
        m[rg] += 1;
        if (A_->parity[gen] && m[rg] > 1) fail("straighten: odd exponent overflow");
        out[m] = F.one();
    } else if (rg == rs) {
        uint32_t b = order_[rs];
        if (!A_->parity[b] && mono[rs] + 1 < p) {
            PBWMono m = mono;
            m[rs] += 1;
            out[m] = F.one();
        } else {
            // x^p = x^[p] (even) or z*z = [z,z]/2 (odd), then times the rest
            PBWMono rest = mono;
            uint32_t drop = A_->parity[b] ? 1 : p - 1;
            rest[rs] -= drop;
            SV sub = A_->parity[b]
                         ? core::sv_scale(F, A_->sc_bracket(b, b), F.inv(F.of_int(2)))
                         : A_->pmap_sv(b);
            for (auto& [k, c] : sub) add_scaled(out, mul_left(k, rest), c);
        }
    } else {
        // move gen past the leading factor b_h
        uint32_t h = order_[rs];
        PBWMono rest = mono;
        rest[rs] -= 1;
        FF sign = (A_->parity[gen] && A_->parity[h]) ? F.of_int(-1) : F.one();
        Combo inner = mul_left(gen, rest);
        for (auto& [m, c] : inner) add_scaled(out, mul_left(h, m), F.mul(c, sign));
        for (auto& [k, c] : A_->sc_bracket(gen, h)) add_scaled(out, mul_left(k, rest), c);
    }
    memo_left_[key] = out;
    return out;
}

Combo Straightener::mul_right(const PBWMono& mono, uint32_t gen) {
    const auto& F = A_->F;
    const uint32_t p = F.p();
    auto key = std::make_pair(gen, mono);
    if (auto it = memo_right_.find(key); it != memo_right_.end()) return it->second;

    uint32_t rg = pos_[gen];
    uint32_t rl = uint32_t(mono.size());
    while (rl > 0 && mono[rl - 1] == 0) --rl;

    Combo out;
    if (rl == 0 || rg > rl - 1) {
        PBWMono m = mono;
        m[rg] += 1;
        if (A_->parity[gen] && m[rg] > 1) fail("straighten: odd exponent overflow");
        out[m] = F.one();
    } else if (rg == rl - 1) {
        uint32_t b = order_[rg];
        if (!A_->parity[b] && mono[rg] + 1 < p) {
            PBWMono m = mono;
            m[rg] += 1;
            out[m] = F.one();
        } else {
            PBWMono rest = mono;
            uint32_t drop = A_->parity[b] ? 1 : p - 1;
            rest[rg] -= drop;
            SV sub = A_->parity[b]
                         ? core::sv_scale(F, A_->sc_bracket(b, b), F.inv(F.of_int(2)))
                         : A_->pmap_sv(b);
            for (auto& [k, c] : sub) add_scaled(out, mul_right(rest, k), c);
        }
    } else {
        // mono = rest * b_h with h after gen: (rest b_h) g =
        // (-1)^(|g||h|) (rest g) b_h + rest [b_h, g]
        uint32_t h = order_[rl - 1];
        PBWMono rest = mono;
        rest[rl - 1] -= 1;
        FF sign = (A_->parity[gen] && A_->parity[h]) ? F.of_int(-1) : F.one();
        Combo inner = mul_right(rest, gen);
        for (auto& [m, c] : inner) add_scaled(out, mul_right(m, h), F.mul(c, sign));
        for (auto& [k, c] : A_->sc_bracket(h, gen)) add_scaled(out, mul_right(rest, k), c);
    }
    memo_right_[key] = out;
    return out;
}

Combo Straightener::straighten_word(const std::vector<uint32_t>& word,
                                    const std::string& strategy) {
    const auto& F = A_->F;
    Combo acc;
    acc[PBWMono(order_.size(), 0)] = F.one();
    if (strategy == "left") {
        for (size_t i = word.size(); i-- > 0;) {
            Combo next;
            for (auto& [m, c] : acc) add_scaled(next, mul_left(word[i], m), c);
            acc = std::move(next);
        }
    } else if (strategy == "right") {
        for (uint32_t g : word) {
            Combo next;
            for (auto& [m, c] : acc) add_scaled(next, mul_right(m, g), c);
            acc = std::move(next);
        }
    } else {
        fail("straighten_word: unknown strategy " + strategy);
    }
    return acc;
}

// ----------------------------------------------------------------- induce

Report ModuleRep::verify() const {
    Report rep;
    const auto& F = A->F;
    for (uint32_t i = 0; i < A->dim(); ++i)
        for (uint32_t j = i; j < A->dim(); ++j) {
            Mat lhs(dim, dim);
            for (auto& [k, c] : A->sc_bracket(i, j))
                lhs = la::add(F, lhs, la::scale(F, rho[k], c));
            Mat rhs = la::mul(F, rho[i], rho[j]);
            FF s = (A->parity[i] && A->parity[j]) ? F.one() : F.of_int(-1);
            rhs = la::add(F, rhs, la::scale(F, la::mul(F, rho[j], rho[i]), s));
            if (!(lhs == rhs)) {
                rep.add_fail("module_bracket_relation", json{{"i", i}, {"j", j}});
                return rep;
            }
        }
    rep.add_pass("module_bracket_relation");
    for (uint32_t i = 0; i < A->dim(); ++i) {
        if (A->parity[i]) continue;
        Mat lhs(dim, dim);
        for (auto& [k, c] : A->pmap_sv(i)) lhs = la::add(F, lhs, la::scale(F, rho[k], c));
        if (!(lhs == la::pow(F, rho[i], F.p()))) {
            rep.add_fail("module_restrictedness", json{{"i", i}});
            return rep;
        }
    }
    rep.add_pass("module_restrictedness");
    return rep;
}

Character ModuleRep::character() const {
    const uint32_t p = A->F.p();
    const uint32_t r = uint32_t(A->torus.size());
    Character ch = Character::zero(r, p);
    for (uint32_t i = 0; i < dim; ++i) {
        Weight w(r, 0);
        for (uint32_t t = 0; t < r; ++t) {
            // module basis vectors are weight vectors: diagonal entry
            w[t] = rho[A->torus[t]].at(i, i).a;
        }
        ch.mult[ch.index_of(w)] = ch.mult[ch.index_of(w)] + ff::Nat(1);
    }
    return ch;
}

ModuleRep induce(const LieSuperAlgebra& A, const std::vector<uint32_t>& b_indices,
                 const Weight& lambda, uint32_t cap) {
    const auto& F = A.F;
    const uint32_t p = F.p();
    std::vector<bool> in_b(A.dim(), false);
    for (uint32_t i : b_indices) in_b[i] = true;
    for (uint32_t t : A.torus)
        if (!in_b[t]) fail("induce: b must contain the torus");
    // b closed under bracket and p-map
    for (uint32_t i : b_indices)
        for (uint32_t j : b_indices)
            for (auto& [k, c] : A.sc_bracket(i, j))
                if (!in_b[k]) fail("induce: b is not a subalgebra");
    for (uint32_t i : b_indices)
        if (!A.parity[i])
            for (auto& [k, c] : A.pmap_sv(i))
                if (!in_b[k]) fail("induce: b is not p-closed");

    std::vector<uint32_t> complement, torus_sorted, b_nil;
    for (uint32_t i = 0; i < A.dim(); ++i)
        if (!in_b[i]) complement.push_back(i);
    std::vector<bool> is_torus(A.dim(), false);
    for (uint32_t t : A.torus) is_torus[t] = true;
    for (uint32_t i : b_indices)
        if (is_torus[i]) torus_sorted.push_back(i);
    for (uint32_t i : b_indices)
        if (!is_torus[i]) b_nil.push_back(i);

    // predicted dimension p^(even complement) * 2^(odd complement)
    uint64_t d = 1;
    for (uint32_t i : complement) {
        d *= A.parity[i] ? 2 : p;
        if (d > cap) fail("induce: dimension cap exceeded");
    }

    // straightening order: complement, then torus, then the nilpotent part
    // of b, so monomials reduce against k_lambda from the right
    std::vector<uint32_t> order = complement;
    for (uint32_t t : A.torus) order.push_back(t);
    for (uint32_t i : b_nil) order.push_back(i);
    Straightener st(A, order);

    ModuleRep V;
    V.A = &A;
    V.dim = uint32_t(d);
    V.lambda = lambda;
    V.complement = complement;

    // module basis: exponent vectors over the complement, last index fastest
    std::vector<PBWMono> monos;
    PBWMono cur(complement.size(), 0);
    while (true) {
        monos.push_back(cur);
        int i = int(complement.size()) - 1;
        while (i >= 0) {
            uint32_t lim = A.parity[complement[i]] ? 2 : p;
            if (uint32_t(cur[i] + 1) < lim) {
                cur[i]++;
                break;
            }
            cur[i--] = 0;
        }
        if (i < 0) break;
    }
    if (monos.size() != d) fail("induce: enumeration mismatch");
    std::map<PBWMono, uint32_t> index_of;
    for (uint32_t i = 0; i < monos.size(); ++i) index_of[monos[i]] = i;
    V.basis = monos;
    for (auto& m : monos) {
        int par = 0;
        for (uint32_t i = 0; i < complement.size(); ++i)
            par += A.parity[complement[i]] * m[i];
        V.par.push_back(par & 1);
    }

    // evaluate a straightened full monomial against k_lambda
    const size_t nc = complement.size(), nt = torus_sorted.size();
    auto torus_pos_of = [&](uint32_t idx) {
        for (uint32_t t = 0; t < A.torus.size(); ++t)
            if (A.torus[t] == idx) return t;
        fail("induce: torus bookkeeping");
        return 0u;
    };
    std::vector<uint32_t> torus_slot(nt);
    for (uint32_t t = 0; t < nt; ++t) torus_slot[t] = torus_pos_of(order[nc + t]);

    V.rho.assign(A.dim(), Mat(V.dim, V.dim));
    for (uint32_t g = 0; g < A.dim(); ++g) {
        for (uint32_t col = 0; col < V.dim; ++col) {
            PBWMono full(order.size(), 0);
            for (uint32_t i = 0; i < nc; ++i) full[i] = monos[col][i];
            Combo acted = st.mul_left(g, full);
            for (auto& [m, c] : acted) {
                bool killed = false;
                for (size_t i = nc + nt; i < m.size(); ++i)
                    if (m[i]) killed = true;  // nilpotent part of b acts by zero
                if (killed) continue;
                FF value = c;
                for (uint32_t t = 0; t < nt; ++t)
                    value = F.mul(value,
                                  F.pow(FF{lambda[torus_slot[t]], 0}, m[nc + t]));
                if (F.is_zero(value)) continue;
                PBWMono cm(m.begin(), m.begin() + nc);
                V.rho[g].at(index_of.at(cm), col) =
                    F.add(V.rho[g].at(index_of.at(cm), col), value);
            }
        }
    }
    Report chk = V.verify();
    if (!chk.ok()) fail("induce: module axioms failed to verify");
    return V;
}

// ----------------------------------------------------------------- meataxe

namespace {

struct RowEch {
    const ff::Field* F;
    std::map<uint32_t, std::vector<FF>> rows;  // pivot col -> normalized row

    bool add(std::vector<FF> v) {
        while (true) {
            uint32_t piv = UINT32_MAX;
            for (uint32_t i = 0; i < v.size(); ++i)
                if (!F->is_zero(v[i])) {
                    piv = i;
                    break;
                }
            if (piv == UINT32_MAX) return false;
            auto it = rows.find(piv);
            if (it == rows.end()) {
                FF inv = F->inv(v[piv]);
                for (auto& x : v) x = F->mul(x, inv);
                rows[piv] = std::move(v);
                return true;
            }
            FF c = v[piv];
            for (uint32_t i = 0; i < v.size(); ++i)
                v[i] = F->sub(v[i], F->mul(c, it->second[i]));
        }
    }
    size_t dim() const { return rows.size(); }
    Mat to_mat(uint32_t cols) const {
        Mat m(uint32_t(rows.size()), cols);
        uint32_t r = 0;
        for (auto& [piv, row] : rows) {
            for (uint32_t c = 0; c < cols; ++c) m.at(r, c) = row[c];
            ++r;
        }
        return m;
    }
};

std::vector<FF> apply_col(const ff::Field& F, const Mat& M, const std::vector<FF>& v) {
    std::vector<FF> out(M.r, FF{0, 0});
    for (uint32_t i = 0; i < M.r; ++i) {
        FF acc{0, 0};
        for (uint32_t j = 0; j < M.c; ++j) acc = F.add(acc, F.mul(M.at(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

/// smallest invariant subspace containing v (rows of the result span it)
Mat spin(const ff::Field& F, const std::vector<Mat>& gens, const std::vector<FF>& v,
         uint32_t dim) {
    RowEch ech{&F, {}};
    std::vector<std::vector<FF>> work;
    if (ech.add(v)) work.push_back(v);
    while (!work.empty()) {
        auto w = std::move(work.back());
        work.pop_back();
        for (auto& g : gens) {
            auto u = apply_col(F, g, w);
            if (ech.add(u)) work.push_back(u);
        }
        if (ech.dim() == dim) break;
    }
    return ech.to_mat(dim);
}

Mat random_element(const ff::Field& F, const std::vector<Mat>& gens, Rng& rng, uint32_t dim) {
    Mat acc(dim, dim);
    uint32_t summands = 2 + uint32_t(rng.below(2));
    for (uint32_t s = 0; s < summands; ++s) {
        Mat term = Mat::identity(dim);
        uint32_t len = 1 + uint32_t(rng.below(3));
        for (uint32_t i = 0; i < len; ++i) term = la::mul(F, term, gens[rng.below(gens.size())]);
        FF c = F.of_int(1 + int(rng.below(F.p() - 1)));
        acc = la::add(F, acc, la::scale(F, term, c));
    }
    return acc;
}

struct SubQuot {
    // submodule rows (rref, in ambient coords) and action restrictions
    Mat sub;                     // s x d
    std::vector<uint32_t> pivots;
    std::vector<Mat> sub_act, quot_act;
    std::vector<uint32_t> free_cols;
};

SubQuot split_along(const ff::Field& F, const std::vector<Mat>& gens, Mat W) {
    SubQuot sq;
    la::rref(F, W, &sq.pivots);
    sq.sub = W;
    std::vector<bool> is_piv(gens.empty() ? 0 : gens[0].c, false);
    uint32_t d = gens[0].c;
    is_piv.assign(d, false);
    for (uint32_t p : sq.pivots) is_piv[p] = true;
    for (uint32_t c = 0; c < d; ++c)
        if (!is_piv[c]) sq.free_cols.push_back(c);
    uint32_t s = W.r, q = d - W.r;
    for (auto& g : gens) {
        Mat ga(s, s);
        for (uint32_t i = 0; i < s; ++i) {
            std::vector<FF> row(d);
            for (uint32_t j = 0; j < d; ++j) row[j] = W.at(i, j);
            auto img = apply_col(F, g, row);
            // reduce against W, reading coordinates at the pivots
            for (uint32_t k = 0; k < s; ++k) {
                FF c = img[sq.pivots[k]];
                ga.at(k, i) = c;
                if (F.is_zero(c)) continue;
                for (uint32_t j = 0; j < d; ++j)
                    img[j] = F.sub(img[j], F.mul(c, W.at(k, j)));
            }
            for (uint32_t j = 0; j < d; ++j)
                if (!F.is_zero(img[j])) fail("split_along: subspace is not invariant");
        }
        sq.sub_act.push_back(ga);
        Mat gq(q, q);
        for (uint32_t i = 0; i < q; ++i) {
            std::vector<FF> e(d, FF{0, 0});
            e[sq.free_cols[i]] = F.one();
            auto img = apply_col(F, g, e);
            for (uint32_t k = 0; k < s; ++k) {
                FF c = img[sq.pivots[k]];
                if (F.is_zero(c)) continue;
                for (uint32_t j = 0; j < d; ++j)
                    img[j] = F.sub(img[j], F.mul(c, W.at(k, j)));
            }
            for (uint32_t j = 0; j < q; ++j) gq.at(j, i) = img[sq.free_cols[j]];
        }
        sq.quot_act.push_back(gq);
    }
    return sq;
}

void chop(const ff::Field& F, const std::vector<Mat>& gens, uint32_t dim, Rng& rng,
          std::vector<Mat>& series_out, const Mat& embed);

// recurse through a proper invariant subspace W: sub series, then quotient
// layers pulled back over the submodule
void split_and_recurse(const ff::Field& F, const std::vector<Mat>& gens, uint32_t dim,
                       Rng& rng, std::vector<Mat>& series_out, const Mat& embed,
                       const Mat& W) {
    SubQuot sq = split_along(F, gens, W);
    // the sub-action coordinates refer to the rref rows, so lift those
    Mat sub_embed(sq.sub.r, embed.c);
    for (uint32_t i = 0; i < sq.sub.r; ++i)
        for (uint32_t c = 0; c < embed.c; ++c) {
            FF acc{0, 0};
            for (uint32_t j = 0; j < dim; ++j)
                acc = F.add(acc, F.mul(sq.sub.at(i, j), embed.at(j, c)));
            sub_embed.at(i, c) = acc;
        }
    chop(F, sq.sub_act, sq.sub.r, rng, series_out, sub_embed);
    // quotient layers: representatives through the free columns
    Mat quot_embed(uint32_t(sq.free_cols.size()), embed.c);
    for (uint32_t i = 0; i < sq.free_cols.size(); ++i)
        for (uint32_t c = 0; c < embed.c; ++c)
            quot_embed.at(i, c) = embed.at(sq.free_cols[i], c);
    size_t base = series_out.size();
    chop(F, sq.quot_act, uint32_t(sq.free_cols.size()), rng, series_out, quot_embed);
    // every quotient layer must also contain the submodule
    for (size_t li = base; li < series_out.size(); ++li) {
        RowEch ech{&F, {}};
        for (uint32_t i = 0; i < series_out[li].r; ++i) {
            std::vector<FF> row(embed.c);
            for (uint32_t c = 0; c < embed.c; ++c) row[c] = series_out[li].at(i, c);
            ech.add(std::move(row));
        }
        for (uint32_t i = 0; i < sub_embed.r; ++i) {
            std::vector<FF> row(embed.c);
            for (uint32_t c = 0; c < embed.c; ++c) row[c] = sub_embed.at(i, c);
            ech.add(std::move(row));
        }
        series_out[li] = ech.to_mat(embed.c);
    }
}

// composition series of the module spanned by the standard basis under gens;
// appends nested layer bases in embed coordinates
void chop(const ff::Field& F, const std::vector<Mat>& gens, uint32_t dim, Rng& rng,
          std::vector<Mat>& series_out, const Mat& embed) {
    if (dim == 0) return;
    if (dim == 1) {
        series_out.push_back(embed);
        return;
    }
    // deterministic pass: spins of the standard basis vectors; this also
    // settles modules with large trivial subquotients, where every word in
    // the generators acts by zero and no random element can decide
    for (uint32_t i = 0; i < dim; ++i) {
        std::vector<FF> v(dim, FF{0, 0});
        v[i] = F.one();
        Mat W = spin(F, gens, v, dim);
        if (W.r < dim) {
            split_and_recurse(F, gens, dim, rng, series_out, embed, W);
            return;
        }
    }
    for (uint32_t attempt = 0; attempt < 400; ++attempt) {
        Mat theta = random_element(F, gens, rng, dim);
        Mat K = la::kernel(F, theta);
        if (K.r == 0 || K.r == dim) continue;
        bool all_full = true;
        for (uint32_t kv = 0; kv < K.r && all_full; ++kv) {
            std::vector<FF> v(dim);
            for (uint32_t j = 0; j < dim; ++j) v[j] = K.at(kv, j);
            Mat W = spin(F, gens, v, dim);
            if (W.r < dim) {
                all_full = false;
                split_and_recurse(F, gens, dim, rng, series_out, embed, W);
                return;
            }
        }
        // Norton's criterion: every kernel vector of theta spins to the
        // whole module; if some dual kernel vector also dual-spins to
        // everything, the module is irreducible
        std::vector<Mat> gensT;
        for (auto& g : gens) gensT.push_back(la::transpose(F, g));
        Mat Kt = la::kernel(F, la::transpose(F, theta));
        if (Kt.r == 0) continue;
        std::vector<FF> w(dim);
        for (uint32_t j = 0; j < dim; ++j) w[j] = Kt.at(0, j);
        Mat Wd = spin(F, gensT, w, dim);
        if (Wd.r == dim) {
            series_out.push_back(embed);
            return;
        }
        // otherwise the perp of the dual spin is a proper submodule
        Mat perp = la::kernel(F, Wd);
        split_and_recurse(F, gens, dim, rng, series_out, embed, perp);
        return;
    }
    fail("meataxe: undecided after the retry budget at dim " + std::to_string(dim));
}

// echelon with coordinate tracking over the inserted rows
struct DenseSolver {
    const ff::Field* F;
    struct Row {
        std::vector<FF> v, aug;
    };
    std::map<uint32_t, Row> rows;
    uint32_t count = 0;

    bool add(std::vector<FF> v) {
        std::vector<FF> aug(count + 1, FF{0, 0});
        aug[count] = F->one();
        bool grew = reduce_into(v, aug);
        ++count;
        return grew;
    }
    /// coordinates of v over the inserted rows, or nullopt if outside
    std::optional<std::vector<FF>> solve(std::vector<FF> v) const {
        std::vector<FF> coeff(count, FF{0, 0});
        while (true) {
            uint32_t piv = UINT32_MAX;
            for (uint32_t i = 0; i < v.size(); ++i)
                if (!F->is_zero(v[i])) {
                    piv = i;
                    break;
                }
            if (piv == UINT32_MAX) return coeff;
            auto it = rows.find(piv);
            if (it == rows.end()) return std::nullopt;
            FF c = v[piv];
            for (uint32_t i = 0; i < v.size(); ++i)
                v[i] = F->sub(v[i], F->mul(c, it->second.v[i]));
            for (uint32_t i = 0; i < it->second.aug.size() && i < count; ++i)
                coeff[i] = F->add(coeff[i], F->mul(c, it->second.aug[i]));
        }
    }

  private:
    bool reduce_into(std::vector<FF>& v, std::vector<FF>& aug) {
        while (true) {
            uint32_t piv = UINT32_MAX;
            for (uint32_t i = 0; i < v.size(); ++i)
                if (!F->is_zero(v[i])) {
                    piv = i;
                    break;
                }
            if (piv == UINT32_MAX) return false;
            auto it = rows.find(piv);
            if (it == rows.end()) {
                FF inv = F->inv(v[piv]);
                for (auto& x : v) x = F->mul(x, inv);
                for (auto& x : aug) x = F->mul(x, inv);
                rows[piv] = Row{std::move(v), std::move(aug)};
                return true;
            }
            FF c = v[piv];
            for (uint32_t i = 0; i < v.size(); ++i)
                v[i] = F->sub(v[i], F->mul(c, it->second.v[i]));
            aug.resize(std::max(aug.size(), it->second.aug.size()), FF{0, 0});
            for (uint32_t i = 0; i < it->second.aug.size(); ++i)
                aug[i] = F->sub(aug[i], F->mul(c, it->second.aug[i]));
        }
    }
};

Factor factor_of_layer(const ModuleRep& V, const Mat& big, const Mat& small) {
    const auto& F = V.A->F;
    const uint32_t p = F.p();
    const uint32_t r = uint32_t(V.A->torus.size());

    // representatives of big modulo small, with a solver over [reps, small]
    RowEch probe{&F, {}};
    std::vector<std::vector<FF>> reps;
    for (uint32_t i = 0; i < small.r; ++i) {
        std::vector<FF> row(small.c);
        for (uint32_t c = 0; c < small.c; ++c) row[c] = small.at(i, c);
        probe.add(std::move(row));
    }
    for (uint32_t i = 0; i < big.r; ++i) {
        std::vector<FF> row(big.c);
        for (uint32_t c = 0; c < big.c; ++c) row[c] = big.at(i, c);
        if (probe.add(row)) reps.push_back(row);
    }
    Factor f;
    f.dim = uint32_t(reps.size());

    DenseSolver solver{&F};
    for (auto& rrow : reps) solver.add(rrow);
    for (uint32_t i = 0; i < small.r; ++i) {
        std::vector<FF> row(small.c);
        for (uint32_t c = 0; c < small.c; ++c) row[c] = small.at(i, c);
        solver.add(std::move(row));
    }
    // matrix of an operator on the factor (columns = images of the reps)
    auto factor_action = [&](const Mat& M) {
        Mat m(f.dim, f.dim);
        for (uint32_t i = 0; i < f.dim; ++i) {
            auto coeff = solver.solve(apply_col(F, M, reps[i]));
            if (!coeff) fail("factor_of_layer: image escapes the layer");
            for (uint32_t j = 0; j < f.dim; ++j) m.at(j, i) = (*coeff)[j];
        }
        return m;
    };

    // character: joint eigenspace dimensions of the torus action
    std::vector<Weight> lambdas = wt::lambda_enumerate(r, p);
    f.character.assign(lambdas.size(), 0);
    std::vector<Mat> torus_acts;
    for (uint32_t t : V.A->torus) torus_acts.push_back(factor_action(V.rho[t]));
    for (size_t li = 0; li < lambdas.size(); ++li) {
        Mat stack(uint32_t(r * f.dim), f.dim);
        for (uint32_t t = 0; t < r; ++t)
            for (uint32_t i = 0; i < f.dim; ++i)
                for (uint32_t j = 0; j < f.dim; ++j) {
                    FF v = torus_acts[t].at(i, j);
                    if (i == j) v = F.sub(v, FF{lambdas[li][t], 0});
                    stack.at(t * f.dim + i, j) = v;
                }
        f.character[li] = la::kernel(F, stack).r;
    }

    // parity signature when both layer spaces are stable under the parity
    // involution of the module
    Mat eps(big.c, big.c);
    for (uint32_t i = 0; i < big.c; ++i)
        eps.at(i, i) = V.par[i] ? F.of_int(-1) : F.one();
    auto graded = [&](const Mat& space) {
        RowEch e{&F, {}};
        for (uint32_t i = 0; i < space.r; ++i) {
            std::vector<FF> row(space.c);
            for (uint32_t c = 0; c < space.c; ++c) row[c] = space.at(i, c);
            e.add(std::move(row));
        }
        for (uint32_t i = 0; i < space.r; ++i) {
            std::vector<FF> row(space.c);
            for (uint32_t c = 0; c < space.c; ++c) row[c] = space.at(i, c);
            if (e.add(apply_col(F, eps, row))) return false;
        }
        return true;
    };
    if (graded(big) && (small.r == 0 || graded(small))) {
        Mat eact = factor_action(eps);
        Mat shifted = eact;
        for (uint32_t i = 0; i < f.dim; ++i)
            shifted.at(i, i) = F.sub(shifted.at(i, i), F.one());
        uint32_t even_dim = la::kernel(F, shifted).r;
        f.parity_sig = {even_dim, f.dim - even_dim};
    }
    return f;
}

}  // namespace

std::vector<Mat> composition_series(const ModuleRep& V, uint64_t seed) {
    Rng rng(seed);
    std::vector<Mat> out;
    chop(V.A->F, V.rho, V.dim, rng, out, Mat::identity(V.dim));
    return out;
}

std::string Factor::key() const {
    std::string k = "d" + std::to_string(dim) + ";c";
    for (auto c : character) k += std::to_string(c) + ",";
    return k;
}

json Factor::to_json() const {
    json j{{"dim", dim}, {"character", character}, {"mult", mult}};
    json pc = json::array();
    for (auto& [sig, count] : parity_counts)
        pc.push_back(json{{"even", sig.first}, {"odd", sig.second}, {"count", count}});
    j["parity_signatures"] = pc;
    return j;
}

json CompFactorList::to_json() const {
    json arr = json::array();
    for (auto& f : factors) arr.push_back(f.to_json());
    return json{{"factors", arr}, {"ambiguous_linkage", ambiguous}};
}

CompFactorList composition_factors(const ModuleRep& V, uint64_t seed) {
    auto series = composition_series(V, seed);
    CompFactorList out;
    std::map<std::string, size_t> seen;
    Mat prev(0, V.dim);
    uint32_t covered = 0;
    for (auto& layer : series) {
        Factor f = factor_of_layer(V, layer, prev);
        covered += f.dim;
        auto sig = f.parity_sig.value_or(std::make_pair(UINT32_MAX, UINT32_MAX));
        auto it = seen.find(f.key());
        if (it == seen.end()) {
            seen[f.key()] = out.factors.size();
            f.parity_counts[sig] = 1;
            out.factors.push_back(std::move(f));
        } else {
            out.factors[it->second].mult++;
            out.factors[it->second].parity_counts[sig]++;
        }
        prev = layer;
    }
    if (covered != V.dim) fail("composition_factors: series does not fill the module");
    for (auto& f : out.factors)
        if (f.dim > 1 && f.mult > 1) out.ambiguous = true;
    return out;
}

HeadResult head(const ModuleRep& V, uint64_t seed) {
    const auto& F = V.A->F;
    auto series = composition_series(V, seed);

    // span of the action algebra (with identity)
    std::vector<Mat> span_basis;
    RowEch ech{&F, {}};
    auto add_mat = [&](const Mat& m) {
        std::vector<FF> flat(m.e.begin(), m.e.end());
        if (ech.add(flat)) {
            span_basis.push_back(m);
            return true;
        }
        return false;
    };
    add_mat(Mat::identity(V.dim));
    for (auto& g : V.rho) add_mat(g);
    for (size_t i = 0; i < span_basis.size(); ++i)
        for (size_t j = 0; j < V.rho.size(); ++j) {
            Mat prod = la::mul(F, span_basis[i], V.rho[j]);
            add_mat(prod);
        }

    // radical of the action algebra: elements acting by zero on every factor
    // (linear conditions through the layers)
    std::vector<Mat> conds;  // per span element: stacked factor actions
    Mat prev(0, V.dim);
    std::vector<std::pair<Mat, Mat>> layers;
    for (auto& layer : series) {
        layers.push_back({layer, prev});
        prev = layer;
    }
    uint32_t cond_cols = 0;
    for (auto& [big, small] : layers) cond_cols += (big.r - small.r) * big.c;
    Mat sys(uint32_t(span_basis.size()), cond_cols);
    for (uint32_t bi = 0; bi < span_basis.size(); ++bi) {
        uint32_t off = 0;
        for (auto& [big, small] : layers) {
            // action of the element on representatives of big modulo small:
            // it must map reps into small for the condition "acts by zero"
            RowEch e{&F, {}};
            for (uint32_t i = 0; i < small.r; ++i) {
                std::vector<FF> row(small.c);
                for (uint32_t c = 0; c < small.c; ++c) row[c] = small.at(i, c);
                e.add(std::move(row));
            }
            std::vector<std::vector<FF>> reps;
            for (uint32_t i = 0; i < big.r; ++i) {
                std::vector<FF> row(big.c);
                for (uint32_t c = 0; c < big.c; ++c) row[c] = big.at(i, c);
                if (e.add(row)) reps.push_back(row);
            }
            RowEch esmall{&F, {}};
            for (uint32_t i = 0; i < small.r; ++i) {
                std::vector<FF> row(small.c);
                for (uint32_t c = 0; c < small.c; ++c) row[c] = small.at(i, c);
                esmall.add(std::move(row));
            }
            for (auto& rrow : reps) {
                auto img = apply_col(F, span_basis[bi], rrow);
                // reduce modulo small; what remains is the condition value
                std::vector<FF> red = img;
                for (auto& [piv, srow] : esmall.rows) {
                    FF c = red[piv];
                    if (F.is_zero(c)) continue;
                    for (uint32_t k = 0; k < red.size(); ++k)
                        red[k] = F.sub(red[k], F.mul(c, srow[k]));
                }
                for (uint32_t k = 0; k < red.size(); ++k) sys.at(bi, off + k) = red[k];
                off += uint32_t(red.size());
            }
        }
    }
    // combinations of span elements vanishing on every factor: the left
    // kernel of sys
    Mat radical_coords = la::kernel(F, la::transpose(F, sys));

    // rad(V) = sum of row spaces of the radical elements
    RowEch radv{&F, {}};
    for (uint32_t i = 0; i < radical_coords.r; ++i) {
        Mat a(V.dim, V.dim);
        for (uint32_t b = 0; b < span_basis.size(); ++b) {
            FF c = radical_coords.at(i, b);
            if (!F.is_zero(c)) a = la::add(F, a, la::scale(F, span_basis[b], c));
        }
        // columns of a span the image (column convention)
        for (uint32_t col = 0; col < V.dim; ++col) {
            std::vector<FF> v(V.dim);
            for (uint32_t r2 = 0; r2 < V.dim; ++r2) v[r2] = a.at(r2, col);
            radv.add(std::move(v));
        }
    }
    HeadResult hr;
    hr.radical_dim = uint32_t(radv.dim());
    hr.head_dim = V.dim - hr.radical_dim;
    // head factor: quotient by rad(V)
    Mat radm = radv.to_mat(V.dim);
    Mat full = Mat::identity(V.dim);
    hr.head = factor_of_layer(V, full, radm);
    hr.head_simple = true;
    if (hr.head_dim != hr.head.dim) hr.head_simple = false;
    // simplicity: chop the quotient
    if (hr.head_simple && hr.head_dim > 0) {
        SubQuot sq = radm.r ? split_along(F, V.rho, radm) : SubQuot{};
        std::vector<Mat> quot = radm.r ? sq.quot_act : V.rho;
        Rng rng(seed + 1);
        std::vector<Mat> sub_series;
        chop(F, quot, hr.head_dim, rng, sub_series, Mat::identity(hr.head_dim));
        hr.head_simple = sub_series.size() == 1;
    }
    return hr;
}

ModuleRep twist_module(const ModuleRep& V, const cartan::LinMap& sigma) {
    ModuleRep W = V;
    const auto& F = V.A->F;
    for (uint32_t i = 0; i < V.A->dim(); ++i) {
        Mat m(V.dim, V.dim);
        for (auto& [k, c] : sigma.img[i]) m = la::add(F, m, la::scale(F, V.rho[k], c));
        W.rho[i] = m;
    }
    return W;
}

Report verify_lemma41(const cartan::Spec& spec, const cartan::PaperSubalgebra& sub,
                      const cartan::AlphaBuild& alpha, const Weight& lambda, uint32_t cap) {
    Report rep;
    const LieSuperAlgebra& l = sub.l;
    const auto& F = l.F;
    const uint32_t r = uint32_t(l.torus.size());

    auto indices_of = [&](std::initializer_list<const char*> keys) {
        std::vector<uint32_t> out;
        for (auto* k : keys)
            for (auto& row : sub.parts_l.at(k).row_list()) {
                if (row.size() != 1) fail("verify_lemma41: parts must be basis rays");
                out.push_back(row[0].first);
            }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto b_plus = indices_of({"n1p", "l1p"});
    auto b_minus = indices_of({"nm", "g1m"});
    for (uint32_t t : l.torus) {
        b_plus.push_back(t);
        b_minus.push_back(t);
    }
    std::sort(b_plus.begin(), b_plus.end());
    std::sort(b_minus.begin(), b_minus.end());

    ModuleRep V = induce(l, b_plus, lambda, cap);
    ModuleRep Vtw = twist_module(V, alpha.on_l);

    // -alpha~(lambda) = lambda o alpha on the torus
    std::vector<std::vector<uint32_t>> alpha_h(r, std::vector<uint32_t>(r, 0));
    for (uint32_t t = 0; t < r; ++t)
        for (auto& [k, cf] : alpha.on_l.img[l.torus[t]])
            for (uint32_t u = 0; u < r; ++u)
                if (l.torus[u] == k) alpha_h[u][t] = cf.a;
    Weight lam2(r, 0);
    for (uint32_t i = 0; i < r; ++i)
        for (uint32_t j = 0; j < r; ++j)
            lam2[i] = (lam2[i] + alpha_h[j][i] * lambda[j]) % F.p();

    ModuleRep M2 = induce(l, b_minus, lam2, cap);
    if (V.dim != M2.dim) {
        rep.add_fail("twist_isomorphism", json{{"dimV", V.dim}, {"dimM2", M2.dim}});
        return rep;
    }

    // alpha^{-1} as a linear map (alpha^2 is the parity automorphism, so
    // invert honestly)
    la::Mat Am(uint32_t(l.dim()), uint32_t(l.dim()));
    for (uint32_t j = 0; j < l.dim(); ++j)
        for (auto& [i, c] : alpha.on_l.img[j]) Am.at(i, j) = c;
    la::Mat aug(uint32_t(l.dim()), uint32_t(2 * l.dim()));
    for (uint32_t i = 0; i < l.dim(); ++i) {
        for (uint32_t j = 0; j < l.dim(); ++j) aug.at(i, j) = Am.at(i, j);
        aug.at(i, uint32_t(l.dim()) + i) = F.one();
    }
    la::rref(F, aug);
    cartan::LinMap alpha_inv;
    alpha_inv.img.assign(l.dim(), {});
    for (uint32_t j = 0; j < l.dim(); ++j)
        for (uint32_t i = 0; i < l.dim(); ++i) {
            FF v = aug.at(i, uint32_t(l.dim()) + j);
            if (!F.is_zero(v)) alpha_inv.img[j].emplace_back(i, v);
        }

    // Phi(x (x) 1) = alpha^{-1}(x) (x) 1 on the PBW basis of V
    Mat Phi(V.dim, V.dim);
    for (uint32_t col = 0; col < V.dim; ++col) {
        // product of complement factors, highest position last; apply
        // alpha^{-1} factor by factor to the cyclic vector of M2
        std::vector<FF> vec(M2.dim, FF{0, 0});
        vec[0] = F.one();  // exponent-zero monomial is index 0
        for (uint32_t i = uint32_t(V.complement.size()); i-- > 0;) {
            for (uint32_t e = 0; e < V.basis[col][i]; ++e) {
                // act by alpha^{-1}(b_{complement[i]})
                std::vector<FF> next(M2.dim, FF{0, 0});
                for (auto& [k, c] : alpha_inv.img[V.complement[i]]) {
                    for (uint32_t r2 = 0; r2 < M2.dim; ++r2) {
                        FF acc{0, 0};
                        for (uint32_t c2 = 0; c2 < M2.dim; ++c2)
                            acc = F.add(acc, F.mul(M2.rho[k].at(r2, c2), vec[c2]));
                        next[r2] = F.add(next[r2], F.mul(acc, c));
                    }
                }
                vec = next;
            }
        }
        for (uint32_t r2 = 0; r2 < M2.dim; ++r2) Phi.at(r2, col) = vec[r2];
    }

    // intertwining: Phi rho^alpha(x) = rho_{M2}(x) Phi for every basis x
    for (uint32_t i = 0; i < l.dim(); ++i) {
        Mat lhs = la::mul(F, Phi, Vtw.rho[i]);
        Mat rhs = la::mul(F, M2.rho[i], Phi);
        if (!(lhs == rhs)) {
            rep.add_fail("twist_isomorphism_intertwines", json{{"basis", l.labels[i]}});
            return rep;
        }
    }
    rep.add_pass("twist_isomorphism_intertwines");
    if (la::rank(F, Phi) == V.dim)
        rep.add_pass("twist_isomorphism_bijective");
    else
        rep.add_fail("twist_isomorphism_bijective", json{{"rank", la::rank(F, Phi)}});
    return rep;
}

json linkage_blocks(const std::vector<std::pair<Weight, CompFactorList>>& reps) {
    // union-find over the lambda list
    std::vector<uint32_t> parent(reps.size());
    for (uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::string, uint32_t> first_seen;
    bool ambiguous = false;
    for (uint32_t i = 0; i < reps.size(); ++i) {
        ambiguous = ambiguous || reps[i].second.ambiguous;
        for (auto& f : reps[i].second.factors) {
            auto [it, fresh] = first_seen.try_emplace(f.key(), i);
            if (!fresh) parent[find(i)] = find(it->second);
        }
    }
    std::map<uint32_t, std::vector<json>> blocks;
    for (uint32_t i = 0; i < reps.size(); ++i) blocks[find(i)].push_back(json(reps[i].first));
    json out = json::array();
    for (auto& [root, lams] : blocks) out.push_back(lams);
    return json{{"blocks", out}, {"ambiguous_linkage", ambiguous}};
}

}  // namespace wsh::rep

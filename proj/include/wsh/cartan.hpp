/* Builders for the graded Cartan-type Lie superalgebras over GF(q):
 *
 *   W(m,n;1)  all superderivations sum f_i D_i of A(m,n;1),
 *   S(m,n;1)  the span of D_ij(f) = f_i D_i + f_j D_j  (special type),
 *   H(m,n;1)  the derived algebra of the image of the Hamiltonian
 *             operator D_H, with m = 2l even and n > 3,
 *
 * together with the distinguished subalgebras used by the one-block
 * machinery, the pgl(m+1|n) matrix model with a verified isomorphism onto
 * the W-type subalgebra, and the twist automorphism built from the signed
 * supertranspose.
 *
 * For H the basis is indexed by monomials in the torus eigenvariables
 * e_j = x_{m+j} + sqrt(-1) x_{m+k+j},  f_j = x_{m+j} - sqrt(-1) x_{m+k+j},
 * so every basis vector is a simultaneous weight vector; brackets are
 * computed through the transported Poisson bracket
 * [D_H(f), D_H(g)] = D_H({f,g}). */

#ifndef WSH_CARTAN_HPP
#define WSH_CARTAN_HPP

#include <map>
#include <string>

#include "wsh/liecore.hpp"

namespace wsh::cartan {

using core::Elem;
using core::LieSuperAlgebra;
using core::Subspace;
using core::SV;
using ff::FF;
using ff::Field;
using sp::Ctx;
using sp::Mono;
using sp::Poly;
using json = nlohmann::ordered_json;

struct Spec {
    char type = 'W';  // 'W' | 'S' | 'H'
    uint32_t m = 0, n = 0, p = 5;

    /// structural invariants; throws on violation
    void validate() const;
    /// inside the block-degeneracy hypotheses: p > 3 and not (H with n = 4)
    bool theorem_scope() const;
    std::string scope_note() const;
    Ctx make_ctx() const;
    uint32_t l() const { return m / 2; }
    uint32_t k() const { return n / 2; }
    json to_json() const;
};

// ------------------------------------------------------------------ W type

/// full Witt-type algebra; dim = (m+n) p^m 2^n
LieSuperAlgebra build_W(const Spec& spec);

// ------------------------------------------------------------------ S type

/// D_ij(f) = f_i D_i + f_j D_j with
///   f_i = -(-1)^(d(f)(tau(i)+tau(j))) D_j(f),  f_j = (-1)^(tau(i)tau(j)) D_i(f);
/// f must be parity homogeneous.
Elem op_Dij(const Ctx& c, uint32_t i, uint32_t j, const Poly& f);

/// span of all D_ij(x^(a) x^B), bracket-closed, torus marked
LieSuperAlgebra build_S(const Spec& spec);

/// The S-type torus basis: h_i = (sign) D_{i,i+1}(x_i x_{i+1}) normalized so
/// the x_i D_i coefficient is +1.  Across the even-odd boundary this is
/// x_m D_m + x_{m+1} D_{m+1}; elsewhere x_i D_i - x_{i+1} D_{i+1}.
Elem s_torus_elem(const Ctx& c, uint32_t i);

// ------------------------------------------------------------------ H type

/// permutation i' and sign sigma(i) of the Hamiltonian form
uint32_t h_prime(const Spec& spec, uint32_t i);
int h_sigma(const Spec& spec, uint32_t i);

/// D_H(f) = sum_i sigma(i') (-1)^(tau(i') d(f)) D_{i'}(f) D_i, f parity homogeneous
Elem op_DH(const Ctx& c, const Spec& spec, const Poly& f);

/// transported bracket: {f,g} = sum_i sigma(i) (-1)^(tau(i) d(f)) D_i(f) D_{i'}(g),
/// satisfying [D_H(f), D_H(g)] = D_H({f,g})
Poly poisson(const Ctx& c, const Spec& spec, const Poly& f, const Poly& g);

/// torus eigenvariables e_j, f_j (1 <= j <= k) and their products
Poly h_var_e(const Ctx& c, const Spec& spec, uint32_t j);
Poly h_var_f(const Ctx& c, const Spec& spec, uint32_t j);

/// basis label of H: x^(a) * prod e_j^(ep_j) f_j^(fm_j) * x_{m+n}^delta
struct EfMono {
    std::vector<uint8_t> a;
    uint32_t cp = 0, cm = 0;  // bitmasks over 1..k for e- and f-factors
    uint8_t delta = 0;        // x_{m+n} factor when n is odd
    int degree() const {
        int d = __builtin_popcount(cp) + __builtin_popcount(cm) + delta;
        for (uint8_t e : a) d += e;
        return d;
    }
    int parity() const { return (__builtin_popcount(cp) + __builtin_popcount(cm) + delta) & 1; }
    friend bool operator<(const EfMono& x, const EfMono& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.cp != y.cp) return x.cp < y.cp;
        if (x.cm != y.cm) return x.cm < y.cm;
        return x.delta < y.delta;
    }
    friend bool operator==(const EfMono& x, const EfMono& y) {
        return x.a == y.a && x.cp == y.cp && x.cm == y.cm && x.delta == y.delta;
    }
};

Poly ef_expand(const Ctx& c, const Spec& spec, const EfMono& u);

/// labels of the H basis, in basis order (for decomposition bookkeeping)
std::vector<EfMono> h_basis_labels(const Spec& spec);

/// H(m,n;1) = [Hbar, Hbar]; dim = p^m 2^n - 2
LieSuperAlgebra build_H(const Spec& spec);

// ------------------------------------------- the distinguished subalgebras

struct PaperSubalgebra {
    LieSuperAlgebra l;
    /// l basis expressed in g coordinates (row i <-> l basis i)
    std::vector<SV> embed;
    /// named parts as subspaces of g (keys: g1m, nm, h, n1p, l1p and, per
    /// type, s, t / alpha, beta, n1m, n2prime, n3prime, lplus / w0, pvec)
    std::map<std::string, Subspace> parts_g;
    /// the same parts as subspaces of l
    std::map<std::string, Subspace> parts_l;
    /// displayed bracket-containment relations, each verified exhaustively
    Report relations;
};

PaperSubalgebra build_paper_subalgebra(const Spec& spec, const LieSuperAlgebra& g);

/// element lists that define the negative side of the triangular
/// decomposition of g itself (keys "g1m", "nm"); for W this encodes the
/// degree/lex sign convention, for S and H the displayed part lists
std::map<std::string, std::vector<Elem>> negative_part_elems(const Spec& spec);

// ----------------------------------------------------------- pgl(m+1|n)

struct PglModel {
    LieSuperAlgebra alg;
    uint32_t N = 0;  // matrix size m+1+n, indices 0..m+n, index 0 even
    /// basis index of E_ab (a != b) / of the diagonal class of E_kk (k >= 1)
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> idx_offdiag;
    std::map<uint32_t, uint32_t> idx_diag;
    la::Mat basis_matrix(uint32_t i) const;
    SV coords_of(const la::Mat& X) const;  // well defined modulo the identity
};

PglModel build_pgl(const Spec& spec);

/// linear map between algebras, columns = images of basis vectors
struct LinMap {
    std::vector<SV> img;
    SV apply(const Field& F, const SV& v) const;
};

/// exhaustive bracket-preservation check; failure names the offending pair
Report verify_morphism(const LieSuperAlgebra& A, const LieSuperAlgebra& B, const LinMap& phi,
                       bool require_bijective);

struct IsoBuild {
    LinMap phi;      // l -> pgl
    LinMap phi_inv;  // pgl -> l
    Report rep;
};

/// candidate x_i D_j -> E_ij, D_i -> E_0i, p_i -> E_i0 with a diagonal
/// rescaling search, hard-verified on all basis pairs
IsoBuild iso_candidate(const Spec& spec, const PaperSubalgebra& sub, const PglModel& pgl);

struct AlphaBuild {
    LinMap on_pgl;  // pgl -> pgl
    LinMap on_l;    // transported through the isomorphism
    /// alpha(e_i) = f_i holds for every adjacent pair; alpha(f_i) = sign * e_i
    /// with sign -1 exactly at the even|odd boundary pair
    std::vector<int> f_signs;
    Report rep;
};

/// signed supertranspose X -> -X^st composed with the diagonal conjugation
/// that makes alpha(e_i) = f_i exact; even, restricted, alpha(h) = -h
AlphaBuild build_alpha(const Spec& spec, const PglModel& pgl, const IsoBuild& iso);

}  // namespace wsh::cartan

#endif

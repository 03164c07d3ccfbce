/* Finite-dimensional restricted Lie superalgebras over GF(q).
 *
 * Elements of Witt-type algebras are sparse sums  sum_i f_i D_i  of
 * superderivations of A(m,n;1) (type Elem below).  A LieSuperAlgebra carries
 * an ordered homogeneous basis, sparse structure constants, an optional
 * p-map table, and a marked torus.  Bases may be realized by derivations
 * (types W/S/H), by matrices (the pgl model), or abstractly (JSON-supplied
 * toys); the axiom checkers run off structure constants in every case.
 *
 * Canonical basis order: Z-degree, then direction index, then monomial
 * lexicographic order, so structure constants and serialized JSON are
 * reproducible across runs. */

#ifndef WSH_LIECORE_HPP
#define WSH_LIECORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wsh/linalg.hpp"
#include "wsh/report.hpp"
#include "wsh/rng.hpp"
#include "wsh/superspace.hpp"

namespace wsh::core {

using ff::FF;
using ff::Field;
using sp::Ctx;
using sp::Mono;
using sp::Poly;
using json = nlohmann::ordered_json;

/// coordinate label of W(m,n;1): the basis derivation  (monomial) * D_dir
struct WKey {
    uint32_t dir = 1;
    Mono mono;

    int zdeg() const { return mono.degree() - 1; }
    friend bool operator==(const WKey& x, const WKey& y) {
        return x.dir == y.dir && x.mono == y.mono;
    }
    friend bool operator<(const WKey& x, const WKey& y) {
        int dx = x.zdeg(), dy = y.zdeg();
        if (dx != dy) return dx < dy;
        if (x.dir != y.dir) return x.dir < y.dir;
        return x.mono < y.mono;
    }
};

int wkey_parity(const Ctx& c, const WKey& k);
std::string wkey_label(const Ctx& c, const WKey& k);

/// sparse element  sum f_i D_i  of W(m,n;1)
struct Elem {
    std::map<WKey, FF> t;
    bool is_zero() const { return t.empty(); }
};

Elem elem_zero();
Elem elem_single(const Ctx& c, uint32_t dir, const Mono& mono, const FF& coeff);
/// f * D_dir for a polynomial coefficient
Elem elem_from_poly(const Ctx& c, const Poly& f, uint32_t dir);
void elem_add_scaled(const Ctx& c, Elem& dst, const Elem& src, const FF& s);
Elem elem_scale(const Ctx& c, const Elem& x, const FF& s);
std::optional<int> elem_parity(const Ctx& c, const Elem& x);
std::optional<int> elem_zdeg(const Elem& x);
std::string elem_label(const Ctx& c, const Elem& x);

/// the derivation applied to a polynomial: (sum f_i D_i)(g)
Poly elem_apply(const Ctx& c, const Elem& x, const Poly& g);

/// super bracket [f D_i, g D_j] = f D_i(g) D_j - (-1)^(|fDi||gDj|) g D_j(f) D_i,
/// extended bilinearly term by term (terms are homogeneous, so heterogeneous
/// inputs are handled by their parity-homogeneous pieces).
Elem bracket(const Ctx& c, const Elem& x, const Elem& y);

/// p-fold composition of the derivation, re-read as an element of W via its
/// values on the generators x_1..x_{m+n}; in characteristic p this is again
/// a superderivation.
Elem elem_pth_power(const Ctx& c, const Elem& x);

json elem_to_json(const Ctx& c, const Elem& x);
Elem elem_from_json(const Ctx& c, const json& j);

/// Echelonized span of Elems with optional coordinate tracking against the
/// insertion order ("augmented" rows), used both as a membership oracle and
/// to express vectors in a chosen basis.
class Ech {
  public:
    explicit Ech(const Ctx& c) : ctx_(&c) {}

    /// Reduce v against the span; insert the remainder if nonzero.
    /// Returns true if the dimension grew.  tag = caller's index of v.
    bool add(Elem v, std::optional<uint32_t> tag = std::nullopt);
    bool member(const Elem& v) const;
    Elem reduce(Elem v) const;
    /// coordinates of v over the tagged generators; nullopt if v outside span
    std::optional<std::vector<std::pair<uint32_t, FF>>> solve(Elem v) const;
    size_t dim() const { return rows_.size(); }
    /// the echelon rows ordered by pivot, i.e. in canonical basis order
    std::vector<Elem> rows_in_pivot_order() const;

  private:
    const Ctx* ctx_;
    struct Row {
        Elem v;
        std::map<uint32_t, FF> aug;
    };
    std::map<WKey, Row> rows_;  // pivot -> normalized row
};

/// sparse coordinate vector over an algebra basis, sorted by index
using SV = std::vector<std::pair<uint32_t, FF>>;

void sv_add_scaled(const Field& F, SV& dst, const SV& src, const FF& s);
SV sv_scale(const Field& F, const SV& v, const FF& s);
bool sv_equal(const SV& a, const SV& b);
json sv_to_json(const Field& F, const SV& v);

struct LieSuperAlgebra {
    Field F;
    Ctx ctx;             // meaningful for derivation-realized algebras
    std::string type;    // "W" | "S" | "H" | "pgl" | "custom"
    uint32_t m = 0, n = 0;

    std::vector<std::string> labels;
    std::vector<Elem> der;     // derivation realization (may be empty)
    std::vector<la::Mat> mats; // matrix realization (pgl; may be empty)
    std::vector<int> parity;
    std::vector<int> zdeg;

    // structure constants, stored for i <= j only; (j,i) follows from
    // super anticommutativity
    std::unordered_map<uint64_t, SV> sc;
    std::vector<std::optional<SV>> pmap;
    std::vector<uint32_t> torus;
    // weight of each basis vector under the marked torus (residues mod p)
    std::vector<std::vector<uint32_t>> weights;

    bool scope_flag = true;  // false when outside the p > 3 theorem hypotheses
    std::string scope_note;

    size_t dim() const { return labels.size(); }
    bool has_der() const { return !der.empty(); }

    SV sc_bracket(uint32_t i, uint32_t j) const;
    SV bracket_sv(const SV& u, const SV& v) const;
    SV pmap_sv(uint32_t i) const;
    Elem realize(const SV& v) const;  // needs der

    /// p-th power of an even coordinate vector, computed from the basis p-map
    /// table and structure constants via Jacobson's expansion of (x+y)^[p].
    SV pth_power_sv(const SV& v) const;

    /// membership solver against the derivation basis (built lazily)
    std::optional<SV> solve_in_basis(const Elem& v) const;

    json to_json() const;

  private:
    mutable std::optional<Ech> basis_ech_;
};

/// Subspace of a LieSuperAlgebra in basis coordinates, rows echelonized.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(const LieSuperAlgebra* A) : A_(A) {}

    bool add(SV v);
    bool member(const SV& v) const;
    SV reduce(SV v) const;
    size_t dim() const { return rows_.size(); }
    const std::map<uint32_t, SV>& rows() const { return rows_; }
    std::vector<SV> row_list() const;
    bool contains(const Subspace& other) const;
    bool same_space(const Subspace& other) const;
    const LieSuperAlgebra* algebra() const { return A_; }

  private:
    const LieSuperAlgebra* A_ = nullptr;
    std::map<uint32_t, SV> rows_;  // pivot index -> normalized row
};

Subspace span_of(const LieSuperAlgebra& A, const std::vector<SV>& vecs);
Subspace span_all(const LieSuperAlgebra& A);

/// Assemble an algebra from independent homogeneous derivation rows.
/// Structure constants come from raw brackets solved against the rows;
/// torus entries are positions into rows; weights are filled when a torus
/// is given (every row must be a simultaneous eigenvector).
LieSuperAlgebra build_from_derivations(const Ctx& c, const std::string& type, uint32_t m,
                                       uint32_t n, std::vector<Elem> rows,
                                       std::vector<uint32_t> torus_positions,
                                       bool build_sc = true);

/// smallest bracket-closed subspace containing the generators
LieSuperAlgebra close_under_bracket(const Ctx& c, const std::vector<Elem>& generators);

/// recompute the weight table from raw derivation brackets with the torus
void fill_weights(LieSuperAlgebra& A);
/// same through structure constants (matrix or abstract realizations)
void fill_weights_from_sc(LieSuperAlgebra& A);

/// x^[p] := p-fold derivation composition for every even basis element;
/// throws "not p-closed" naming the offending element if some power leaves
/// the span.
void attach_pmap(LieSuperAlgebra& A);

struct CheckMode {
    bool exhaustive = true;
    uint64_t samples = 0;
    uint64_t seed = 0;
    static CheckMode all() { return {true, 0, 0}; }
    static CheckMode sampled(uint64_t n, uint64_t seed) { return {false, n, seed}; }
};

Report check_super_jacobi(const LieSuperAlgebra& A, const CheckMode& mode);
Report check_anticommutativity(const LieSuperAlgebra& A, const CheckMode& mode);
Report check_grading(const LieSuperAlgebra& A);
/// structure constants reproduce raw derivation brackets
Report check_sc_reproduces(const LieSuperAlgebra& A, const CheckMode& mode);
/// ad(x^[p]) = (ad x)^p on the whole algebra, for even basis x
Report check_restricted(const LieSuperAlgebra& A, const CheckMode& mode);
/// all of the above, one report
Report check_structure(const LieSuperAlgebra& A, const CheckMode& mode);

/// (a) [L,R] subset R; (b) R parity-graded; (c) even rows of R p-nilpotent;
/// (d) R Lie-nilpotent (lower central series hits 0)
Report ideal_and_nilpotency(const LieSuperAlgebra& A, const Subspace& R);

LieSuperAlgebra algebra_from_json(const json& j);

}  // namespace wsh::core

#endif

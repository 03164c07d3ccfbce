/* Desk-scale exact module theory over u(g).
 *
 * u(g) = U(g)/(x^p - x^[p]) has a PBW basis of ordered monomials with even
 * exponents below p and odd exponents below 2.  The straightener rewrites
 * words into that basis with  xy = (-1)^(|x||y|) yx + [x,y],  x^p = x^[p]
 * for even x and  z^2 = [z,z]/2  for odd z; left- and right-folding give
 * two independent strategies for the confluence property test.
 *
 * induce() builds u(g) (x)_{u(b)} k_lambda with explicit action matrices
 * over GF(q) on the PBW monomials in a complement of b, verifying the
 * bracket relations and restrictedness before returning.  The meataxe
 * chops such modules into composition factors identified by
 * (dimension, torus character, parity signature), with a fixed-seed word
 * generator so runs are reproducible. */

#ifndef WSH_MODREP_HPP
#define WSH_MODREP_HPP

#include "wsh/grochar.hpp"

namespace wsh::rep {

using core::LieSuperAlgebra;
using core::SV;
using ff::FF;
using gro::Character;
using la::Mat;
using wt::Weight;
using json = nlohmann::ordered_json;

/// exponent vector over the algebra basis, positions in straightening order
using PBWMono = std::vector<uint8_t>;
/// sparse combination of PBW monomials
using Combo = std::map<PBWMono, FF>;

/// Rewriting engine for one algebra and one basis order.
class Straightener {
  public:
    /// order = basis indices in straightening position order
    Straightener(const LieSuperAlgebra& A, std::vector<uint32_t> order);

    /// b_gen * mono, straightened (left multiplication)
    Combo mul_left(uint32_t gen, const PBWMono& mono);
    /// mono * b_gen, straightened (right multiplication)
    Combo mul_right(const PBWMono& mono, uint32_t gen);

    /// fold a word of basis indices into normal form; strategy "left" folds
    /// from the right end with left multiplications, "right" the reverse
    Combo straighten_word(const std::vector<uint32_t>& word, const std::string& strategy);

    const std::vector<uint32_t>& order() const { return order_; }
    uint32_t position_of(uint32_t basis_index) const { return pos_[basis_index]; }

  private:
    const LieSuperAlgebra* A_;
    std::vector<uint32_t> order_, pos_;
    std::map<std::pair<uint32_t, PBWMono>, Combo> memo_left_, memo_right_;
    void add_scaled(Combo& dst, const Combo& src, const FF& s) const;
};

struct ModuleRep {
    const LieSuperAlgebra* A = nullptr;
    uint32_t dim = 0;
    Weight lambda;
    std::vector<Mat> rho;                 // action matrix per algebra basis element
    std::vector<PBWMono> basis;           // exponents over the complement
    std::vector<uint32_t> complement;     // complement basis indices, module order
    std::vector<int> par;                 // parity of each module basis vector

    /// rho([x,y]) = [rho x, rho y]_super on all pairs and rho(x^[p]) = rho(x)^p
    Report verify() const;
    Character character() const;
};

/// induced module u(g) (x)_{u(b)} k_lambda; b is a set of basis indices
/// containing the torus, closed under bracket and p-map; lambda assigns the
/// torus eigenvalues in torus order
ModuleRep induce(const LieSuperAlgebra& A, const std::vector<uint32_t>& b_indices,
                 const Weight& lambda, uint32_t cap = 5000);

struct Factor {
    uint32_t dim = 0;
    std::vector<uint32_t> character;  // multiplicities over Lambda
    uint32_t mult = 1;
    /// identity forgets the Z_2-grading; the observed parity signatures
    /// (even, odd) and their counts are recorded for the report
    std::optional<std::pair<uint32_t, uint32_t>> parity_sig;  // of this occurrence
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> parity_counts;
    std::string key() const;  // dim + character
    json to_json() const;
};

struct CompFactorList {
    std::vector<Factor> factors;
    bool ambiguous = false;  // some multi-dimensional factors share a key
    json to_json() const;
};

/// nested invariant subspaces 0 = W_0 < W_1 < ... < W_k = V, rows in module
/// coordinates
std::vector<Mat> composition_series(const ModuleRep& V, uint64_t seed);

CompFactorList composition_factors(const ModuleRep& V, uint64_t seed);

struct HeadResult {
    uint32_t head_dim = 0, radical_dim = 0;
    bool head_simple = false;
    Factor head;
};

/// head = V / rad(V) with rad(V) computed from the action-algebra radical
/// (the elements acting by zero on every composition factor)
HeadResult head(const ModuleRep& V, uint64_t seed);

/// twisted module: rho^sigma(x) = rho(sigma(x))
ModuleRep twist_module(const ModuleRep& V, const cartan::LinMap& sigma);

/// V^alpha(lambda) is isomorphic to the module induced from the opposite
/// borel at weight -alpha~(lambda), by  x (x) 1 -> alpha^{-1}(x) (x) 1;
/// builds both sides and verifies that map is a module isomorphism
Report verify_lemma41(const cartan::Spec& spec, const cartan::PaperSubalgebra& sub,
                      const cartan::AlphaBuild& alpha, const Weight& lambda,
                      uint32_t cap = 5000);

/// union-find linkage over Lambda: lambda ~ mu when their factor lists share
/// an identity key
json linkage_blocks(const std::vector<std::pair<Weight, CompFactorList>>& reps);

}  // namespace wsh::rep

#endif

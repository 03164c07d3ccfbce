/* Torus weights and triangular decompositions.
 *
 * Weights are recorded as residue vectors against the marked torus basis in
 * its given order, so the displayed eigenvalue tables become literal test
 * vectors.  The restricted weight set Lambda of a toral torus is identified
 * with I^r, I = {0..p-1}, enumerated with the last coordinate fastest.
 *
 * A triangular decomposition splits the algebra into
 * g1m + nm + h + np + g1p; the negative side comes from explicit element
 * lists (the displayed ones for S and H, a degree/lex sign convention for W)
 * and the positive side is completed bucket by bucket inside each
 * (weight, parity, degree) slice, so the splitting is torus stable and
 * deterministic. */

#ifndef WSH_WEIGHTS_HPP
#define WSH_WEIGHTS_HPP

#include "wsh/cartan.hpp"

namespace wsh::wt {

using cartan::Spec;
using core::LieSuperAlgebra;
using core::Subspace;
using core::SV;
using ff::FF;
using json = nlohmann::ordered_json;

/// residues against the marked torus basis
using Weight = std::vector<uint32_t>;

/// simultaneous eigenvalue vector of v, or nullopt if not a weight vector
std::optional<Weight> weight_of(const LieSuperAlgebra& L, const SV& v);

/// all of Lambda = I^r in lexicographic order, last coordinate fastest;
/// requires the torus to be toral (h^[p] = h), which it verifies
std::vector<Weight> lambda_enumerate(const LieSuperAlgebra& L);
std::vector<Weight> lambda_enumerate(uint32_t r, uint32_t p);

struct TriDecomp {
    Subspace g1m, nm, h, np, g1p;
    bool is_long = false;
    /// basis indices of weight zero outside the torus, flagged to np
    std::vector<uint32_t> zero_weight_flagged;
    json to_json(const LieSuperAlgebra& L) const;
};

TriDecomp triangular_decompose(const Spec& spec, const LieSuperAlgebra& g);

/// weights of a list of vectors plus an F_p-independence verdict
struct CertificateResult {
    std::vector<std::string> labels;
    std::vector<Weight> weights;
    std::vector<SV> vectors;
    bool independent = false;
    uint32_t rank = 0;
    std::vector<std::string> notes;  // corrections against the displayed tables
    json to_json() const;
};

/// the displayed negative-side certificate (inside nm) and positive-side
/// certificate (inside the distinguished subalgebra's n1p); each vector is
/// verified to be a weight vector and to lie where claimed
struct WeightCertificates {
    CertificateResult negative;
    CertificateResult positive;
};

WeightCertificates weight_certificate(const Spec& spec, const LieSuperAlgebra& g,
                                      const cartan::PaperSubalgebra& sub,
                                      const TriDecomp& dec);

/// F_p-rank of a list of weights
uint32_t weight_rank(const ff::Field& F, const std::vector<Weight>& ws);

}  // namespace wsh::wt

#endif

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "wturb/core.hpp"
#include "wturb/expwave.hpp"
#include "wturb/model.hpp"
#include "wturb/ntree.hpp"
#include "wturb/vec.hpp"

namespace wturb {

struct LatticeBudget {
    double lattice_cap = 1e8;        // cap on |support|^leaves
    std::size_t monomial_cap = 2000000;
};

// |support|^{(N-1)n+1}, the lattice-sum budget for Picard order n.
double lattice_budget(const GenericModel& model, const SpectralEnsemble& ens, int order);

// Closed-form coefficient of one labelled tree term: the leaf-indexed
// iterated Duhamel integral, carried exactly as an ExpPolyWave. Returns the
// zero wave when any leaf falls outside the ensemble support.
ExpPolyWave tree_coefficient(const GenericModel& model, const SpectralEnsemble& ens,
                             const NTree& tree, const std::vector<KVec>& leaves,
                             ResonanceStats* stats = nullptr);

struct CoefficientBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;  // C = C_psi * N
    bool holds = false;
};

// Growth bound |G(t)| <= C^n t^n max_l <k_l/L>^{rn} prod |a_{k_j}|.
CoefficientBoundReport check_coefficient_bound(const GenericModel& model,
                                               const SpectralEnsemble& ens, const NTree& tree,
                                               const std::vector<KVec>& leaves, double t);

// Formal polynomial in the Gaussian coefficients g_k: one component of the
// order-n Fourier mode at fixed time. Monomials are sorted leaf multisets.
using Monomial = std::vector<KVec>;

struct ModePolynomial {
    std::map<Monomial, Cplx> terms;
    int degree = 0;  // homogeneous degree (N-1)n + 1

    Cplx eval(const std::function<Cplx(const KVec&)>& g) const;
};

ModePolynomial picard_mode_polynomial(const GenericModel& model, const SpectralEnsemble& ens,
                                      int order, const KVec& mode, int component, double t,
                                      const LatticeBudget& budget = {});

// Numeric order-n mode for a concrete coefficient valuation.
CVec picard_mode_value(const GenericModel& model, const SpectralEnsemble& ens, int order,
                       const KVec& mode, double t,
                       const std::function<Cplx(const KVec&)>& g,
                       const LatticeBudget& budget = {});

// Quasi-solution spectrum: sum of orders n <= M evaluated on a draw, as a
// map mode -> value over every reachable mode.
std::map<KVec, CVec> sample_realization(const GenericModel& model, const SpectralEnsemble& ens,
                                        int max_order, double t, const GaussianDraw& draw,
                                        const LatticeBudget& budget = {});

}  // namespace wturb

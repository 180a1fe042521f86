#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wturb/core.hpp"
#include "wturb/model.hpp"
#include "wturb/quasisolution.hpp"
#include "wturb/vec.hpp"

namespace wturb {

// Joint moment of quasi-solution Fourier modes: R factors, per-factor Picard
// order, component index (0-based) and lattice frequency multiple L*xi.
struct MomentQuery {
    std::vector<int> orders;
    std::vector<int> components;
    std::vector<KVec> xi_lattice;  // nonzero integer vectors, xi_l = entry / L
    double time = 0.0;

    int factors() const { return static_cast<int>(orders.size()); }
    int total_order() const;
    int index_set_size(int arity) const;  // |S| = sum n_l (N-1) + R
    void validate(const GenericModel& model) const;
};

struct MomentBudget {
    int pairing_cap = 16;
    LatticeBudget lattice;
    double structural_cap = 5e7;  // pairings x support^free budget
};

struct McEstimate {
    Cplx mean = 0.0;
    double se_re = 0.0;
    double se_im = 0.0;
    long samples = 0;

    // |mean - reference| componentwise within z standard errors (an SE floor
    // guards exact-zero estimators).
    bool within(const Cplx& reference, double z) const;
};

// Pairing-structured evaluation of E(prod_l u_hat_{n_l}(xi_l)): sums over
// trees, fixed-point-free pairings and the lattice solution sets,
// parametrized by the free variables of the constraint elimination.
Cplx structural_moment(const MomentQuery& q, const GenericModel& model,
                       const SpectralEnsemble& ens, const MomentBudget& budget = {});

// Independent verification path: expands each factor into an explicit
// polynomial in the Gaussian coefficients, multiplies, and contracts
// term-by-term with a local Isserlis recursion. Shares no pairing or orbit
// code with structural_moment.
Cplx oracle_moment(const MomentQuery& q, const GenericModel& model,
                   const SpectralEnsemble& ens, const MomentBudget& budget = {});

// Monte Carlo over independent Gaussian draws. With antithetic variance
// control (g -> -g), odd-degree products cancel exactly.
McEstimate mc_moment(const MomentQuery& q, const GenericModel& model,
                     const SpectralEnsemble& ens, long samples, std::uint64_t seed,
                     int workers = 1, bool antithetic = true,
                     const MomentBudget& budget = {});

// Sum over pair partitions of products of structural second moments;
// exactly 0 for an odd number of factors.
Cplx wick_prediction(const MomentQuery& q, const GenericModel& model,
                     const SpectralEnsemble& ens, const MomentBudget& budget = {});

struct MomentReport {
    Cplx structural = 0.0;
    Cplx wick = 0.0;
    double residual = 0.0;
    double bound = 0.0;  // pairing-count x ||a||^|S| x (Cbar t A_L^r)^{sum n} x (2 pi L)^{-d/2}
    int index_set_size = 0;
    bool odd = false;
    double c_psi = 0.0;
    double c_bar = 0.0;
    bool bound_holds = false;
};

// Residual |structural - wick| against the proven envelope; throws
// AcceptanceError if the bound fails.
MomentReport wick_residual(const MomentQuery& q, const GenericModel& model,
                           const SpectralEnsemble& ens, const MomentBudget& budget = {});

// Cross-correlation decay over a scale ladder: |E(u_hat(xi) u_hat(eta))| per
// L for xi + eta != 0. The factory builds the (model, ensemble) pair at a
// given scale; frequencies are supplied as lattice multiples per scale.
struct MixedModeRow {
    double L = 0.0;
    Cplx structural = 0.0;
    std::optional<McEstimate> mc;
};

using ModelFactory =
    std::function<std::pair<GenericModel, SpectralEnsemble>(double L)>;

std::vector<MixedModeRow> mixed_mode_decay(const ModelFactory& factory,
                                           const std::vector<double>& scales,
                                           const std::function<MomentQuery(double)>& query_at,
                                           long mc_samples = 0, std::uint64_t seed = 1,
                                           const MomentBudget& budget = {});

}  // namespace wturb

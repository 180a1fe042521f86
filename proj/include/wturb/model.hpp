#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wturb/core.hpp"
#include "wturb/rng.hpp"
#include "wturb/vec.hpp"

namespace wturb {

using OmegaFn = std::function<double(const RVec&)>;
// N-linear map Psi(xi_1..xi_N)(X_1..X_N) in C^D.
using PsiFn = std::function<CVec(const std::vector<RVec>&, const std::vector<CVec>&)>;

// The generic dispersive model in Fourier variables: linear phase omega,
// N-linear nonlinearity Psi with growth exponent r, on the torus of scale L.
struct GenericModel {
    std::string id;
    int space_dim = 1;   // d
    int comp_dim = 1;    // D
    int arity = 2;       // N
    double L = 1.0;
    OmegaFn omega;
    PsiFn psi;
    double growth_r = 0.0;  // r in [0,1]
    double psi_norm = 1.0;  // calibrated C_psi (operator-norm probe)
};

// Randomized operator-norm probe: max |Psi(xi)(X)| / max_j <xi_j>^r over
// random frequency tuples and unit inputs. Calibrates C_psi.
double calibrate_psi_norm(const GenericModel& model, std::uint64_t seed, int trials = 200,
                          double freq_range = 2.0);

// Randomized check that Psi is linear in each slot; returns the largest
// violation found (should be at rounding level).
double probe_psi_linearity(const GenericModel& model, std::uint64_t seed, int trials = 50,
                           double freq_range = 2.0);

// Deterministic amplitudes a_{L,k} with Hermitian symmetry a_{-k} = a_k,
// finite support excluding 0.
class SpectralEnsemble {
  public:
    using ProfileFn = std::function<DVec(const RVec&)>;

    // Lattice restriction of a compactly supported profile: a_{L,k} = a(k/L)
    // for |k_i| <= ceil(L * radius).
    static SpectralEnsemble from_profile(int space_dim, int comp_dim, double L,
                                         const ProfileFn& profile, double radius);
    static SpectralEnsemble from_amplitudes(int space_dim, int comp_dim, double L,
                                            std::vector<std::pair<KVec, DVec>> amps);

    const std::vector<KVec>& support() const { return support_; }
    bool in_support(const KVec& k) const { return amp_.count(k) > 0; }
    DVec amplitude(const KVec& k) const;

    double L() const { return L_; }
    int space_dim() const { return d_; }
    int comp_dim() const { return D_; }

    // sup <k/L> over the support
    double a_sup_bracket() const { return a_sup_; }
    double linf_norm() const { return linf_; }
    // (2 pi L)^{-d/2} sqrt(sum |a_k|^2)
    double l2_norm() const { return l2_; }
    double l2_linf_norm() const { return l2_ + linf_; }

  private:
    void finalize();

    std::vector<KVec> support_;  // ascending
    std::unordered_map<KVec, DVec, KVecHash> amp_;
    double L_ = 1.0;
    int d_ = 1;
    int D_ = 1;
    double a_sup_ = 0.0, linf_ = 0.0, l2_ = 0.0;
};

// One realization of the Gaussian coefficients: values stored on the
// positive half-space, completed by g_{-k} = conj(g_k). This realizes
// E(g_k g_l) = delta_{l,-k} exactly.
struct GaussianDraw {
    std::uint64_t seed = 0;
    std::unordered_map<KVec, Cplx, KVecHash> half;

    static GaussianDraw sample(const SpectralEnsemble& ens, std::uint64_t seed);
    // Stream variant for Monte Carlo: independent draw per (seed, index).
    static GaussianDraw sample_stream(const SpectralEnsemble& ens, std::uint64_t seed,
                                      std::uint64_t index);

    Cplx g(const KVec& k) const;
    std::function<Cplx(const KVec&)> valuation() const {
        return [this](const KVec& k) { return g(k); };
    }
    GaussianDraw negated() const;
};

// --- model catalog -------------------------------------------------------

// d=1, D=1, N=2, Psi == 1, omega(xi) = xi^2 (or 0), r = 0.
GenericModel make_toy_model(double L, bool dispersive = true);
// Unit profile on 0 < |xi| <= 1/2; support {+-1, +-2} at L = 4.
SpectralEnsemble make_toy_ensemble(double L);

}  // namespace wturb

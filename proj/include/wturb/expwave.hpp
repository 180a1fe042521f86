#pragma once

#include <vector>

#include "wturb/core.hpp"
#include "wturb/vec.hpp"

namespace wturb {

// One term c * t^p * exp(i lambda t) with a vector coefficient.
struct WaveTerm {
    CVec coeff;
    int power = 0;
    double freq = 0.0;
};

struct ResonanceStats {
    long merged = 0;          // |lambda - mu| <= tol: resonant branch taken
    long near_resonant = 0;   // tol < |lambda - mu| <= 10 tol: conditioning warning
};

// Finite sum sum_j c_j t^{p_j} exp(i lambda_j t). Closed under the Duhamel
// kernel below, which is what makes the Picard coefficients exactly
// representable. Terms with colliding (power, freq) are merged on insert;
// freq collision uses the resonance tolerance.
class ExpPolyWave {
  public:
    ExpPolyWave() = default;
    explicit ExpPolyWave(int D) : dim_(D) {}

    static ExpPolyWave zero(int D) { return ExpPolyWave(D); }
    static ExpPolyWave pure(CVec c, int power, double freq) {
        ExpPolyWave w(c.dim);
        w.add_term(c, power, freq);
        return w;
    }

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    const std::vector<WaveTerm>& terms() const { return terms_; }

    void add_term(const CVec& c, int power, double freq);
    void add(const ExpPolyWave& other);
    void scale(Cplx s);

    CVec eval(double t) const;
    // Largest coefficient magnitude; cheap size proxy.
    double coeff_norm() const;

  private:
    std::vector<WaveTerm> terms_;  // kept sorted by (power, freq)
    int dim_ = 1;
};

// Frequencies closer than this are treated as resonant.
inline double resonance_tolerance(double mu) {
    double a = mu < 0 ? -mu : mu;
    return 1e-9 * (a > 1.0 ? a : 1.0);
}

// Closed form of I(t) = int_0^t exp(i (t - tau) mu) w(tau) dtau. The resonant
// branch raises the power; otherwise the integration-by-parts recurrence
// divides by (lambda - mu), with a conditioning warning in the band
// (tol, 10 tol].
ExpPolyWave integrate_duhamel(const ExpPolyWave& w, double mu, ResonanceStats* stats = nullptr);

}  // namespace wturb

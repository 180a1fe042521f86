#include "wturb/expwave.hpp"

#include <algorithm>
#include <cmath>

namespace wturb {

void ExpPolyWave::add_term(const CVec& c, int power, double freq) {
    if (c.is_zero()) return;
    double tol = resonance_tolerance(freq);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(power, freq - tol),
                               [](const WaveTerm& t, const std::pair<int, double>& key) {
                                   if (t.power != key.first) return t.power < key.first;
                                   return t.freq < key.second;
                               });
    // merge into an existing (power, ~freq) slot if one is within tolerance
    for (auto jt = it; jt != terms_.end() && jt->power == power; ++jt) {
        if (std::abs(jt->freq - freq) <= tol) {
            jt->coeff += c;
            if (jt->coeff.is_zero()) terms_.erase(jt);
            return;
        }
        if (jt->freq > freq + tol) break;
    }
    terms_.insert(it, WaveTerm{c, power, freq});
}

void ExpPolyWave::add(const ExpPolyWave& other) {
    for (const auto& t : other.terms_) add_term(t.coeff, t.power, t.freq);
}

void ExpPolyWave::scale(Cplx s) {
    if (s == 0.0) {
        terms_.clear();
        return;
    }
    for (auto& t : terms_)
        for (int i = 0; i < t.coeff.dim; ++i) t.coeff[i] *= s;
}

CVec ExpPolyWave::eval(double t) const {
    CVec out(dim_);
    for (const auto& term : terms_) {
        Cplx w = std::polar(1.0, term.freq * t);
        double tp = 1.0;
        for (int p = 0; p < term.power; ++p) tp *= t;
        Cplx s = w * tp;
        for (int i = 0; i < dim_; ++i) out[i] += term.coeff[i] * s;
    }
    return out;
}

double ExpPolyWave::coeff_norm() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.coeff.norm());
    return m;
}

ExpPolyWave integrate_duhamel(const ExpPolyWave& w, double mu, ResonanceStats* stats) {
    ExpPolyWave out(w.dim());
    const double tol = resonance_tolerance(mu);
    for (const auto& term : w.terms()) {
        const double nu = term.freq - mu;
        const double anu = std::abs(nu);
        if (anu <= tol) {
            if (stats) ++stats->merged;
            // int_0^t tau^p dtau = t^{p+1}/(p+1), carrier frequency mu
            out.add_term(term.coeff * Cplx(1.0 / (term.power + 1)), term.power + 1, mu);
            continue;
        }
        if (stats && anu <= 10.0 * tol) ++stats->near_resonant;
        // int_0^t tau^p e^{i nu tau} dtau
        //   = e^{i nu t} sum_{j=0}^{p} (-1)^j p!/(p-j)! t^{p-j} / (i nu)^{j+1}
        //     - (-1)^p p! / (i nu)^{p+1}
        const Cplx inv = 1.0 / Cplx(0.0, nu);
        Cplx factor = inv;      // (-1)^j p!/(p-j)! (i nu)^{-(j+1)} at j = 0
        for (int j = 0; j <= term.power; ++j) {
            out.add_term(term.coeff * factor, term.power - j, term.freq);
            if (j < term.power)
                factor *= -static_cast<double>(term.power - j) * inv;
        }
        // boundary term at tau = 0, carried at frequency mu
        out.add_term(term.coeff * (-factor), 0, mu);
    }
    return out;
}

}  // namespace wturb

#include "wturb/model.hpp"

#include <algorithm>
#include <cmath>

namespace wturb {

namespace {

RVec random_freq(Rng& rng, int d, double range) {
    RVec xi(d);
    for (int i = 0; i < d; ++i) xi[i] = (2.0 * rng.uniform() - 1.0) * range;
    return xi;
}

CVec random_unit(Rng& rng, int D) {
    CVec x(D);
    double n = 0;
    do {
        for (int i = 0; i < D; ++i) x[i] = Cplx(rng.normal(), rng.normal());
        n = x.norm();
    } while (n == 0.0);
    return x * Cplx(1.0 / n);
}

}  // namespace

double calibrate_psi_norm(const GenericModel& model, std::uint64_t seed, int trials,
                          double freq_range) {
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<RVec> freqs;
        std::vector<CVec> args;
        double denom = 0.0;
        RVec sum(model.space_dim);
        for (int j = 0; j < model.arity; ++j) {
            RVec xi = random_freq(rng, model.space_dim, freq_range);
            sum = sum + xi;
            denom = std::max(denom, std::pow(xi.bracket(), model.growth_r));
            freqs.push_back(xi);
            args.push_back(random_unit(rng, model.comp_dim));
        }
        if (sum.norm() < 1e-9) continue;  // Psi may be singular at zero total frequency
        worst = std::max(worst, model.psi(freqs, args).norm() / denom);
    }
    return worst;
}

double probe_psi_linearity(const GenericModel& model, std::uint64_t seed, int trials,
                           double freq_range) {
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<RVec> freqs;
        std::vector<CVec> args;
        RVec sum(model.space_dim);
        for (int j = 0; j < model.arity; ++j) {
            RVec xi = random_freq(rng, model.space_dim, freq_range);
            sum = sum + xi;
            freqs.push_back(xi);
            args.push_back(random_unit(rng, model.comp_dim));
        }
        if (sum.norm() < 1e-9) continue;
        int slot = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(model.arity));
        CVec extra = random_unit(rng, model.comp_dim);
        Cplx alpha(rng.normal(), rng.normal());

        CVec base = model.psi(freqs, args);
        auto args2 = args;
        args2[static_cast<std::size_t>(slot)] = extra;
        CVec other = model.psi(freqs, args2);
        auto args3 = args;
        args3[static_cast<std::size_t>(slot)] =
            args[static_cast<std::size_t>(slot)] + extra * alpha;
        CVec combined = model.psi(freqs, args3);

        CVec expected = base + other * alpha;
        double err = 0.0;
        for (int i = 0; i < model.comp_dim; ++i)
            err = std::max(err, std::abs(combined[i] - expected[i]));
        worst = std::max(worst, err);
    }
    return worst;
}

void SpectralEnsemble::finalize() {
    std::sort(support_.begin(), support_.end());
    a_sup_ = 0.0;
    linf_ = 0.0;
    double sq = 0.0;
    for (const auto& k : support_) {
        const auto& a = amp_.at(k);
        a_sup_ = std::max(a_sup_, to_frequency(k, L_).bracket());
        linf_ = std::max(linf_, a.norm());
        sq += a.norm() * a.norm();
        if (!amp_.count(-k))
            throw ValidationError("SpectralEnsemble: support must be symmetric under k -> -k");
        const auto& am = amp_.at(-k);
        for (int i = 0; i < D_; ++i)
            if (am[i] != a[i])
                throw ValidationError("SpectralEnsemble: requires a_{-k} = a_k at k=" + k.str());
    }
    l2_ = std::pow(kTwoPi * L_, -0.5 * d_) * std::sqrt(sq);
}

SpectralEnsemble SpectralEnsemble::from_profile(int space_dim, int comp_dim, double L,
                                                const ProfileFn& profile, double radius) {
    SpectralEnsemble e;
    e.L_ = L;
    e.d_ = space_dim;
    e.D_ = comp_dim;
    const int B = static_cast<int>(std::ceil(L * radius));
    KVec k(space_dim);
    std::function<void(int)> scan = [&](int axis) {
        if (axis == space_dim) {
            if (k.is_zero()) return;
            DVec a = profile(to_frequency(k, L));
            if (a.is_zero()) return;
            e.support_.push_back(k);
            e.amp_[k] = a;
            return;
        }
        for (int v = -B; v <= B; ++v) {
            k[axis] = v;
            scan(axis + 1);
        }
    };
    scan(0);
    e.finalize();
    return e;
}

SpectralEnsemble SpectralEnsemble::from_amplitudes(int space_dim, int comp_dim, double L,
                                                   std::vector<std::pair<KVec, DVec>> amps) {
    SpectralEnsemble e;
    e.L_ = L;
    e.d_ = space_dim;
    e.D_ = comp_dim;
    for (auto& [k, a] : amps) {
        if (k.is_zero()) throw ValidationError("SpectralEnsemble: 0 not allowed in support");
        if (a.is_zero()) continue;
        e.support_.push_back(k);
        e.amp_[k] = a;
    }
    e.finalize();
    return e;
}

DVec SpectralEnsemble::amplitude(const KVec& k) const {
    auto it = amp_.find(k);
    if (it != amp_.end()) return it->second;
    return DVec(D_);
}

GaussianDraw GaussianDraw::sample(const SpectralEnsemble& ens, std::uint64_t seed) {
    GaussianDraw d;
    d.seed = seed;
    Rng rng(seed);
    const double inv_sqrt2 = 0.70710678118654752440;
    for (const auto& k : ens.support()) {
        if (!k.positive_half()) continue;
        double x = rng.normal();
        double y = rng.normal();
        d.half[k] = Cplx(x * inv_sqrt2, y * inv_sqrt2);
    }
    return d;
}

GaussianDraw GaussianDraw::sample_stream(const SpectralEnsemble& ens, std::uint64_t seed,
                                         std::uint64_t index) {
    GaussianDraw d;
    d.seed = seed;
    Rng rng = Rng::derive(seed, index);
    const double inv_sqrt2 = 0.70710678118654752440;
    for (const auto& k : ens.support()) {
        if (!k.positive_half()) continue;
        double x = rng.normal();
        double y = rng.normal();
        d.half[k] = Cplx(x * inv_sqrt2, y * inv_sqrt2);
    }
    return d;
}

Cplx GaussianDraw::g(const KVec& k) const {
    if (k.positive_half()) {
        auto it = half.find(k);
        return it == half.end() ? Cplx(0.0) : it->second;
    }
    auto it = half.find(-k);
    return it == half.end() ? Cplx(0.0) : std::conj(it->second);
}

GaussianDraw GaussianDraw::negated() const {
    GaussianDraw d;
    d.seed = seed;
    d.half = half;
    for (auto& [k, v] : d.half) v = -v;
    return d;
}

GenericModel make_toy_model(double L, bool dispersive) {
    GenericModel m;
    m.id = dispersive ? "toy-1d" : "toy-1d-static";
    m.space_dim = 1;
    m.comp_dim = 1;
    m.arity = 2;
    m.L = L;
    if (dispersive)
        m.omega = [](const RVec& xi) { return xi[0] * xi[0]; };
    else
        m.omega = [](const RVec&) { return 0.0; };
    m.psi = [](const std::vector<RVec>&, const std::vector<CVec>& X) {
        return CVec(1, X[0][0] * X[1][0]);
    };
    m.growth_r = 0.0;
    m.psi_norm = 1.0;
    return m;
}

SpectralEnsemble make_toy_ensemble(double L) {
    auto profile = [](const RVec& xi) {
        double a = std::abs(xi[0]);
        return (a > 0.0 && a <= 0.5) ? DVec(1, 1.0) : DVec(1);
    };
    return SpectralEnsemble::from_profile(1, 1, L, profile, 0.5);
}

}  // namespace wturb

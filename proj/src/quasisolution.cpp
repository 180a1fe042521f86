#include "wturb/quasisolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wturb {

namespace {

RVec tuple_frequency(const std::vector<KVec>& leaves, std::size_t begin, std::size_t end,
                     double L) {
    KVec s(leaves[begin].dim);
    for (std::size_t i = begin; i < end; ++i) s += leaves[i];
    return to_frequency(s, L);
}

ExpPolyWave tree_coefficient_span(const GenericModel& model, const SpectralEnsemble& ens,
                                  const NTree& tree, const std::vector<KVec>& leaves,
                                  std::size_t begin, std::size_t end, ResonanceStats* stats) {
    if (tree.is_leaf()) {
        const KVec& k = leaves[begin];
        DVec a = ens.amplitude(k);
        if (a.is_zero()) return ExpPolyWave::zero(model.comp_dim);
        return ExpPolyWave::pure(a.as_complex(), 0, model.omega(to_frequency(k, model.L)));
    }

    const int N = tree.arity;
    auto ranges = leaf_ranges(tree);
    std::vector<ExpPolyWave> child(static_cast<std::size_t>(N), ExpPolyWave(model.comp_dim));
    std::vector<RVec> child_freq(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        std::size_t cb = begin + static_cast<std::size_t>(ranges.offsets[static_cast<std::size_t>(j)]);
        std::size_t ce = begin + static_cast<std::size_t>(ranges.offsets[static_cast<std::size_t>(j + 1)]);
        child[static_cast<std::size_t>(j)] =
            tree_coefficient_span(model, ens, tree.children[static_cast<std::size_t>(j)], leaves,
                                  cb, ce, stats);
        if (child[static_cast<std::size_t>(j)].empty()) return ExpPolyWave::zero(model.comp_dim);
        child_freq[static_cast<std::size_t>(j)] = tuple_frequency(leaves, cb, ce, model.L);
    }

    // integrand: Psi applied to one term from each child, N-linearly
    ExpPolyWave integrand(model.comp_dim);
    std::vector<std::size_t> idx(static_cast<std::size_t>(N), 0);
    std::vector<CVec> coeffs(static_cast<std::size_t>(N));
    while (true) {
        int power = 0;
        double freq = 0.0;
        for (int j = 0; j < N; ++j) {
            const auto& term = child[static_cast<std::size_t>(j)].terms()[idx[static_cast<std::size_t>(j)]];
            coeffs[static_cast<std::size_t>(j)] = term.coeff;
            power += term.power;
            freq += term.freq;
        }
        integrand.add_term(model.psi(child_freq, coeffs), power, freq);
        int j = N - 1;
        while (j >= 0) {
            auto& i = idx[static_cast<std::size_t>(j)];
            if (++i < child[static_cast<std::size_t>(j)].terms().size()) break;
            i = 0;
            --j;
        }
        if (j < 0) break;
    }

    double mu = model.omega(tuple_frequency(leaves, begin, end, model.L));
    return integrate_duhamel(integrand, mu, stats);
}

int leaves_for_order(const GenericModel& model, int order) {
    return (model.arity - 1) * order + 1;
}

void check_lattice_budget(const GenericModel& model, const SpectralEnsemble& ens, int order,
                          const LatticeBudget& budget) {
    double b = lattice_budget(model, ens, order);
    if (b > budget.lattice_cap)
        throw BudgetError("lattice sum budget " + std::to_string(b) + " exceeds cap " +
                          std::to_string(budget.lattice_cap));
}

// Enumerates leaf tuples over the support with a prescribed total, by fixing
// all but the last leaf and solving for it.
template <typename Fn>
void for_each_tuple_with_sum(const SpectralEnsemble& ens, int leaves, const KVec& total, Fn&& fn) {
    const auto& supp = ens.support();
    std::vector<KVec> tuple(static_cast<std::size_t>(leaves), KVec(total.dim));
    std::function<void(int, KVec)> rec = [&](int pos, KVec partial) {
        if (pos == leaves - 1) {
            KVec last = total - partial;
            if (!ens.in_support(last)) return;
            tuple[static_cast<std::size_t>(pos)] = last;
            fn(tuple);
            return;
        }
        for (const auto& k : supp) {
            tuple[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1, partial + k);
        }
    };
    rec(0, KVec(total.dim));
}

template <typename Fn>
void for_each_tuple(const SpectralEnsemble& ens, int leaves, int dim, Fn&& fn) {
    const auto& supp = ens.support();
    std::vector<KVec> tuple(static_cast<std::size_t>(leaves), KVec(dim));
    std::function<void(int)> rec = [&](int pos) {
        if (pos == leaves) {
            fn(tuple);
            return;
        }
        for (const auto& k : supp) {
            tuple[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1);
        }
    };
    rec(0);
}

}  // namespace

double lattice_budget(const GenericModel& model, const SpectralEnsemble& ens, int order) {
    return std::pow(static_cast<double>(ens.support().size()),
                    static_cast<double>(leaves_for_order(model, order)));
}

ExpPolyWave tree_coefficient(const GenericModel& model, const SpectralEnsemble& ens,
                             const NTree& tree, const std::vector<KVec>& leaves,
                             ResonanceStats* stats) {
    if (static_cast<int>(leaves.size()) != tree.leaves())
        throw ValidationError("tree_coefficient: leaf count mismatch: tree wants " +
                              std::to_string(tree.leaves()) + ", got " +
                              std::to_string(leaves.size()));
    for (const auto& k : leaves)
        if (k.is_zero()) return ExpPolyWave::zero(model.comp_dim);
    return tree_coefficient_span(model, ens, tree, leaves, 0, leaves.size(), stats);
}

CoefficientBoundReport check_coefficient_bound(const GenericModel& model,
                                               const SpectralEnsemble& ens, const NTree& tree,
                                               const std::vector<KVec>& leaves, double t) {
    CoefficientBoundReport rep;
    rep.constant = model.psi_norm * model.arity;
    ExpPolyWave w = tree_coefficient(model, ens, tree, leaves);
    rep.lhs = w.eval(t).norm();
    const int n = tree.nodes();
    double max_bracket = 0.0;
    double amp_prod = 1.0;
    for (const auto& k : leaves) {
        max_bracket = std::max(max_bracket, to_frequency(k, model.L).bracket());
        amp_prod *= ens.amplitude(k).norm();
    }
    rep.rhs = std::pow(rep.constant * t, n) *
              std::pow(max_bracket, model.growth_r * static_cast<double>(n)) * amp_prod;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-300;
    return rep;
}

Cplx ModePolynomial::eval(const std::function<Cplx(const KVec&)>& g) const {
    Cplx total = 0.0;
    for (const auto& [mono, coeff] : terms) {
        Cplx p = coeff;
        for (const auto& k : mono) p *= g(k);
        total += p;
    }
    return total;
}

ModePolynomial picard_mode_polynomial(const GenericModel& model, const SpectralEnsemble& ens,
                                      int order, const KVec& mode, int component, double t,
                                      const LatticeBudget& budget) {
    if (mode.is_zero()) throw ValidationError("picard_mode_polynomial: mode must be nonzero");
    check_lattice_budget(model, ens, order, budget);

    ModePolynomial poly;
    poly.degree = leaves_for_order(model, order);
    const double pref = std::pow(kTwoPi * model.L,
                                 -0.5 * model.space_dim * (model.arity - 1) * order);
    auto trees = enumerate_trees(model.arity, order);
    for_each_tuple_with_sum(ens, poly.degree, mode, [&](const std::vector<KVec>& tuple) {
        CVec h(model.comp_dim);
        for (const auto& A : trees) h += tree_coefficient(model, ens, A, tuple).eval(t);
        Cplx c = pref * h[component];
        if (c == 0.0) return;
        Monomial mono = tuple;
        std::sort(mono.begin(), mono.end());
        poly.terms[mono] += c;
        if (poly.terms.size() > budget.monomial_cap)
            throw BudgetError("picard_mode_polynomial: monomial budget exceeded");
    });
    for (auto it = poly.terms.begin(); it != poly.terms.end();)
        it = (it->second == 0.0) ? poly.terms.erase(it) : std::next(it);
    return poly;
}

CVec picard_mode_value(const GenericModel& model, const SpectralEnsemble& ens, int order,
                       const KVec& mode, double t, const std::function<Cplx(const KVec&)>& g,
                       const LatticeBudget& budget) {
    if (mode.is_zero()) throw ValidationError("picard_mode_value: mode must be nonzero");
    check_lattice_budget(model, ens, order, budget);

    const int leaves = leaves_for_order(model, order);
    const double pref = std::pow(kTwoPi * model.L,
                                 -0.5 * model.space_dim * (model.arity - 1) * order);
    auto trees = enumerate_trees(model.arity, order);
    CVec total(model.comp_dim);
    for_each_tuple_with_sum(ens, leaves, mode, [&](const std::vector<KVec>& tuple) {
        Cplx gp = 1.0;
        for (const auto& k : tuple) gp *= g(k);
        if (gp == 0.0) return;
        CVec h(model.comp_dim);
        for (const auto& A : trees) h += tree_coefficient(model, ens, A, tuple).eval(t);
        total += h * gp;
    });
    return total * pref;
}

std::map<KVec, CVec> sample_realization(const GenericModel& model, const SpectralEnsemble& ens,
                                        int max_order, double t, const GaussianDraw& draw,
                                        const LatticeBudget& budget) {
    std::map<KVec, CVec> field;
    auto g = draw.valuation();
    for (int n = 0; n <= max_order; ++n) {
        check_lattice_budget(model, ens, n, budget);
        const int leaves = leaves_for_order(model, n);
        const double pref = std::pow(kTwoPi * model.L,
                                     -0.5 * model.space_dim * (model.arity - 1) * n);
        auto trees = enumerate_trees(model.arity, n);
        for_each_tuple(ens, leaves, model.space_dim, [&](const std::vector<KVec>& tuple) {
            KVec mode(model.space_dim);
            for (const auto& k : tuple) mode += k;
            if (mode.is_zero()) return;  // the nonlinearity carries no zero mode
            Cplx gp = 1.0;
            for (const auto& k : tuple) gp *= g(k);
            CVec h(model.comp_dim);
            for (const auto& A : trees) h += tree_coefficient(model, ens, A, tuple).eval(t);
            auto it = field.emplace(mode, CVec(model.comp_dim)).first;
            it->second += h * (gp * pref);
        });
    }
    return field;
}

}  // namespace wturb

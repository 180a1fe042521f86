#include "wturb/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "wturb/pairing.hpp"
#include "wturb/parallel.hpp"

namespace wturb {

int MomentQuery::total_order() const {
    int s = 0;
    for (int n : orders) s += n;
    return s;
}

int MomentQuery::index_set_size(int arity) const {
    return total_order() * (arity - 1) + factors();
}

void MomentQuery::validate(const GenericModel& model) const {
    if (orders.empty()) throw ValidationError("moment query: at least one factor required");
    if (components.size() != orders.size() || xi_lattice.size() != orders.size())
        throw ValidationError("moment query: orders/components/frequencies length mismatch");
    for (int n : orders)
        if (n < 0) throw ValidationError("moment query: negative order");
    for (int i : components)
        if (i < 0 || i >= model.comp_dim) throw ValidationError("moment query: component out of range");
    for (const auto& m : xi_lattice) {
        if (m.is_zero()) throw ValidationError("moment query: frequencies must be nonzero");
        if (m.dim != model.space_dim) throw ValidationError("moment query: frequency dimension mismatch");
    }
}

namespace {

struct TupleKey {
    int order;
    std::vector<KVec> leaves;
    bool operator==(const TupleKey& o) const { return order == o.order && leaves == o.leaves; }
};

struct TupleKeyHash {
    std::size_t operator()(const TupleKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.order) * 0x9e3779b97f4a7c15ull;
        KVecHash kh;
        for (const auto& v : k.leaves) h = h * 1099511628211ull + kh(v);
        return h;
    }
};

// Tree-summed coefficient value H_n(leaf tuple)(t), cached per query.
class TreeSumCache {
  public:
    TreeSumCache(const GenericModel& model, const SpectralEnsemble& ens, double t)
        : model_(model), ens_(ens), t_(t) {}

    const CVec& value(int order, const std::vector<KVec>& leaves) {
        TupleKey key{order, leaves};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        if (static_cast<std::size_t>(order) >= trees_.size())
            trees_.resize(static_cast<std::size_t>(order) + 1);
        auto& tl = trees_[static_cast<std::size_t>(order)];
        if (tl.empty()) tl = enumerate_trees(model_.arity, order);
        CVec h(model_.comp_dim);
        for (const auto& A : tl) h += tree_coefficient(model_, ens_, A, leaves).eval(t_);
        return cache_.emplace(std::move(key), h).first->second;
    }

  private:
    const GenericModel& model_;
    const SpectralEnsemble& ens_;
    double t_;
    std::vector<std::vector<NTree>> trees_;
    std::unordered_map<TupleKey, CVec, TupleKeyHash> cache_;
};

// Direct re-verification of the block frequency constraints on an emitted
// leaf assignment.
void verify_solution(const MomentQuery& q, const BlockIndexSet& S,
                     const std::vector<std::vector<KVec>>& block_leaves) {
    for (int l = 0; l < S.R; ++l) {
        KVec sum(q.xi_lattice[0].dim);
        for (const auto& k : block_leaves[static_cast<std::size_t>(l)]) sum += k;
        if (sum != q.xi_lattice[static_cast<std::size_t>(l)])
            throw InternalCheckError("structural_moment: emitted solution violates constraints");
    }
}

}  // namespace

Cplx structural_moment(const MomentQuery& q, const GenericModel& model,
                       const SpectralEnsemble& ens, const MomentBudget& budget) {
    q.validate(model);
    const int R = q.factors();
    const auto S = BlockIndexSet::from_orders(q.orders, model.arity);
    if (S.total % 2 != 0) return 0.0;

    auto pairings = enumerate_pairings(S, budget.pairing_cap);
    const double supp = static_cast<double>(ens.support().size());
    TreeSumCache cache(model, ens, q.time);

    Cplx total = 0.0;
    for (const auto& sigma : pairings) {
        // geometry cross-check runs on every pairing aside from parametrization
        auto geo = sigma_dimension(sigma, S, q.xi_lattice);
        auto par = sigma_parametrize(sigma, S, q.xi_lattice);
        if (geo.nonempty != par.nonempty)
            throw InternalCheckError("structural_moment: geometry/parametrization disagree");
        if (!par.nonempty) continue;
        const int s = static_cast<int>(par.free_cols.size());
        if (s != geo.s_sigma)
            throw InternalCheckError("structural_moment: free count != s_sigma");
        if (std::pow(supp, s) * static_cast<double>(pairings.size()) > budget.structural_cap)
            throw BudgetError("structural_moment: budget |support|^s * #pairings exceeded");

        std::vector<KVec> free_values(static_cast<std::size_t>(s), KVec(model.space_dim));
        std::vector<std::vector<KVec>> block_leaves(static_cast<std::size_t>(R));
        for (int l = 0; l < R; ++l)
            block_leaves[static_cast<std::size_t>(l)].resize(
                static_cast<std::size_t>(S.sizes[static_cast<std::size_t>(l)]));

        std::function<void(int)> enumerate_free = [&](int pos) {
            if (pos == s) {
                auto values = par.solve(free_values, model.space_dim);
                // fill the full leaf assignment; k_{sigma(m)} = -k_m
                for (std::size_t vi = 0; vi < par.vars.size(); ++vi) {
                    int m = par.vars[vi];
                    int p = sigma.partner[static_cast<std::size_t>(m)];
                    auto [l1, j1] = S.unflatten(m);
                    auto [l2, j2] = S.unflatten(p);
                    if (!ens.in_support(values[vi])) return;
                    block_leaves[static_cast<std::size_t>(l1)][static_cast<std::size_t>(j1)] = values[vi];
                    block_leaves[static_cast<std::size_t>(l2)][static_cast<std::size_t>(j2)] = -values[vi];
                }
                verify_solution(q, S, block_leaves);
                Cplx term = 1.0;
                for (int l = 0; l < R; ++l) {
                    const CVec& h = cache.value(q.orders[static_cast<std::size_t>(l)],
                                                block_leaves[static_cast<std::size_t>(l)]);
                    term *= h[q.components[static_cast<std::size_t>(l)]];
                    if (term == 0.0) return;
                }
                total += term;
                return;
            }
            for (const auto& k : ens.support()) {
                free_values[static_cast<std::size_t>(pos)] = k;
                enumerate_free(pos + 1);
            }
        };
        enumerate_free(0);
    }

    const double pref = std::pow(kTwoPi * model.L,
                                 -0.5 * model.space_dim * (model.arity - 1) * q.total_order());
    return total * pref;
}

namespace {

// Local Isserlis contraction with cov(k, k') = delta_{k, -k'}; intentionally
// separate from the pairing module (independent verification path).
double isserlis_delta(std::vector<KVec>& keys, std::vector<bool>& used) {
    std::size_t m0 = 0;
    while (m0 < keys.size() && used[m0]) ++m0;
    if (m0 == keys.size()) return 1.0;
    used[m0] = true;
    double total = 0.0;
    for (std::size_t m = m0 + 1; m < keys.size(); ++m) {
        if (used[m]) continue;
        if (keys[m] != -keys[m0]) continue;
        used[m] = true;
        total += isserlis_delta(keys, used);
        used[m] = false;
    }
    used[m0] = false;
    return total;
}

}  // namespace

Cplx oracle_moment(const MomentQuery& q, const GenericModel& model,
                   const SpectralEnsemble& ens, const MomentBudget& budget) {
    q.validate(model);
    const int R = q.factors();

    // product of the per-factor polynomials
    std::map<Monomial, Cplx> product{{Monomial{}, Cplx(1.0)}};
    for (int l = 0; l < R; ++l) {
        auto poly = picard_mode_polynomial(model, ens, q.orders[static_cast<std::size_t>(l)],
                                           q.xi_lattice[static_cast<std::size_t>(l)],
                                           q.components[static_cast<std::size_t>(l)], q.time,
                                           budget.lattice);
        std::map<Monomial, Cplx> next;
        for (const auto& [ma, ca] : product) {
            for (const auto& [mb, cb] : poly.terms) {
                Monomial m = ma;
                m.insert(m.end(), mb.begin(), mb.end());
                std::sort(m.begin(), m.end());
                next[std::move(m)] += ca * cb;
                if (next.size() > budget.lattice.monomial_cap)
                    throw BudgetError("oracle_moment: monomial budget exceeded");
            }
        }
        product = std::move(next);
        if (product.empty()) return 0.0;
    }

    Cplx total = 0.0;
    for (const auto& [mono, coeff] : product) {
        if (coeff == 0.0) continue;
        if (mono.size() % 2 != 0) continue;  // odd Gaussian moments vanish
        std::vector<KVec> keys = mono;
        std::vector<bool> used(keys.size(), false);
        double e = isserlis_delta(keys, used);
        total += coeff * e;
    }
    return total;
}

bool McEstimate::within(const Cplx& reference, double z) const {
    const double floor_se = 1e-14;
    double zr = std::abs(mean.real() - reference.real()) / std::max(se_re, floor_se);
    double zi = std::abs(mean.imag() - reference.imag()) / std::max(se_im, floor_se);
    return zr <= z && zi <= z;
}

McEstimate mc_moment(const MomentQuery& q, const GenericModel& model,
                     const SpectralEnsemble& ens, long samples, std::uint64_t seed,
                     int workers, bool antithetic, const MomentBudget& budget) {
    q.validate(model);
    if (samples < 100) throw ValidationError("mc_moment: at least 100 samples required");
    const int R = q.factors();
    const int S_size = q.index_set_size(model.arity);

    // flattened per-factor terms (coefficient, leaf keys), built once
    struct FactorTerms {
        std::vector<std::pair<Cplx, Monomial>> terms;
    };
    std::vector<FactorTerms> factors(static_cast<std::size_t>(R));
    for (int l = 0; l < R; ++l) {
        auto poly = picard_mode_polynomial(model, ens, q.orders[static_cast<std::size_t>(l)],
                                           q.xi_lattice[static_cast<std::size_t>(l)],
                                           q.components[static_cast<std::size_t>(l)], q.time,
                                           budget.lattice);
        for (auto& [m, c] : poly.terms)
            factors[static_cast<std::size_t>(l)].terms.emplace_back(c, m);
    }

    if (antithetic && S_size % 2 != 0) {
        // products of odd total degree cancel exactly under g -> -g
        McEstimate est;
        est.samples = samples;
        return est;
    }

    struct Acc {
        Cplx sum = 0.0;
        double sum_rr = 0.0, sum_ii = 0.0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(kDefaultChunks));

    parallel_chunks(static_cast<std::size_t>(samples), workers, kDefaultChunks,
                    [&](std::size_t b, std::size_t e, int chunk) {
                        Acc local;
                        for (std::size_t i = b; i < e; ++i) {
                            auto draw = GaussianDraw::sample_stream(ens, seed, i);
                            auto g = draw.valuation();
                            Cplx prod = 1.0;
                            for (int l = 0; l < R; ++l) {
                                Cplx v = 0.0;
                                for (const auto& [c, mono] : factors[static_cast<std::size_t>(l)].terms) {
                                    Cplx p = c;
                                    for (const auto& k : mono) p *= g(k);
                                    v += p;
                                }
                                prod *= v;
                            }
                            local.sum += prod;
                            local.sum_rr += prod.real() * prod.real();
                            local.sum_ii += prod.imag() * prod.imag();
                        }
                        acc[static_cast<std::size_t>(chunk)] = local;
                    });

    Acc total;
    for (const auto& a : acc) {
        total.sum += a.sum;
        total.sum_rr += a.sum_rr;
        total.sum_ii += a.sum_ii;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = total.sum / static_cast<double>(samples);
    double n = static_cast<double>(samples);
    double var_r = std::max(0.0, total.sum_rr / n - est.mean.real() * est.mean.real());
    double var_i = std::max(0.0, total.sum_ii / n - est.mean.imag() * est.mean.imag());
    est.se_re = std::sqrt(var_r / n);
    est.se_im = std::sqrt(var_i / n);
    return est;
}

Cplx wick_prediction(const MomentQuery& q, const GenericModel& model,
                     const SpectralEnsemble& ens, const MomentBudget& budget) {
    q.validate(model);
    const int R = q.factors();
    if (R % 2 != 0) return 0.0;

    // pair partitions of the factor set = fixed-point-free involutions of R
    // singleton blocks
    auto unit = BlockIndexSet::from_sizes(std::vector<int>(static_cast<std::size_t>(R), 1));
    auto partitions = enumerate_pairings(unit, budget.pairing_cap);
    Cplx total = 0.0;
    for (const auto& p : partitions) {
        Cplx prod = 1.0;
        for (const auto& [l, lp] : p.pairs()) {
            MomentQuery sub;
            sub.orders = {q.orders[static_cast<std::size_t>(l)], q.orders[static_cast<std::size_t>(lp)]};
            sub.components = {q.components[static_cast<std::size_t>(l)],
                              q.components[static_cast<std::size_t>(lp)]};
            sub.xi_lattice = {q.xi_lattice[static_cast<std::size_t>(l)],
                              q.xi_lattice[static_cast<std::size_t>(lp)]};
            sub.time = q.time;
            prod *= structural_moment(sub, model, ens, budget);
            if (prod == 0.0) break;
        }
        total += prod;
    }
    return total;
}

MomentReport wick_residual(const MomentQuery& q, const GenericModel& model,
                           const SpectralEnsemble& ens, const MomentBudget& budget) {
    q.validate(model);
    MomentReport rep;
    rep.index_set_size = q.index_set_size(model.arity);
    rep.odd = (rep.index_set_size % 2 != 0);
    rep.structural = structural_moment(q, model, ens, budget);
    rep.wick = wick_prediction(q, model, ens, budget);
    rep.residual = std::abs(rep.structural - rep.wick);

    rep.c_psi = model.psi_norm;
    const double c = rep.c_psi * model.arity;
    rep.c_bar = (model.arity == 2) ? 4.0 * c : 3.0 * std::exp(1.0) * model.arity * c;

    // (#S)! / ((#S)/2)!  >= number of pairings
    double fact_ratio = 1.0;
    if (!rep.odd)
        for (int k = rep.index_set_size; k > rep.index_set_size / 2; --k)
            fact_ratio *= static_cast<double>(k);

    rep.bound = fact_ratio * std::pow(ens.l2_linf_norm(), rep.index_set_size) *
                std::pow(rep.c_bar * std::abs(q.time) * std::pow(ens.a_sup_bracket(), model.growth_r),
                         q.total_order()) *
                std::pow(kTwoPi * model.L, -0.5 * model.space_dim);
    rep.bound_holds = rep.odd ? (rep.residual == 0.0) : (rep.residual <= rep.bound);
    if (!rep.bound_holds)
        throw AcceptanceError("wick_residual: residual " + std::to_string(rep.residual) +
                              " exceeds bound " + std::to_string(rep.bound));
    return rep;
}

std::vector<MixedModeRow> mixed_mode_decay(const ModelFactory& factory,
                                           const std::vector<double>& scales,
                                           const std::function<MomentQuery(double)>& query_at,
                                           long mc_samples, std::uint64_t seed,
                                           const MomentBudget& budget) {
    std::vector<MixedModeRow> rows;
    for (double L : scales) {
        auto [model, ens] = factory(L);
        MomentQuery q = query_at(L);
        KVec sum(model.space_dim);
        for (const auto& m : q.xi_lattice) sum += m;
        if (sum.is_zero())
            throw ValidationError("mixed_mode_decay: frequencies must not sum to zero");
        MixedModeRow row;
        row.L = L;
        row.structural = structural_moment(q, model, ens, budget);
        if (mc_samples > 0)
            row.mc = mc_moment(q, model, ens, mc_samples, seed, 1, true, budget);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace wturb

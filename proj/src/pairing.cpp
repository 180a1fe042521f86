#include "wturb/pairing.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace wturb {

BlockIndexSet BlockIndexSet::from_sizes(std::vector<int> sizes) {
    BlockIndexSet S;
    S.R = static_cast<int>(sizes.size());
    S.sizes = std::move(sizes);
    S.offsets.resize(static_cast<std::size_t>(S.R) + 1, 0);
    for (int l = 0; l < S.R; ++l)
        S.offsets[static_cast<std::size_t>(l + 1)] =
            S.offsets[static_cast<std::size_t>(l)] + S.sizes[static_cast<std::size_t>(l)];
    S.total = S.offsets[static_cast<std::size_t>(S.R)];
    return S;
}

BlockIndexSet BlockIndexSet::from_orders(const std::vector<int>& orders, int arity) {
    std::vector<int> sizes;
    sizes.reserve(orders.size());
    for (int n : orders) sizes.push_back(n * (arity - 1) + 1);
    return from_sizes(std::move(sizes));
}

std::pair<int, int> BlockIndexSet::unflatten(int m) const {
    int l = 0;
    while (m >= offsets[static_cast<std::size_t>(l + 1)]) ++l;
    return {l, m - offsets[static_cast<std::size_t>(l)]};
}

std::vector<std::pair<int, int>> Pairing::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int m = 0; m < size(); ++m)
        if (m < partner[static_cast<std::size_t>(m)])
            out.emplace_back(m, partner[static_cast<std::size_t>(m)]);
    return out;
}

std::size_t count_pairings(int total) {
    if (total % 2 != 0) return 0;
    std::size_t r = 1;
    for (int k = total - 1; k > 1; k -= 2) r *= static_cast<std::size_t>(k);
    return r;
}

namespace {

void enumerate_rec(std::vector<int>& partner, std::vector<bool>& used, int total,
                   std::vector<Pairing>& out) {
    int m0 = 0;
    while (m0 < total && used[static_cast<std::size_t>(m0)]) ++m0;
    if (m0 == total) {
        out.push_back(Pairing{partner});
        return;
    }
    used[static_cast<std::size_t>(m0)] = true;
    for (int m = m0 + 1; m < total; ++m) {
        if (used[static_cast<std::size_t>(m)]) continue;
        used[static_cast<std::size_t>(m)] = true;
        partner[static_cast<std::size_t>(m0)] = m;
        partner[static_cast<std::size_t>(m)] = m0;
        enumerate_rec(partner, used, total, out);
        used[static_cast<std::size_t>(m)] = false;
    }
    used[static_cast<std::size_t>(m0)] = false;
}

}  // namespace

std::vector<Pairing> enumerate_pairings(const BlockIndexSet& S, int cap) {
    if (S.total > cap)
        throw BudgetError("enumerate_pairings: |S| = " + std::to_string(S.total) +
                          " exceeds cap " + std::to_string(cap));
    if (S.total % 2 != 0) return {};
    std::vector<Pairing> out;
    out.reserve(count_pairings(S.total));
    std::vector<int> partner(static_cast<std::size_t>(S.total), -1);
    std::vector<bool> used(static_cast<std::size_t>(S.total), false);
    enumerate_rec(partner, used, S.total, out);
    return out;
}

OrbitPartition orbit_partition(const Pairing& sigma, const BlockIndexSet& S) {
    std::vector<int> parent(static_cast<std::size_t>(S.R));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int m = 0; m < S.total; ++m) {
        int a = find(S.unflatten(m).first);
        int b = find(S.unflatten(sigma.partner[static_cast<std::size_t>(m)]).first);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(S.R));
    for (int l = 0; l < S.R; ++l) groups[static_cast<std::size_t>(find(l))].push_back(l);
    OrbitPartition out;
    for (auto& g : groups)
        if (!g.empty()) out.orbits.push_back(std::move(g));
    return out;
}

namespace {

// Builds the reduced constraint system over the pair variables S_sigma:
// one equation per block l,
//   sum_{j in S_{l,+}} k_{(l,j)} - sum_{j in S_{l,-}} k_{sigma(l,j)} = L xi_l,
// where intra-block pairs drop out. The coefficient matrix is the signed
// block/pair incidence matrix; elimination on +-1 pivots stays integral.
struct RawSystem {
    std::vector<int> vars;                   // flat indices in S_sigma, ascending
    std::vector<std::vector<long long>> M;   // R x P
    std::vector<KVec> rhs;                   // per block, = L xi_l
};

RawSystem build_system(const Pairing& sigma, const BlockIndexSet& S,
                       const std::vector<KVec>& xis) {
    RawSystem sys;
    for (int m = 0; m < S.total; ++m)
        if (m < sigma.partner[static_cast<std::size_t>(m)]) sys.vars.push_back(m);
    std::vector<int> col_of(static_cast<std::size_t>(S.total), -1);
    for (std::size_t i = 0; i < sys.vars.size(); ++i)
        col_of[static_cast<std::size_t>(sys.vars[i])] = static_cast<int>(i);

    sys.M.assign(static_cast<std::size_t>(S.R),
                 std::vector<long long>(sys.vars.size(), 0));
    sys.rhs = xis;
    for (int l = 0; l < S.R; ++l) {
        for (int j = 0; j < S.sizes[static_cast<std::size_t>(l)]; ++j) {
            int m = S.flatten(l, j);
            int p = sigma.partner[static_cast<std::size_t>(m)];
            int lp = S.unflatten(p).first;
            if (lp == l) continue;  // intra-block pair contributes zero
            if (m < p)
                sys.M[static_cast<std::size_t>(l)][static_cast<std::size_t>(col_of[static_cast<std::size_t>(m)])] += 1;
            else
                sys.M[static_cast<std::size_t>(l)][static_cast<std::size_t>(col_of[static_cast<std::size_t>(p)])] -= 1;
        }
    }
    return sys;
}

struct Eliminated {
    std::vector<int> pivot_cols;
    std::vector<int> free_cols;
    int rank = 0;
    bool consistent = true;
};

// In-place integer RREF. Pivots are always +-1 here (incidence structure);
// anything else indicates a construction bug.
Eliminated eliminate(std::vector<std::vector<long long>>& M, std::vector<KVec>& rhs) {
    Eliminated res;
    const int rows = static_cast<int>(M.size());
    const int cols = rows ? static_cast<int>(M[0].size()) : 0;
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int pr = -1;
        for (int i = r; i < rows; ++i) {
            long long e = M[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (e == 1 || e == -1) {
                pr = i;
                break;
            }
            if (e != 0)
                throw InternalCheckError("pairing elimination: non-unit pivot candidate");
        }
        if (pr < 0) continue;
        std::swap(M[static_cast<std::size_t>(pr)], M[static_cast<std::size_t>(r)]);
        std::swap(rhs[static_cast<std::size_t>(pr)], rhs[static_cast<std::size_t>(r)]);
        if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] == -1) {
            for (auto& e : M[static_cast<std::size_t>(r)]) e = -e;
            rhs[static_cast<std::size_t>(r)] = -rhs[static_cast<std::size_t>(r)];
        }
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            long long f = M[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < cols; ++j)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
            for (int q = 0; q < rhs[static_cast<std::size_t>(i)].dim; ++q)
                rhs[static_cast<std::size_t>(i)][q] -=
                    static_cast<std::int32_t>(f) * rhs[static_cast<std::size_t>(r)][q];
        }
        res.pivot_cols.push_back(col);
        ++r;
    }
    res.rank = r;
    for (int i = r; i < rows; ++i)
        if (!rhs[static_cast<std::size_t>(i)].is_zero()) res.consistent = false;
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int c : res.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
    for (int c = 0; c < cols; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) res.free_cols.push_back(c);
    return res;
}

bool orbit_sums_vanish(const OrbitPartition& orbits, const std::vector<KVec>& xis) {
    for (const auto& o : orbits.orbits) {
        KVec s(xis.empty() ? 1 : xis[0].dim);
        for (int l : o) s += xis[static_cast<std::size_t>(l)];
        if (!s.is_zero()) return false;
    }
    return true;
}

}  // namespace

SigmaGeometry sigma_dimension(const Pairing& sigma, const BlockIndexSet& S,
                              const std::vector<KVec>& xis) {
    if (static_cast<int>(xis.size()) != S.R)
        throw ValidationError("sigma_dimension: one frequency per block required");
    for (const auto& xi : xis)
        if (xi.is_zero()) throw ValidationError("sigma_dimension: frequencies must be nonzero");
    if (S.total % 2 != 0)
        throw ValidationError("sigma_dimension: |S| must be even for a pairing to exist");

    SigmaGeometry geo;
    geo.half_size = S.total / 2;
    auto orbits = orbit_partition(sigma, S);
    geo.orbit_count = orbits.count();
    bool zero_sums = orbit_sums_vanish(orbits, xis);

    auto sys = build_system(sigma, S, xis);
    auto elim = eliminate(sys.M, sys.rhs);
    geo.rank_witness = elim.rank;

    if (zero_sums != elim.consistent)
        throw InternalCheckError("sigma_dimension: orbit zero-sum test disagrees with rank system");
    geo.nonempty = zero_sums;
    if (geo.nonempty) {
        geo.s_sigma = S.total / 2 + geo.orbit_count - S.R;
        if (geo.rank_witness != geo.half_size - geo.s_sigma)
            throw InternalCheckError("sigma_dimension: closed formula disagrees with exact rank");
    }
    return geo;
}

SigmaParametrization sigma_parametrize(const Pairing& sigma, const BlockIndexSet& S,
                                       const std::vector<KVec>& xis) {
    SigmaParametrization par;
    auto orbits = orbit_partition(sigma, S);
    if (!orbit_sums_vanish(orbits, xis)) {
        par.nonempty = false;
        return par;
    }
    auto sys = build_system(sigma, S, xis);
    auto elim = eliminate(sys.M, sys.rhs);
    if (!elim.consistent)
        throw InternalCheckError("sigma_parametrize: consistent orbits but inconsistent system");
    par.nonempty = true;
    par.vars = std::move(sys.vars);
    par.free_cols = std::move(elim.free_cols);
    par.pivot_cols = std::move(elim.pivot_cols);
    par.reduced = std::move(sys.M);
    par.rhs = std::move(sys.rhs);
    par.rank = elim.rank;
    return par;
}

std::vector<KVec> SigmaParametrization::solve(const std::vector<KVec>& free_values,
                                              int dim) const {
    std::vector<KVec> values(vars.size(), KVec(dim));
    for (std::size_t i = 0; i < free_cols.size(); ++i)
        values[static_cast<std::size_t>(free_cols[i])] = free_values[i];
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
        KVec v = rhs[r];
        for (std::size_t i = 0; i < free_cols.size(); ++i) {
            long long coef = reduced[r][static_cast<std::size_t>(free_cols[i])];
            if (coef == 0) continue;
            for (int q = 0; q < dim; ++q)
                v[q] -= static_cast<std::int32_t>(coef) * free_values[i][q];
        }
        values[static_cast<std::size_t>(pivot_cols[r])] = v;
    }
    return values;
}

namespace {

void partitions_rec(int next, int R, const std::vector<KVec>& xis,
                    std::vector<std::vector<int>>& blocks,
                    std::vector<std::vector<std::vector<int>>>& out) {
    if (next == R) {
        for (const auto& b : blocks) {
            if (b.size() < 2) return;
            KVec s(xis[0].dim);
            for (int l : b) s += xis[static_cast<std::size_t>(l)];
            if (!s.is_zero()) return;
        }
        out.push_back(blocks);
        return;
    }
    for (auto& b : blocks) {
        b.push_back(next);
        partitions_rec(next + 1, R, xis, blocks, out);
        b.pop_back();
    }
    blocks.push_back({next});
    partitions_rec(next + 1, R, xis, blocks, out);
    blocks.pop_back();
}

}  // namespace

std::vector<std::vector<std::vector<int>>> maximal_zero_sum_partitions(
    const std::vector<KVec>& xis) {
    for (const auto& xi : xis)
        if (xi.is_zero())
            throw ValidationError("maximal_zero_sum_partitions: frequencies must be nonzero");
    const int R = static_cast<int>(xis.size());
    std::vector<std::vector<std::vector<int>>> all;
    std::vector<std::vector<int>> blocks;
    if (R > 0) partitions_rec(0, R, xis, blocks, all);
    std::size_t best = 0;
    for (const auto& p : all) best = std::max(best, p.size());
    std::vector<std::vector<std::vector<int>>> out;
    for (auto& p : all)
        if (p.size() == best && best > 0) out.push_back(std::move(p));
    return out;
}

namespace {

Cplx wick_rec(const std::function<Cplx(int, int)>& cov, std::vector<bool>& used, int count) {
    int m0 = 0;
    while (m0 < count && used[static_cast<std::size_t>(m0)]) ++m0;
    if (m0 == count) return 1.0;
    used[static_cast<std::size_t>(m0)] = true;
    Cplx total = 0.0;
    for (int m = m0 + 1; m < count; ++m) {
        if (used[static_cast<std::size_t>(m)]) continue;
        Cplx c = cov(m0, m);
        if (c != 0.0) {
            used[static_cast<std::size_t>(m)] = true;
            total += c * wick_rec(cov, used, count);
            used[static_cast<std::size_t>(m)] = false;
        }
    }
    used[static_cast<std::size_t>(m0)] = false;
    return total;
}

}  // namespace

Cplx wick_moment(const std::function<Cplx(int, int)>& cov, int count) {
    if (count % 2 != 0) return 0.0;
    if (count == 0) return 1.0;
    std::vector<bool> used(static_cast<std::size_t>(count), false);
    return wick_rec(cov, used, count);
}

}  // namespace wturb

#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "wturb/core.hpp"
#include "wturb/vec.hpp"

namespace wturb {

// The block-structured index set S = { (l, j) : l in [1,R], j in [1,size_l] },
// flattened in lexicographic order. Internally 0-based.
struct BlockIndexSet {
    int R = 0;
    std::vector<int> sizes;
    std::vector<int> offsets;  // offsets[l] = first flat index of block l; offsets[R] = total
    int total = 0;

    static BlockIndexSet from_sizes(std::vector<int> sizes);
    // sizes n_l (N - 1) + 1 for Picard orders n_l under arity N.
    static BlockIndexSet from_orders(const std::vector<int>& orders, int arity);

    int flatten(int l, int j) const { return offsets[static_cast<std::size_t>(l)] + j; }
    std::pair<int, int> unflatten(int m) const;
};

// Fixed-point-free involution on S, stored as the partner of each flat index.
struct Pairing {
    std::vector<int> partner;

    int size() const { return static_cast<int>(partner.size()); }
    // The pairs {m, partner[m]} with m < partner[m], in ascending order of m.
    std::vector<std::pair<int, int>> pairs() const;
};

struct OrbitPartition {
    std::vector<std::vector<int>> orbits;  // disjoint, sorted, covering [0, R)
    int count() const { return static_cast<int>(orbits.size()); }
};

// Geometry of the lattice solution set of the frequency constraints under a
// pairing: emptiness, free-parameter count from the closed formula, and the
// exact integer rank of the constraint system as an independent witness.
struct SigmaGeometry {
    bool nonempty = false;
    int s_sigma = 0;       // |S|/2 + #orbits - R   (valid when nonempty)
    int rank_witness = 0;  // exact rank; equals |S_sigma| - s_sigma when nonempty
    int half_size = 0;     // |S_sigma| = |S|/2
    int orbit_count = 0;
};

// Integer parametrization of the constraint solutions: pair variables are
// the members of S_sigma (flat indices m with m < partner[m]); free variables
// range over Z^d and each dependent variable is an integer-linear function of
// the frequencies and the free variables.
struct SigmaParametrization {
    bool nonempty = false;
    std::vector<int> vars;       // flat indices forming S_sigma, ascending
    std::vector<int> free_cols;  // indices into vars
    std::vector<int> pivot_cols; // indices into vars, one per pivot row
    std::vector<std::vector<long long>> reduced;  // RREF rows over the vars
    std::vector<KVec> rhs;                        // transformed right-hand sides
    int rank = 0;

    // Dependent values for one free assignment; returns all pair-variable
    // values in `vars` order.
    std::vector<KVec> solve(const std::vector<KVec>& free_values, int dim) const;
};

// All fixed-point-free involutions of S in "match the smallest unmatched
// element first" order; empty when |S| is odd. Throws BudgetError when
// |S| > cap.
std::vector<Pairing> enumerate_pairings(const BlockIndexSet& S, int cap = 14);

std::size_t count_pairings(int total);  // (total - 1)!! for even totals, 0 for odd

OrbitPartition orbit_partition(const Pairing& sigma, const BlockIndexSet& S);

// xis are the integer frequency multiples L*xi_l, one per block, all nonzero.
SigmaGeometry sigma_dimension(const Pairing& sigma, const BlockIndexSet& S,
                              const std::vector<KVec>& xis);

SigmaParametrization sigma_parametrize(const Pairing& sigma, const BlockIndexSet& S,
                                       const std::vector<KVec>& xis);

// All partitions of [0, R) into blocks of size >= 2 with per-block zero
// frequency sum and maximal block count. Empty result: the moment vanishes.
std::vector<std::vector<std::vector<int>>> maximal_zero_sum_partitions(
    const std::vector<KVec>& xis);

// Sum over fixed-point-free involutions of products of pair covariances;
// exactly 0 for an odd number of indices.
Cplx wick_moment(const std::function<Cplx(int, int)>& cov, int count);

}  // namespace wturb

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wturb/core.hpp"

namespace wturb {

using BigInt = boost::multiprecision::cpp_int;

// Rooted ordered tree in which every node has exactly 0 or N children.
// The tree with a single childless root is the trivial tree.
struct NTree {
    int arity = 2;
    std::vector<NTree> children;  // empty, or exactly `arity` entries

    bool is_leaf() const { return children.empty(); }
    // Number of internal (N-child) nodes.
    int nodes() const {
        if (is_leaf()) return 0;
        int n = 1;
        for (const auto& ch : children) n += ch.nodes();
        return n;
    }
    int leaves() const { return (arity - 1) * nodes() + 1; }

    bool operator==(const NTree& o) const {
        return arity == o.arity && children == o.children;
    }
};

// Prefix bit-string encoding: 1 = internal node followed by its N children,
// 0 = leaf. A tree with n internal nodes encodes to n*N + 1 bits.
struct PolishCode {
    std::vector<std::uint8_t> bits;
    int arity = 2;

    std::string str() const {
        std::string s;
        s.reserve(bits.size());
        for (auto b : bits) s.push_back(b ? '1' : '0');
        return s;
    }
    bool operator==(const PolishCode& o) const {
        return arity == o.arity && bits == o.bits;
    }
    bool operator<(const PolishCode& o) const { return bits < o.bits; }
};

// Per-child windows into the flattened leaf vector of a tree, 1-based and
// inclusive. offsets[j] is the number of leaves strictly before child j+1.
struct LeafRangeTable {
    std::vector<int> offsets;                    // size N+1 (or {0,1} for the trivial tree)
    std::vector<std::pair<int, int>> windows;    // size N (or one window [1,1])
};

// Exactly the N-trees with `nodes` internal nodes, in lexicographic order of
// their Polish codes. Throws ValidationError for arity < 2, BudgetError if
// the count would exceed `cap`.
std::vector<NTree> enumerate_trees(int arity, int nodes, std::size_t cap = 1000000);

PolishCode encode_polish(const NTree& tree);

// Inverse of encode_polish via the constructive prefix-split (running bit
// sums and cut points). Throws ValidationError naming the first violated
// prefix index if the code is malformed.
NTree decode_polish(const PolishCode& code);

// Index (1-based, into bits) of the first violated prefix condition, or -1
// if the code is a valid encoding.
int polish_first_violation(const PolishCode& code);

// |A_n| by dynamic programming over child compositions.
BigInt count_trees(int arity, int nodes);

// count_trees plus the counting bound |A_n| <= 4^(n-1) for N = 2 and
// |A_n| <= (3eN)^(n-1) for N >= 3 (n >= 1).
struct TreeCountReport {
    BigInt count;
    double log_bound;  // ln of the bound
    bool bound_holds;
};
TreeCountReport count_trees_checked(int arity, int nodes);

LeafRangeTable leaf_ranges(const NTree& tree);

}  // namespace wturb

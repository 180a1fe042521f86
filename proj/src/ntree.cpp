#include "wturb/ntree.hpp"

#include <algorithm>
#include <cmath>

namespace wturb {

namespace {

void append_compositions(int arity, int total, std::vector<int>& parts,
                         std::vector<std::vector<int>>& out) {
    if (static_cast<int>(parts.size()) == arity - 1) {
        parts.push_back(total);
        out.push_back(parts);
        parts.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        parts.push_back(v);
        append_compositions(arity, total - v, parts, out);
        parts.pop_back();
    }
}

// Ordered N-tuples (n_1, ..., n_N) with sum = total.
std::vector<std::vector<int>> compositions(int arity, int total) {
    std::vector<std::vector<int>> out;
    std::vector<int> parts;
    append_compositions(arity, total, parts, out);
    return out;
}

void encode_into(const NTree& t, std::vector<std::uint8_t>& bits) {
    if (t.is_leaf()) {
        bits.push_back(0);
        return;
    }
    bits.push_back(1);
    for (const auto& ch : t.children) encode_into(ch, bits);
}

}  // namespace

std::vector<NTree> enumerate_trees(int arity, int nodes, std::size_t cap) {
    if (arity < 2)
        throw ValidationError("enumerate_trees: arity must be >= 2, got " + std::to_string(arity));
    if (nodes < 0)
        throw ValidationError("enumerate_trees: node count must be >= 0");

    BigInt total = count_trees(arity, nodes);
    if (total > BigInt(cap))
        throw BudgetError("enumerate_trees: |A_n| = " + total.str() +
                          " exceeds enumeration cap " + std::to_string(cap));

    // memo[m] = all trees with m internal nodes
    std::vector<std::vector<NTree>> memo(static_cast<std::size_t>(nodes) + 1);
    memo[0] = {NTree{arity, {}}};
    for (int m = 1; m <= nodes; ++m) {
        std::vector<NTree> level;
        for (const auto& comp : compositions(arity, m - 1)) {
            // cross product of child sets, rightmost child varying fastest
            std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
            while (true) {
                NTree t{arity, {}};
                t.children.reserve(static_cast<std::size_t>(arity));
                for (int j = 0; j < arity; ++j)
                    t.children.push_back(
                        memo[static_cast<std::size_t>(comp[static_cast<std::size_t>(j)])]
                            [idx[static_cast<std::size_t>(j)]]);
                level.push_back(std::move(t));
                int j = arity - 1;
                while (j >= 0) {
                    auto& i = idx[static_cast<std::size_t>(j)];
                    if (++i < memo[static_cast<std::size_t>(comp[static_cast<std::size_t>(j)])].size()) break;
                    i = 0;
                    --j;
                }
                if (j < 0) break;
            }
        }
        memo[static_cast<std::size_t>(m)] = std::move(level);
    }

    auto& result = memo[static_cast<std::size_t>(nodes)];
    std::sort(result.begin(), result.end(), [](const NTree& a, const NTree& b) {
        return encode_polish(a) < encode_polish(b);
    });
    return std::move(result);
}

PolishCode encode_polish(const NTree& tree) {
    PolishCode code;
    code.arity = tree.arity;
    encode_into(tree, code.bits);
    return code;
}

int polish_first_violation(const PolishCode& code) {
    const int N = code.arity;
    const std::size_t len = code.bits.size();
    if (len == 0) return 1;
    int ones = 0;
    for (auto b : code.bits) ones += (b ? 1 : 0);
    const std::size_t expected = static_cast<std::size_t>(ones) * static_cast<std::size_t>(N) + 1;
    if (len != expected) return static_cast<int>(len);  // length inconsistent with its own bit count

    // Prefix condition: for all k < nN+1 (1-based), k < (sum_{j<=k} bits_j)*N + 1.
    long long run = 0;
    for (std::size_t k = 1; k < len; ++k) {
        run += code.bits[k - 1];
        if (static_cast<long long>(k) >= run * N + 1) return static_cast<int>(k);
    }
    return -1;
}

namespace {

// Parses one tree from bits[pos...] using the cut-point construction:
// b_k are running bit sums and the m-th child of an internal node ends at
// k_m = min{ k : k >= (b_k - 1)N + m + 1 } within the node's code.
NTree decode_span(const PolishCode& code, std::size_t begin, std::size_t end) {
    const int N = code.arity;
    if (code.bits[begin] == 0) return NTree{N, {}};

    NTree t{N, {}};
    t.children.reserve(static_cast<std::size_t>(N));
    long long b = 1;  // running sum over the span, position begin consumed
    std::size_t k = 1;
    std::size_t child_begin = begin + 1;
    for (int m = 1; m <= N; ++m) {
        // advance until k >= (b_k - 1) N + m + 1
        while (true) {
            if (begin + k >= end)
                throw ValidationError("decode_polish: truncated code");
            b += code.bits[begin + k];
            ++k;
            if (static_cast<long long>(k) >= (b - 1) * N + m + 1) break;
        }
        std::size_t child_end = begin + k;
        t.children.push_back(decode_span(code, child_begin, child_end));
        child_begin = child_end;
    }
    return t;
}

}  // namespace

NTree decode_polish(const PolishCode& code) {
    if (code.arity < 2)
        throw ValidationError("decode_polish: arity must be >= 2");
    int viol = polish_first_violation(code);
    if (viol >= 0)
        throw ValidationError("decode_polish: prefix condition violated at index " +
                              std::to_string(viol));
    return decode_span(code, 0, code.bits.size());
}

BigInt count_trees(int arity, int nodes) {
    if (arity < 2)
        throw ValidationError("count_trees: arity must be >= 2, got " + std::to_string(arity));
    if (nodes < 0)
        throw ValidationError("count_trees: node count must be >= 0");

    // cnt[m+1] = sum over compositions n_1+...+n_N = m of prod cnt[n_j],
    // i.e. the N-fold convolution of cnt with itself evaluated at m.
    std::vector<BigInt> cnt(static_cast<std::size_t>(nodes) + 1);
    cnt[0] = 1;
    for (int m = 1; m <= nodes; ++m) {
        std::vector<BigInt> conv(static_cast<std::size_t>(m), 0);
        // start with the 1-fold "convolution" = cnt itself
        for (int i = 0; i < m; ++i) conv[static_cast<std::size_t>(i)] = cnt[static_cast<std::size_t>(i)];
        for (int fold = 1; fold < arity; ++fold) {
            std::vector<BigInt> next(static_cast<std::size_t>(m), 0);
            for (int i = 0; i < m; ++i) {
                if (conv[static_cast<std::size_t>(i)] == 0) continue;
                for (int j = 0; i + j < m; ++j)
                    next[static_cast<std::size_t>(i + j)] +=
                        conv[static_cast<std::size_t>(i)] * cnt[static_cast<std::size_t>(j)];
            }
            conv = std::move(next);
        }
        cnt[static_cast<std::size_t>(m)] = conv[static_cast<std::size_t>(m - 1)];
    }
    return cnt[static_cast<std::size_t>(nodes)];
}

TreeCountReport count_trees_checked(int arity, int nodes) {
    if (nodes < 1)
        throw ValidationError("count_trees_checked: bound requires n >= 1");
    TreeCountReport rep;
    rep.count = count_trees(arity, nodes);
    // ln |A_n| compared against (n-1) * ln(base); base 4 for N = 2 (the
    // proposition's "N=1" label is a typo, see the proof), 3eN otherwise.
    double base = (arity == 2) ? 4.0 : 3.0 * std::exp(1.0) * static_cast<double>(arity);
    rep.log_bound = static_cast<double>(nodes - 1) * std::log(base);
    double log_count = std::log(rep.count.convert_to<double>());
    rep.bound_holds = log_count <= rep.log_bound + 1e-12;
    return rep;
}

LeafRangeTable leaf_ranges(const NTree& tree) {
    LeafRangeTable tab;
    if (tree.is_leaf()) {
        tab.offsets = {0, 1};
        tab.windows = {{1, 1}};
        return tab;
    }
    const int N = tree.arity;
    tab.offsets.resize(static_cast<std::size_t>(N) + 1);
    tab.offsets[0] = 0;
    for (int j = 0; j < N; ++j)
        tab.offsets[static_cast<std::size_t>(j + 1)] =
            tab.offsets[static_cast<std::size_t>(j)] + tree.children[static_cast<std::size_t>(j)].leaves();
    for (int j = 0; j < N; ++j)
        tab.windows.emplace_back(tab.offsets[static_cast<std::size_t>(j)] + 1,
                                 tab.offsets[static_cast<std::size_t>(j + 1)]);
    return tab;
}

}  // namespace wturb

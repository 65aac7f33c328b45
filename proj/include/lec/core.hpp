#pragma once

// core.hpp: generalized sequences and their relabeling, permutations,
// finite posets, and exact linear-extension counting (brute force and
// downset dynamic programming).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"
#include "numtheory.hpp"

namespace lec {

// A finite sequence of integers; repeats and gaps allowed.
using GeneralizedSequence = std::vector<long long>;

// One-line notation; entries are a bijection of {1..n}.
struct Permutation {
    std::vector<int> entries;

    int n() const { return static_cast<int>(entries.size()); }
    int operator()(int pos1based) const { return entries[static_cast<size_t>(pos1based - 1)]; }

    bool operator==(const Permutation& o) const { return entries == o.entries; }

    static Permutation identity(int n) {
        Permutation p;
        p.entries.resize(static_cast<size_t>(n));
        std::iota(p.entries.begin(), p.entries.end(), 1);
        return p;
    }

    // inverse[v] = position of value v (both 1-based).
    Permutation inverse() const {
        Permutation inv;
        inv.entries.resize(entries.size());
        for (int i = 0; i < n(); ++i) inv.entries[static_cast<size_t>(entries[static_cast<size_t>(i)] - 1)] = i + 1;
        return inv;
    }

    bool is_valid() const {
        std::vector<bool> seen(entries.size(), false);
        for (int v : entries) {
            if (v < 1 || v > n() || seen[static_cast<size_t>(v - 1)]) return false;
            seen[static_cast<size_t>(v - 1)] = true;
        }
        return true;
    }
};

// Order-isomorphic permutation of a generalized sequence: values renamed
// from smallest to largest, ties broken left to right.
inline Permutation relabel(const GeneralizedSequence& seq) {
    if (seq.empty()) throw precondition_error("relabel: empty sequence");
    size_t n = seq.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t a, size_t b) { return seq[a] < seq[b]; });
    Permutation out;
    out.entries.resize(n);
    for (size_t rank = 0; rank < n; ++rank)
        out.entries[idx[rank]] = static_cast<int>(rank + 1);
    return out;
}

// Strict partial order on {1..n}, stored as a full reachability matrix.
struct Poset {
    int n = 0;
    // rel[i][j] true iff i < j in the order (0-based indices).
    std::vector<std::vector<bool>> rel;

    explicit Poset(int n_ = 0) : n(n_), rel(static_cast<size_t>(n_), std::vector<bool>(static_cast<size_t>(n_), false)) {}

    bool less(int i, int j) const { return rel[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

    // Adds i < j; caller must run close() before relying on transitivity.
    void add_relation(int i, int j) {
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw precondition_error("Poset::add_relation: bad pair");
        rel[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
    }

    // Transitive closure (Floyd-Warshall); throws if a cycle appears.
    void close() {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                if (!rel[static_cast<size_t>(i)][static_cast<size_t>(k)]) continue;
                for (int j = 0; j < n; ++j)
                    if (rel[static_cast<size_t>(k)][static_cast<size_t>(j)])
                        rel[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
            }
        for (int i = 0; i < n; ++i)
            if (rel[static_cast<size_t>(i)][static_cast<size_t>(i)])
                throw precondition_error("Poset::close: relation is cyclic");
    }

    bool is_valid() const {
        for (int i = 0; i < n; ++i) {
            if (rel[static_cast<size_t>(i)][static_cast<size_t>(i)]) return false;
            for (int j = 0; j < n; ++j) {
                if (rel[static_cast<size_t>(i)][static_cast<size_t>(j)] && rel[static_cast<size_t>(j)][static_cast<size_t>(i)]) return false;
                if (!rel[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
                for (int k = 0; k < n; ++k)
                    if (rel[static_cast<size_t>(j)][static_cast<size_t>(k)] && !rel[static_cast<size_t>(i)][static_cast<size_t>(k)]) return false;
            }
        }
        return true;
    }

    Poset reversed() const {
        Poset q(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                q.rel[static_cast<size_t>(j)][static_cast<size_t>(i)] = rel[static_cast<size_t>(i)][static_cast<size_t>(j)];
        return q;
    }

    // Longest chain length (number of elements); 0 for the empty poset.
    int height() const {
        std::vector<int> h(static_cast<size_t>(n), 0);
        // Process in an order compatible with the relation.
        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            int ba = 0, bb = 0;
            for (int k = 0; k < n; ++k) {
                if (rel[static_cast<size_t>(k)][static_cast<size_t>(a)]) ++ba;
                if (rel[static_cast<size_t>(k)][static_cast<size_t>(b)]) ++bb;
            }
            return ba < bb;
        });
        int best = n > 0 ? 1 : 0;
        for (int v : order) {
            h[static_cast<size_t>(v)] = 1;
            for (int u = 0; u < n; ++u)
                if (rel[static_cast<size_t>(u)][static_cast<size_t>(v)])
                    h[static_cast<size_t>(v)] = std::max(h[static_cast<size_t>(v)], h[static_cast<size_t>(u)] + 1);
            best = std::max(best, h[static_cast<size_t>(v)]);
        }
        return best;
    }
};

enum class CountMethod { Brute, DownsetDP };

// Default guard against runaway downset memo tables.
inline constexpr size_t kDefaultStateBudget = 50'000'000;

namespace detail {

inline Int count_le_brute(const Poset& P) {
    if (P.n > 10) throw size_limit_error("count_linear_extensions: brute force limited to n <= 10");
    std::vector<int> perm(static_cast<size_t>(P.n));
    std::iota(perm.begin(), perm.end(), 0);
    Int count = 0;
    do {
        // perm lists elements in extension order; need: no later element below
        // an earlier one.
        bool ok = true;
        for (int a = 0; ok && a < P.n; ++a)
            for (int b = a + 1; ok && b < P.n; ++b)
                if (P.less(perm[static_cast<size_t>(b)], perm[static_cast<size_t>(a)])) ok = false;
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

// ext(I) = sum over maximal elements x of I of ext(I \ x); memoized on the
// ideal bitmask.  n <= 64.
struct DownsetCounter {
    const Poset& P;
    size_t budget;
    std::unordered_map<uint64_t, Int> memo;

    // above[i] = mask of elements strictly above i.
    std::vector<uint64_t> above;

    DownsetCounter(const Poset& P_, size_t budget_) : P(P_), budget(budget_) {
        above.resize(static_cast<size_t>(P.n), 0);
        for (int i = 0; i < P.n; ++i)
            for (int j = 0; j < P.n; ++j)
                if (P.less(i, j)) above[static_cast<size_t>(i)] |= uint64_t{1} << j;
    }

    Int count(uint64_t ideal) {
        if (ideal == 0) return 1;
        auto it = memo.find(ideal);
        if (it != memo.end()) return it->second;
        Int total = 0;
        for (int i = 0; i < P.n; ++i) {
            uint64_t bit = uint64_t{1} << i;
            if (!(ideal & bit)) continue;
            if (above[static_cast<size_t>(i)] & ideal) continue;  // not maximal in the ideal
            total += count(ideal & ~bit);
        }
        if (memo.size() >= budget)
            throw resource_limit_error("count_linear_extensions: downset memo exceeded state budget");
        memo.emplace(ideal, total);
        return total;
    }
};

}  // namespace detail

inline Int count_linear_extensions(const Poset& P, CountMethod method = CountMethod::DownsetDP,
                                   size_t budget = kDefaultStateBudget) {
    if (P.n == 0) return 1;
    if (method == CountMethod::Brute) return detail::count_le_brute(P);
    if (P.n > 64) throw size_limit_error("count_linear_extensions: downset DP limited to n <= 64");
    detail::DownsetCounter dc(P, budget);
    uint64_t full = (P.n == 64) ? ~uint64_t{0} : ((uint64_t{1} << P.n) - 1);
    return dc.count(full);
}

inline long count_linear_extensions_mod(const Poset& P, long p,
                                        size_t budget = kDefaultStateBudget) {
    Int e = count_linear_extensions(P, CountMethod::DownsetDP, budget);
    return static_cast<long>(mpz_fdiv_ui(e.get_mpz_t(), static_cast<unsigned long>(p)));
}

// Position pairs (i < j, 1-based) with sigma(i) > sigma(j).
inline std::vector<std::pair<int, int>> inversions(const Permutation& s) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= s.n(); ++i)
        for (int j = i + 1; j <= s.n(); ++j)
            if (s(i) > s(j)) out.emplace_back(i, j);
    return out;
}

// Weak (right) Bruhat order: tau <= sigma iff every value pair out of order
// in tau is also out of order in sigma.
inline bool bruhat_leq(const Permutation& tau, const Permutation& sigma) {
    if (tau.n() != sigma.n()) throw precondition_error("bruhat_leq: length mismatch");
    Permutation ti = tau.inverse(), si = sigma.inverse();
    for (int a = 1; a <= tau.n(); ++a)
        for (int b = a + 1; b <= tau.n(); ++b)
            if (ti(a) > ti(b) && !(si(a) > si(b))) return false;
    return true;
}

// Dimension-2 poset P_sigma on values 1..n: i < j iff i < j as integers and
// sigma^{-1}(i) < sigma^{-1}(j) (the planar-points construction).
inline Poset poset_from_permutation(const Permutation& sigma) {
    Permutation inv = sigma.inverse();
    Poset P(sigma.n());
    for (int i = 1; i <= sigma.n(); ++i)
        for (int j = i + 1; j <= sigma.n(); ++j)
            if (inv(i) < inv(j)) P.add_relation(i - 1, j - 1);
    return P;
}

// Permutation realizing a set of distinct planar points under the product
// order: labels sorted by (x, y), values ranked by (y, x).
inline Permutation permutation_from_points(std::vector<std::pair<long long, long long>> points) {
    size_t n = points.size();
    std::sort(points.begin(), points.end());
    for (size_t i = 1; i < n; ++i)
        if (points[i] == points[i - 1]) throw precondition_error("permutation_from_points: duplicate point");
    std::vector<size_t> byv(n);
    std::iota(byv.begin(), byv.end(), size_t{0});
    std::sort(byv.begin(), byv.end(), [&](size_t a, size_t b) {
        if (points[a].second != points[b].second) return points[a].second < points[b].second;
        return points[a].first < points[b].first;
    });
    // Identify value i with the point of x-rank i; then sigma^{-1}(i) must be
    // the y-rank of that point, i.e. position p holds the x-rank of the point
    // whose y-rank is p.
    Permutation out;
    out.entries.resize(n);
    for (size_t r = 0; r < n; ++r) out.entries[r] = static_cast<int>(byv[r] + 1);
    return out;
}

}  // namespace lec

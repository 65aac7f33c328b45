#pragma once

// blockseq.hpp: sequences with "blocks" (runs of consecutive increasing
// integers in consecutive positions) and exact counting of their weak-Bruhat
// ideals.  The counter works on the dimension-2 poset of the expanded
// sequence but memoizes on per-chain prefix lengths, with every block one
// chain, so block lengths in the thousands stay feasible when the number of
// items is small.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bruhat.hpp"
#include "core.hpp"

namespace lec {

struct BlockItem {
    long long first = 0;  // value of the single, or first value of the block
    long long length = 1; // 1 for singles; blocks may have any length >= 0
    bool is_block = false;

    static BlockItem single(long long v) { return BlockItem{v, 1, false}; }
    static BlockItem block(long long first, long long length) { return BlockItem{first, length, true}; }
};

struct BlockSequence {
    std::vector<BlockItem> items;

    // Total element count after expansion.
    long long size() const {
        long long s = 0;
        for (const auto& it : items) s += it.length;
        return s;
    }

    GeneralizedSequence expand() const {
        GeneralizedSequence out;
        out.reserve(static_cast<size_t>(size()));
        for (const auto& it : items)
            for (long long v = it.first; v < it.first + it.length; ++v) out.push_back(v);
        return out;
    }

    bool values_distinct() const {
        GeneralizedSequence e = expand();
        std::sort(e.begin(), e.end());
        return std::adjacent_find(e.begin(), e.end()) == e.end();
    }
};

namespace detail {

struct VecHash {
    size_t operator()(const std::vector<long long>& v) const {
        size_t h = 1469598103934665603ull;
        for (long long x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Counts linear extensions of the product-order poset on the expanded
// points (position, value), using one chain per item.
struct ChainIdealCounter {
    // chain c spans positions pos0[c] .. pos0[c]+len[c]-1 and values
    // val0[c] .. val0[c]+len[c]-1 (singles are chains of length 1).
    std::vector<long long> pos0, val0, len;
    size_t budget;
    std::unordered_map<std::vector<long long>, Int, VecHash> memo;

    explicit ChainIdealCounter(const BlockSequence& phi, size_t budget_) : budget(budget_) {
        long long pos = 0;
        for (const auto& it : phi.items) {
            if (it.length == 0) { continue; }
            pos0.push_back(pos);
            val0.push_back(it.first);
            len.push_back(it.length);
            pos += it.length;
        }
    }

    // Index of the first element of chain c2 strictly above element i of
    // chain c (above = larger in both coordinates); len[c2] if none.
    long long first_above(size_t c, long long i, size_t c2) const {
        long long p = pos0[c] + i, v = val0[c] + i;
        // element j of c2 is above iff pos0[c2]+j > p and val0[c2]+j > v.
        long long j = std::max(p - pos0[c2], v - val0[c2]) + 1;
        if (j < 0) j = 0;
        return std::min(j, len[c2]);
    }

    Int count(std::vector<long long>& cnt) {
        bool empty = true;
        for (long long c : cnt)
            if (c > 0) { empty = false; break; }
        if (empty) return 1;
        auto it = memo.find(cnt);
        if (it != memo.end()) return it->second;
        Int total = 0;
        for (size_t c = 0; c < cnt.size(); ++c) {
            if (cnt[c] == 0) continue;
            long long i = cnt[c] - 1;  // top of the chain prefix
            bool maximal = true;
            for (size_t c2 = 0; c2 < cnt.size() && maximal; ++c2) {
                if (c2 == c) continue;
                if (cnt[c2] > first_above(c, i, c2)) maximal = false;
            }
            if (!maximal) continue;
            --cnt[c];
            total += count(cnt);
            ++cnt[c];
        }
        if (memo.size() >= budget)
            throw resource_limit_error("count_blockseq_ideal: state budget exceeded");
        memo.emplace(cnt, total);
        return total;
    }
};

}  // namespace detail

// count_bruhat_ideal(relabel(expand(phi))), computed blockwise.
inline Int count_blockseq_ideal(const BlockSequence& phi, size_t budget = kDefaultStateBudget) {
    if (phi.size() == 0) return 1;
    detail::ChainIdealCounter cc(phi, budget);
    std::vector<long long> full = cc.len;
    return cc.count(full);
}

inline long count_blockseq_ideal_mod(const BlockSequence& phi, long p,
                                     size_t budget = kDefaultStateBudget) {
    Int e = count_blockseq_ideal(phi, budget);
    return static_cast<long>(mpz_fdiv_ui(e.get_mpz_t(), static_cast<unsigned long>(p)));
}

}  // namespace lec

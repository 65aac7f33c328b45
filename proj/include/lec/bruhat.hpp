#pragma once

// bruhat.hpp: weak-Bruhat principal ideals — enumeration by DFS over
// inversion-reducing adjacent transpositions, and exact ideal counting via
// the dimension-2 poset correspondence ext(sigma) = ext(P_sigma).

#include <cstdint>
#include <set>
#include <vector>

#include "core.hpp"

namespace lec {

// All tau <= sigma in the weak Bruhat order, deduplicated; throws if the
// ideal grows beyond `limit` elements.
inline std::vector<Permutation> enumerate_bruhat_ideal(const Permutation& sigma,
                                                       size_t limit = 10'000'000) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> stack{sigma.entries};
    seen.insert(sigma.entries);
    while (!stack.empty()) {
        std::vector<int> cur = std::move(stack.back());
        stack.pop_back();
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            if (cur[i] > cur[i + 1]) {
                std::swap(cur[i], cur[i + 1]);
                if (seen.insert(cur).second) {
                    if (seen.size() > limit)
                        throw resource_limit_error("enumerate_bruhat_ideal: limit exceeded");
                    stack.push_back(cur);
                }
                std::swap(cur[i], cur[i + 1]);
            }
        }
    }
    std::vector<Permutation> out;
    out.reserve(seen.size());
    for (const auto& e : seen) out.push_back(Permutation{e});
    return out;
}

// |{tau : tau <= sigma}| = ext(P_sigma), counted by the downset DP.
inline Int count_bruhat_ideal(const Permutation& sigma, size_t budget = kDefaultStateBudget) {
    return count_linear_extensions(poset_from_permutation(sigma), CountMethod::DownsetDP, budget);
}

}  // namespace lec

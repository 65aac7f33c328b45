#pragma once
// Height-2 reduction: the bipartite poset Q attached to a poset P, its padded
// version Q_p, selective extension counts ext_A, the coloring product f_p,
// the exact identity and congruence checks, and CRT recovery of ext(P) from
// per-prime counts of Q_p.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include <lec/core.hpp>
#include <lec/errors.hpp>
#include <lec/numtheory.hpp>

namespace lec {

// Number of covering relations in the Hasse diagram.
inline long long hasse_size(const Poset& P) {
    long long covers = 0;
    for (int i = 0; i < P.n; ++i)
        for (int j = 0; j < P.n; ++j) {
            if (!P.less(i, j)) continue;
            bool cover = true;
            for (int k = 0; k < P.n && cover; ++k)
                if (P.less(i, k) && P.less(k, j)) cover = false;
            if (cover) ++covers;
        }
    return covers;
}

// Q on X (elements 0..n-1) and X' (elements n..2n-1): x_i < x_i' for all i,
// and x_i < x_j' whenever x_i < x_j in P.
inline Poset build_Q(const Poset& P) {
    int n = P.n;
    Poset Q(2 * n);
    for (int i = 0; i < n; ++i) {
        Q.add_relation(i, n + i);
        for (int j = 0; j < n; ++j)
            if (P.less(i, j)) Q.add_relation(i, n + j);
    }
    Q.close();
    return Q;
}

// Q_p: Q plus p-2 pendant elements below each x_i'.  Pendant j of group i is
// element 2n + i(p-2) + j; the total is pn elements.
inline Poset build_Qp(const Poset& P, long p) {
    if (p < 2) throw precondition_error("build_Qp: p must be a prime >= 2");
    int n = P.n;
    int t = static_cast<int>(p) - 2;
    Poset Qp(static_cast<int>(p) * n);
    for (int i = 0; i < n; ++i) {
        Qp.add_relation(i, n + i);
        for (int j = 0; j < n; ++j)
            if (P.less(i, j)) Qp.add_relation(i, n + j);
        for (int j = 0; j < t; ++j) Qp.add_relation(2 * n + i * t + j, n + i);
    }
    Qp.close();
    return Qp;
}

// ext_A(Q): linear extensions of Q assigning to X' exactly the value set A
// (1-based values, |A| = n).  Backtracking over minimal available elements.
inline Int ext_A(const Poset& Q, const std::vector<int>& A) {
    if (Q.n % 2 != 0) throw precondition_error("ext_A: Q must have 2n elements");
    int n = Q.n / 2;
    if (static_cast<int>(A.size()) != n) throw precondition_error("ext_A: |A| != n");
    std::vector<bool> in_A(static_cast<std::size_t>(2 * n) + 1, false);
    for (int a : A) {
        if (a < 1 || a > 2 * n) throw precondition_error("ext_A: value out of range");
        in_A[static_cast<std::size_t>(a)] = true;
    }
    std::vector<bool> placed(static_cast<std::size_t>(2 * n), false);
    Int total = 0;
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos > 2 * n) {
            total += 1;
            return;
        }
        bool want_prime = in_A[static_cast<std::size_t>(pos)];
        for (int e = 0; e < 2 * n; ++e) {
            if (placed[static_cast<std::size_t>(e)]) continue;
            if ((e >= n) != want_prime) continue;
            bool minimal = true;
            for (int u = 0; u < 2 * n && minimal; ++u)
                if (!placed[static_cast<std::size_t>(u)] && Q.less(u, e)) minimal = false;
            if (!minimal) continue;
            placed[static_cast<std::size_t>(e)] = true;
            self(self, pos + 1);
            placed[static_cast<std::size_t>(e)] = false;
        }
    };
    rec(rec, 1);
    return total;
}

// The coloring product f_p(A) = prod_{k=1}^{n} C(a_k - 1 + k(p-2), p-2) for
// A sorted ascending.
inline Int f_p(const std::vector<int>& A, long p) {
    if (!std::is_sorted(A.begin(), A.end()))
        throw precondition_error("f_p: A must be sorted ascending");
    Int prod = 1;
    for (std::size_t k = 1; k <= A.size(); ++k)
        prod *= binomial(static_cast<long>(A[k - 1]) - 1 + static_cast<long>(k) * (p - 2), p - 2);
    return prod;
}

// ext(Q_p) by pendant compression: the p-2 pendants of each group are
// interchangeable, so we count arrangements with pendants indistinct within
// their group (state: placed subset of Q, per-group pendant tally) and
// multiply by ((p-2)!)^n.
inline Int ext_Qp_compressed(const Poset& P, long p, std::size_t budget = kDefaultStateBudget) {
    int n = P.n;
    if (n > 30) throw size_limit_error("ext_Qp_compressed: poset too large");
    Poset Q = build_Q(P);
    int t = static_cast<int>(p) - 2;
    using State = std::pair<uint64_t, std::vector<int>>;
    std::map<State, Int> memo;
    uint64_t full = (n == 0) ? 0 : ((uint64_t{1} << (2 * n)) - 1);
    auto rec = [&](auto&& self, uint64_t mask, std::vector<int>& c) -> Int {
        bool done = mask == full;
        for (int i = 0; i < n && done; ++i)
            if (c[static_cast<std::size_t>(i)] != t) done = false;
        if (done) return 1;
        State key{mask, c};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (memo.size() > budget) throw resource_limit_error("ext_Qp_compressed: state budget");
        Int total = 0;
        for (int e = 0; e < 2 * n; ++e) {
            if (mask & (uint64_t{1} << e)) continue;
            bool minimal = true;
            for (int u = 0; u < 2 * n && minimal; ++u)
                if (!(mask & (uint64_t{1} << u)) && Q.less(u, e)) minimal = false;
            if (!minimal) continue;
            if (e >= n && c[static_cast<std::size_t>(e - n)] != t) continue;  // pendants first
            total += self(self, mask | (uint64_t{1} << e), c);
        }
        for (int i = 0; i < n; ++i) {
            if (c[static_cast<std::size_t>(i)] == t) continue;
            if (mask & (uint64_t{1} << (n + i))) continue;  // x_i' already placed
            ++c[static_cast<std::size_t>(i)];
            total += self(self, mask, c);
            --c[static_cast<std::size_t>(i)];
        }
        memo.emplace(std::move(key), total);
        return total;
    };
    std::vector<int> c(static_cast<std::size_t>(n), 0);
    Int base = rec(rec, 0, c);
    Int scale = 1;
    Int pf = factorial(p - 2);
    for (int i = 0; i < n; ++i) scale *= pf;
    return base * scale;
}

struct Height2Report {
    bool pass = false;
    Int lhs;
    Int rhs;
};

// Exact identity ext(Q_p) = ((p-2)!)^n * sum_A ext_A(Q) f_p(A) over all
// n-subsets A of {1..2n}.
inline Height2Report exact_identity_check(const Poset& P, long p,
                                          std::size_t budget = kDefaultStateBudget) {
    Height2Report rep;
    int n = P.n;
    Poset Q = build_Q(P);
    rep.lhs = ext_Qp_compressed(P, p, budget);
    Int pf = factorial(p - 2);
    Int scale = 1;
    for (int i = 0; i < n; ++i) scale *= pf;
    Int sum = 0;
    std::vector<int> A(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int next, int chosen) -> void {
        if (chosen == n) {
            Int e = ext_A(Q, A);
            if (e != 0) sum += e * f_p(A, p);
            return;
        }
        for (int v = next; v <= 2 * n - (n - chosen - 1); ++v) {
            A[static_cast<std::size_t>(chosen)] = v;
            self(self, v + 1, chosen + 1);
        }
    };
    rec(rec, 1, 0);
    rep.rhs = scale * sum;
    rep.pass = rep.lhs == rep.rhs;
    return rep;
}

// The even value set {2, 4, ..., 2n}.
inline std::vector<int> even_value_set(int n) {
    std::vector<int> A;
    for (int k = 1; k <= n; ++k) A.push_back(2 * k);
    return A;
}

struct Height2CongruenceReport {
    bool pass = false;
    long lhs_mod = 0;  // ext(Q_p) mod p
    long rhs_mod = 0;  // (-1)^n ext_{{2,4,...,2n}}(Q) mod p
    Int even_count;    // ext_{{2,4,...,2n}}(Q), equal to ext(P)
};

// Congruence ext(Q_p) == (-1)^n ext_{{2,4,...,2n}}(Q) (mod p).
inline Height2CongruenceReport congruence_check(const Poset& P, long p,
                                                std::size_t budget = kDefaultStateBudget) {
    Height2CongruenceReport rep;
    int n = P.n;
    Poset Q = build_Q(P);
    Int lhs = ext_Qp_compressed(P, p, budget);
    rep.even_count = ext_A(Q, even_value_set(n));
    Int rhs = (n % 2 == 0) ? rep.even_count : -rep.even_count;
    Int pz(p);
    Int lm = lhs % pz, rm = rhs % pz;
    if (lm < 0) lm += pz;
    if (rm < 0) rm += pz;
    rep.lhs_mod = static_cast<long>(lm.get_si());
    rep.rhs_mod = static_cast<long>(rm.get_si());
    rep.pass = rep.lhs_mod == rep.rhs_mod;
    return rep;
}

// Smallest primes > n whose product exceeds n!.
inline std::vector<long> recovery_primes(int n) {
    Int need = factorial(n);
    std::vector<long> ps;
    Int prod = 1;
    long lo = n + 1, hi = 2 * n + 4;
    while (prod <= need) {
        for (long p : primes_between(lo, hi)) {
            ps.push_back(p);
            prod *= p;
            if (prod > need) break;
        }
        lo = hi + 1;
        hi = 2 * hi;
    }
    return ps;
}

struct Height2Recovery {
    Int ext;
    ResidueSystem residues;  // residue of ext(P) per prime
    std::vector<long> qp_residues;  // raw ext(Q_p) mod p
};

// Recovers ext(P) exactly from ext(Q_p) mod p over enough primes p > n,
// using ext(P) == (-1)^n ext(Q_p) (mod p) and the CRT.
inline Height2Recovery recover_ext_height2(const Poset& P,
                                           std::size_t budget = kDefaultStateBudget) {
    int n = P.n;
    if (n < 1) throw precondition_error("recover_ext_height2: empty poset");
    Height2Recovery out;
    for (long p : recovery_primes(n)) {
        Int qp = ext_Qp_compressed(P, p, budget);
        Int pz(p);
        Int r = qp % pz;
        if (r < 0) r += pz;
        out.qp_residues.push_back(static_cast<long>(r.get_si()));
        Int e = (n % 2 == 0) ? r : (pz - r) % pz;
        out.residues.push_back({e, pz});
    }
    auto [value, mod] = crt_combine(out.residues);
    if (mod <= factorial(n))
        throw resource_limit_error("recover_ext_height2: insufficient prime coverage");
    out.ext = value;
    return out;
}

}  // namespace lec

#pragma once
// Incidence posets: the vertex-order counting formula as a subset dynamic
// program, the J_p gadget and its reduced state-graph recurrence, the G_p(P)
// reduction with congruence checks and CRT recovery, and the mode poset of a
// graph with a distinguished independent set.

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <lec/core.hpp>
#include <lec/errors.hpp>
#include <lec/numtheory.hpp>

namespace lec {

// Simple undirected graph.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    void add_edge(int u, int v) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw precondition_error("Graph::add_edge: bad pair");
        if (u > v) std::swap(u, v);
        if (std::find(edges.begin(), edges.end(), std::pair{u, v}) != edges.end())
            throw precondition_error("Graph::add_edge: multi-edge");
        edges.push_back({u, v});
    }

    int degree(int v) const {
        int d = 0;
        for (const auto& [a, b] : edges)
            if (a == v || b == v) ++d;
        return d;
    }
};

// Height-2 poset on V and E with each edge below its two endpoints.
// Vertices are elements 0..n-1; edge i is element n+i.
inline Poset incidence_poset(const Graph& G) {
    Poset P(G.n + static_cast<int>(G.edges.size()));
    for (std::size_t i = 0; i < G.edges.size(); ++i) {
        P.add_relation(G.n + static_cast<int>(i), G.edges[i].first);
        P.add_relation(G.n + static_cast<int>(i), G.edges[i].second);
    }
    P.close();
    return P;
}

// ext(I_G) by a subset dynamic program: visiting vertex v after the set T
// contributes t! C(u + k - 1, t), where t is the number of edges at v with
// no endpoint in T, u the number of edges incident to T + v, and k = |T| + 1.
// The summand of the vertex-order formula depends only on (T, v), so the
// permutation sum regroups over subsets.
inline Int count_ext_incidence(const Graph& G) {
    int n = G.n;
    if (n > 24) throw size_limit_error("count_ext_incidence: more than 24 vertices");
    std::vector<uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : G.edges) {
        adj[static_cast<std::size_t>(a)] |= uint32_t{1} << b;
        adj[static_cast<std::size_t>(b)] |= uint32_t{1} << a;
    }
    std::vector<Int> f(std::size_t{1} << n, Int(0));
    std::vector<int> u(std::size_t{1} << n, 0);
    f[0] = 1;
    for (uint32_t S = 1; S < (uint32_t{1} << n); ++S) {
        int k = __builtin_popcount(S);
        // u(S) via the lowest bit (edges incident to S).
        {
            int v = __builtin_ctz(S);
            uint32_t T = S & (S - 1);
            int t = G.degree(v) - __builtin_popcount(adj[static_cast<std::size_t>(v)] & T);
            u[S] = u[T] + t;
        }
        Int total = 0;
        for (uint32_t rest = S; rest != 0; rest &= rest - 1) {
            int v = __builtin_ctz(rest);
            uint32_t T = S & ~(uint32_t{1} << v);
            if (f[T] == 0) continue;
            int t = G.degree(v) - __builtin_popcount(adj[static_cast<std::size_t>(v)] & T);
            total += f[T] * factorial(t) * binomial(u[S] + k - 1, t);
        }
        f[S] = total;
    }
    return f[(std::size_t{1} << n) - 1];
}

// The J_p gadget: K_{p-1,p-1} on y_1..y_{p-1} (vertices 0..p-2) and
// z_1..z_{p-1} (vertices p-1..2p-3), plus p-2 edges z_{p-1} z_i for i < p-1.
inline Graph build_Jp(long p) {
    if (p < 3) throw precondition_error("build_Jp: p >= 3 required");
    Graph J;
    J.n = static_cast<int>(2 * p - 2);
    for (int i = 0; i < p - 1; ++i)
        for (int j = 0; j < p - 1; ++j) J.add_edge(i, static_cast<int>(p) - 1 + j);
    for (int i = 0; i + 1 < p - 1; ++i)
        J.add_edge(static_cast<int>(2 * p) - 3, static_cast<int>(p) - 1 + i);
    return J;
}

// Deletions-so-far count for the state J_p(a, b, c): total vertices and edges
// removed from J_p(p-1, p-2, 1).
inline long long jp_ell(long p, long a, long b, long c) {
    return (p * p - p - 1) - (a * b + (a + b) * c) + (p - 1 - a) + (p - 2 - b) + (1 - c);
}

// Weight of the state-graph edge out of J_p(a,b,c) reducing coordinate
// `which` (0 = a, 1 = b, 2 = c) by one: mult * t! * C(ell + t, t) with
// t the edges deleted along with the vertex.
inline Int jp_edge_weight(long p, long a, long b, long c, int which) {
    long long ell = jp_ell(p, a, b, c);
    long mult, t;
    switch (which) {
        case 0: mult = a; t = b + c; break;
        case 1: mult = b; t = c + a; break;
        case 2: mult = c; t = a + b; break;
        default: throw precondition_error("jp_edge_weight: bad coordinate");
    }
    if (mult == 0) return 0;
    return Int(mult) * factorial(t) * binomial(static_cast<long>(ell) + t, t);
}

// ext(I_{J_p}) by the reduced state-graph recurrence: g(a,b,c) sums weighted
// paths from J_p(a,b,c) down to the empty subgraph.
inline Int count_Jp_recurrence(long p) {
    if (p < 3) throw precondition_error("count_Jp_recurrence: p >= 3 required");
    auto idx = [&](long a, long b, long c) {
        return static_cast<std::size_t>((a * (p - 1) + b) * 2 + c);
    };
    std::vector<Int> g(static_cast<std::size_t>(p * (p - 1) * 2), Int(0));
    g[idx(0, 0, 0)] = 1;
    for (long a = 0; a <= p - 1; ++a)
        for (long b = 0; b <= p - 2; ++b)
            for (long c = 0; c <= 1; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                Int total = 0;
                if (a > 0) total += jp_edge_weight(p, a, b, c, 0) * g[idx(a - 1, b, c)];
                if (b > 0) total += jp_edge_weight(p, a, b, c, 1) * g[idx(a, b - 1, c)];
                if (c > 0) total += jp_edge_weight(p, a, b, c, 2) * g[idx(a, b, c - 1)];
                g[idx(a, b, c)] = total;
            }
    return g[idx(p - 1, p - 2, 1)];
}

// Weighted in-flow: path sums from the full state J_p(p-1, p-2, 1) to each
// state, for the path-vanishing invariant.
inline std::vector<Int> jp_inflow(long p) {
    auto idx = [&](long a, long b, long c) {
        return static_cast<std::size_t>((a * (p - 1) + b) * 2 + c);
    };
    std::vector<Int> h(static_cast<std::size_t>(p * (p - 1) * 2), Int(0));
    h[idx(p - 1, p - 2, 1)] = 1;
    for (long a = p - 1; a >= 0; --a)
        for (long b = p - 2; b >= 0; --b)
            for (long c = 1; c >= 0; --c) {
                if (a == p - 1 && b == p - 2 && c == 1) continue;
                Int total = 0;
                if (a + 1 <= p - 1)
                    total += jp_edge_weight(p, a + 1, b, c, 0) * h[idx(a + 1, b, c)];
                if (b + 1 <= p - 2)
                    total += jp_edge_weight(p, a, b + 1, c, 1) * h[idx(a, b + 1, c)];
                if (c == 0) total += jp_edge_weight(p, a, b, 1, 2) * h[idx(a, b, 1)];
                h[idx(a, b, c)] = total;
            }
    return h;
}

// G_p(P): J_p on top of the Hasse diagram of P (as an undirected graph),
// with p-1-v_x padding edges from each element x to distinct y_i's, chosen
// round-robin.  Elements of P are vertices 0..n-1, y_i is n+i, z_i is
// n+p-1+i.  `spin` rotates the round-robin start (the choice is arbitrary).
inline Graph build_Gp(const Poset& P, long p, int spin = 0) {
    int n = P.n;
    Graph G;
    G.n = n + static_cast<int>(2 * p - 2);
    // Hasse diagram of P.
    std::vector<int> covers(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!P.less(i, j)) continue;
            bool cover = true;
            for (int k = 0; k < n && cover; ++k)
                if (P.less(i, k) && P.less(k, j)) cover = false;
            if (cover) {
                G.add_edge(i, j);
                ++covers[static_cast<std::size_t>(i)];
            }
        }
    for (int i = 0; i < n; ++i)
        if (covers[static_cast<std::size_t>(i)] > p - 1)
            throw precondition_error("build_Gp: an element has more than p-1 covers");
    // J_p shifted by n.
    Graph J = build_Jp(p);
    for (const auto& [a, b] : J.edges) G.add_edge(n + a, n + b);
    // Padding edges to the y_i's.
    long cursor = spin;
    for (int x = 0; x < n; ++x) {
        long need = p - 1 - covers[static_cast<std::size_t>(x)];
        for (long j = 0; j < need; ++j) {
            G.add_edge(x, n + static_cast<int>(cursor % (p - 1)));
            ++cursor;
        }
    }
    return G;
}

struct IncidenceCongruenceReport {
    bool pass = false;
    long lhs_mod = 0;  // ext(G_p(P)) mod p
    long rhs_mod = 0;  // (-1)^{|P|+1} * 2 * ext(P) mod p
};

// Congruence ext(G_p(P)) == (-1)^{|P|+1} * 2 * ext(P) (mod p).  The factor 2
// is -ext(I_{J_p}) mod p: ext(J_p) == -2 (mod p), confirmed by three
// independent counters (state recurrence, subset DP, generic downset DP).
inline IncidenceCongruenceReport congruence_check_incidence(const Poset& P, long p,
                                                            int spin = 0) {
    IncidenceCongruenceReport rep;
    Graph G = build_Gp(P, p, spin);
    Int lhs = count_ext_incidence(G);
    Int rhs = Int(2) * count_linear_extensions(P);
    if (P.n % 2 == 0) rhs = -rhs;
    Int pz(p);
    Int lm = lhs % pz, rm = rhs % pz;
    if (lm < 0) lm += pz;
    if (rm < 0) rm += pz;
    rep.lhs_mod = static_cast<long>(lm.get_si());
    rep.rhs_mod = static_cast<long>(rm.get_si());
    rep.pass = rep.lhs_mod == rep.rhs_mod;
    return rep;
}

struct IncidenceRecovery {
    Int ext;
    ResidueSystem residues;          // residue of ext(P) per prime
    std::vector<long> gp_residues;   // raw ext(G_p(P)) mod p
    bool used_search = false;        // consistency search instead of plain CRT
};

// Recovers ext(P) from residues of ext(G_p(P)) over the primes in (n, n^2].
// Plain CRT once the prime product exceeds 8 n!; otherwise a consistency
// search over the candidates 1..n! (which still needs product > n!).
inline IncidenceRecovery recover_ext_incidence(const Poset& P) {
    int n = P.n;
    if (n < 2) throw precondition_error("recover_ext_incidence: need at least 2 elements");
    IncidenceRecovery out;
    Int prod = 1, bound = Int(8) * factorial(n);
    for (long p : primes_between(n, static_cast<long>(n) * n)) {
        if (n + 2 * p - 2 > 24)
            throw resource_limit_error("recover_ext_incidence: G_p too large for the subset DP");
        Graph G = build_Gp(P, p);
        Int r = count_ext_incidence(G) % p;
        if (r < 0) r += p;
        out.gp_residues.push_back(static_cast<long>(r.get_si()));
        // ext(P) = (-1)^{n+1} * 2^{-1} * ext(G_p(P)) mod p.
        long e = rational_mod(n % 2 == 0 ? -r : r, Int(2), p);
        out.residues.push_back({Int(e), Int(p)});
        prod *= p;
        if (prod > bound) break;
    }
    if (out.residues.empty() || prod <= factorial(n))
        throw resource_limit_error("recover_ext_incidence: insufficient prime coverage");
    auto [value, mod] = crt_combine(out.residues);
    if (prod > bound) {
        out.ext = value;
        return out;
    }
    // Consistency search over the finitely many possible values.
    out.used_search = true;
    Int nf = factorial(n);
    for (Int cand = 1; cand <= nf; ++cand)
        if (cand % mod == value) {
            out.ext = cand;
            return out;
        }
    throw precondition_error("recover_ext_incidence: no consistent candidate");
}

// Height-2 poset of a graph H with a distinguished independent set X:
// X on the bottom level, V minus X on top, relations from the edges.
inline Poset modes_poset(const Graph& H, const std::vector<int>& X) {
    std::set<int> xs(X.begin(), X.end());
    for (const auto& [a, b] : H.edges)
        if (xs.count(a) && xs.count(b))
            throw precondition_error("modes_poset: X is not independent");
    Poset P(H.n);
    for (const auto& [a, b] : H.edges) {
        if (xs.count(a)) P.add_relation(a, b);
        else if (xs.count(b)) P.add_relation(b, a);
    }
    P.close();
    return P;
}

// The bipartite vertex-edge graph of G together with the edge side as an
// independent set; its mode poset is the incidence poset of G.
inline std::pair<Graph, std::vector<int>> medial_graph(const Graph& G) {
    Graph H;
    H.n = G.n + static_cast<int>(G.edges.size());
    std::vector<int> X;
    for (std::size_t i = 0; i < G.edges.size(); ++i) {
        int e = G.n + static_cast<int>(i);
        H.add_edge(e, G.edges[i].first);
        H.add_edge(e, G.edges[i].second);
        X.push_back(e);
    }
    return {H, X};
}

}  // namespace lec

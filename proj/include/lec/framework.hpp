#pragma once
// Bruhat circuit frameworks: separator/stable/variable classification, the
// section split, circuit states of a permutation below sigma, the sum
// decomposition, assembly of full-scale frameworks from rigid circuits with
// exact length accounting, and manifest serialization.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <lec/blockseq.hpp>
#include <lec/bruhat.hpp>
#include <lec/circuit.hpp>
#include <lec/core.hpp>
#include <lec/errors.hpp>
#include <lec/gates.hpp>

namespace lec {

// ---------------------------------------------------------------------------
// Materialized frameworks (toy scale).

// A framework given by its one-line notation and separator values.  The
// classification into stable elements and variables is derived: an element
// positioned between s_i and s_{i+1} is stable when its value lies in the
// same gap and a variable when its value lies in the previous gap.
struct BruhatFramework {
    long long N = 0;
    std::vector<long long> flat;        // one-line notation over 1..n
    std::vector<long long> separators;  // s_1 < ... < s_m

    int m() const { return static_cast<int>(separators.size()); }
    long long n() const { return static_cast<long long>(flat.size()); }
};

// Derived per-element data; throws precondition_error on invariant breaks.
struct FrameworkIndex {
    std::vector<long long> pos;               // pos[value] (1-based values)
    std::vector<int> sep_pos;                 // positions of s_1..s_m
    std::vector<std::vector<long long>> vars; // vars[i] = x_{i1} > x_{i2} > ... per gap i (1-based)
};

inline FrameworkIndex index_framework(const BruhatFramework& F) {
    long long n = F.n();
    int m = F.m();
    FrameworkIndex ix;
    ix.pos.assign(static_cast<std::size_t>(n) + 1, -1);
    for (long long i = 0; i < n; ++i) {
        long long v = F.flat[static_cast<std::size_t>(i)];
        if (v < 1 || v > n || ix.pos[static_cast<std::size_t>(v)] != -1)
            throw precondition_error("framework: flat is not a permutation");
        ix.pos[static_cast<std::size_t>(v)] = i;
    }
    for (int i = 0; i + 1 < m; ++i)
        if (F.separators[static_cast<std::size_t>(i)] >=
            F.separators[static_cast<std::size_t>(i) + 1])
            throw precondition_error("framework: separator values not increasing");
    for (long long s : F.separators)
        if (s < 1 || s > n) throw precondition_error("framework: separator out of range");
    for (int i = 0; i < m; ++i)
        ix.sep_pos.push_back(
            static_cast<int>(ix.pos[static_cast<std::size_t>(F.separators[static_cast<std::size_t>(i)])]));
    for (int i = 0; i + 1 < m; ++i)
        if (ix.sep_pos[static_cast<std::size_t>(i)] >= ix.sep_pos[static_cast<std::size_t>(i) + 1])
            throw precondition_error("framework: separator positions not increasing");

    // Value gap and position gap of each element; sentinels s_0 = 0, s_{m+1} = n+1.
    auto value_gap = [&](long long v) {
        int g = 0;
        while (g < m && v > F.separators[static_cast<std::size_t>(g)]) ++g;
        return g;
    };
    auto position_gap = [&](long long p) {
        int g = 0;
        while (g < m && p > ix.sep_pos[static_cast<std::size_t>(g)]) ++g;
        return g;
    };
    ix.vars.assign(static_cast<std::size_t>(m) + 1, {});
    for (long long v = 1; v <= n; ++v) {
        if (std::find(F.separators.begin(), F.separators.end(), v) != F.separators.end())
            continue;
        int vg = value_gap(v);
        int pg = position_gap(ix.pos[static_cast<std::size_t>(v)]);
        if (pg == vg) continue;  // stable element
        if (pg != vg + 1)
            throw precondition_error("framework: element neither stable nor variable");
        ix.vars[static_cast<std::size_t>(pg)].push_back(v);  // gap-pg variable
    }
    for (int i = 1; i <= m; ++i) {
        auto& xs = ix.vars[static_cast<std::size_t>(i)];
        std::sort(xs.begin(), xs.end(), std::greater<>());
        if (static_cast<long long>(xs.size()) != F.N)
            throw precondition_error("framework: gap without exactly N variables");
        for (std::size_t j = 0; j + 1 < xs.size(); ++j)
            if (ix.pos[static_cast<std::size_t>(xs[j])] >= ix.pos[static_cast<std::size_t>(xs[j + 1])])
                throw precondition_error("framework: variable positions not increasing");
    }
    if (!ix.vars[0].empty())
        throw precondition_error("framework: variables below the first separator");
    return ix;
}

inline bool validate_framework(const BruhatFramework& F) {
    index_framework(F);
    return true;
}

// One section sigma_i: its elements in order, plus wire bookkeeping.  Wire j
// is the j-th largest variable of its gap (x_{ij}); inputs are the previous
// gap's variables (interior) and outputs the own-gap variables (appended in
// decreasing order, as they occur in sigma).
struct SectionGate {
    std::vector<long long> values;
    std::vector<int> inputs;   // indices into values, wire order
    std::vector<int> outputs;  // indices into values, wire order
};

inline std::vector<SectionGate> framework_sections(const BruhatFramework& F) {
    FrameworkIndex ix = index_framework(F);
    int m = F.m();
    long long n = F.n();
    std::vector<SectionGate> out;
    for (int i = 1; i <= m + 1; ++i) {
        long long lo = i == 1 ? -1 : ix.sep_pos[static_cast<std::size_t>(i) - 2];
        long long hi = i == m + 1 ? n : ix.sep_pos[static_cast<std::size_t>(i) - 1];
        SectionGate sec;
        std::map<long long, int> where;
        for (long long p = lo + 1; p < hi; ++p) {
            where[F.flat[static_cast<std::size_t>(p)]] = static_cast<int>(sec.values.size());
            sec.values.push_back(F.flat[static_cast<std::size_t>(p)]);
        }
        if (i >= 2)
            for (long long x : ix.vars[static_cast<std::size_t>(i) - 1])
                sec.inputs.push_back(where.at(x));
        if (i <= m)
            for (long long x : ix.vars[static_cast<std::size_t>(i)]) {
                sec.outputs.push_back(static_cast<int>(sec.values.size()));
                sec.values.push_back(x);
            }
        out.push_back(std::move(sec));
    }
    return out;
}

// ext(sigma_i rtimes (v_in, v_out)): 0-bit inputs and 1-bit outputs deleted.
inline Int count_section(const SectionGate& sec, const std::vector<int>& v_in,
                         const std::vector<int>& v_out,
                         std::size_t budget = kDefaultStateBudget) {
    if (v_in.size() != sec.inputs.size() || v_out.size() != sec.outputs.size())
        throw precondition_error("count_section: state length mismatch");
    std::set<int> dead;
    for (std::size_t j = 0; j < v_in.size(); ++j)
        if (v_in[j] == 0) dead.insert(sec.inputs[j]);
    for (std::size_t j = 0; j < v_out.size(); ++j)
        if (v_out[j] == 1) dead.insert(sec.outputs[j]);
    std::vector<long long> vals;
    for (std::size_t i = 0; i < sec.values.size(); ++i)
        if (!dead.count(static_cast<int>(i))) vals.push_back(sec.values[i]);
    if (vals.empty()) return Int(1);
    return count_bruhat_ideal(relabel(vals), budget);
}

// The maximal tau with the given circuit states: each FALSE variable of gap i
// moves immediately to the left of s_i, FALSE variables kept descending.
inline Permutation tau_given_states(const BruhatFramework& F,
                                    const std::vector<std::vector<int>>& states) {
    FrameworkIndex ix = index_framework(F);
    int m = F.m();
    if (static_cast<int>(states.size()) != m)
        throw precondition_error("tau_given_states: wrong number of states");
    std::vector<long long> seq = F.flat;
    for (int i = 1; i <= m; ++i) {
        const auto& v = states[static_cast<std::size_t>(i) - 1];
        if (static_cast<long long>(v.size()) != F.N)
            throw precondition_error("tau_given_states: state length != N");
        std::vector<long long> falses;  // descending: vars are stored descending
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] == 0) falses.push_back(ix.vars[static_cast<std::size_t>(i)][j]);
        seq.erase(std::remove_if(seq.begin(), seq.end(),
                                 [&](long long x) {
                                     return std::find(falses.begin(), falses.end(), x) !=
                                            falses.end();
                                 }),
                  seq.end());
        auto sep_it = std::find(seq.begin(), seq.end(),
                                F.separators[static_cast<std::size_t>(i) - 1]);
        seq.insert(sep_it, falses.begin(), falses.end());
    }
    Permutation tau;
    tau.entries.assign(seq.begin(), seq.end());
    return tau;
}

// The circuit states of tau <= sigma: a_{ij} = 1 iff x_{ij} sits between s_i
// and s_{i+1} in tau.
inline std::vector<std::vector<int>> bruhat_states_of_tau(const BruhatFramework& F,
                                                          const Permutation& tau) {
    FrameworkIndex ix = index_framework(F);
    Permutation sigma;
    sigma.entries.assign(F.flat.begin(), F.flat.end());
    if (!bruhat_leq(tau, sigma))
        throw precondition_error("bruhat_states_of_tau: tau not below sigma");
    long long n = F.n();
    int m = F.m();
    std::vector<long long> tpos(static_cast<std::size_t>(n) + 1, 0);
    for (long long i = 0; i < n; ++i)
        tpos[static_cast<std::size_t>(tau.entries[static_cast<std::size_t>(i)])] = i;
    auto sep_tpos = [&](int i) -> long long {
        if (i == 0) return -1;
        if (i == m + 1) return n;
        return tpos[static_cast<std::size_t>(F.separators[static_cast<std::size_t>(i) - 1])];
    };
    std::vector<std::vector<int>> states;
    for (int i = 1; i <= m; ++i) {
        std::vector<int> v;
        for (long long x : ix.vars[static_cast<std::size_t>(i)]) {
            long long px = tpos[static_cast<std::size_t>(x)];
            v.push_back(sep_tpos(i) < px && px < sep_tpos(i + 1) ? 1 : 0);
        }
        states.push_back(std::move(v));
    }
    return states;
}

struct SumDecompositionReport {
    bool pass = false;
    bool partition_pass = false;  // ideal of sigma partitioned by circuit state
    Int ext_sigma;
    Int section_sum;  // Eq. (bettersum) right side
};

inline std::string encode_states(const std::vector<std::vector<int>>& states) {
    std::string s;
    for (const auto& v : states) {
        for (int b : v) s.push_back(b ? '1' : '0');
        s.push_back('|');
    }
    return s;
}

inline std::string encode_states(const BruhatFramework& F, const Permutation& tau) {
    return encode_states(bruhat_states_of_tau(F, tau));
}

// Exact check of ext(sigma) = sum over state tuples of the section-count
// product, and of the underlying partition: bucketing the full ideal of
// sigma by circuit state gives exactly the per-state products.
inline SumDecompositionReport verify_sum_decomposition(const BruhatFramework& F,
                                                       std::size_t budget = kDefaultStateBudget) {
    SumDecompositionReport rep;
    Permutation sigma;
    sigma.entries.assign(F.flat.begin(), F.flat.end());
    rep.ext_sigma = count_bruhat_ideal(sigma, budget);
    auto sections = framework_sections(F);
    int m = F.m();
    long long N = F.N;
    long long tuples = 1;
    for (int i = 0; i < m; ++i) tuples <<= N;

    std::map<std::string, Int> buckets;
    for (const Permutation& tau : enumerate_bruhat_ideal(sigma, budget))
        buckets[encode_states(F, tau)] += 1;

    rep.section_sum = 0;
    rep.partition_pass = true;
    for (long long code = 0; code < tuples; ++code) {
        std::vector<std::vector<int>> states;
        long long c = code;
        for (int i = 0; i < m; ++i) {
            std::vector<int> v(static_cast<std::size_t>(N));
            for (long long j = 0; j < N; ++j) {
                v[static_cast<std::size_t>(j)] = static_cast<int>(c & 1);
                c >>= 1;
            }
            states.push_back(std::move(v));
        }
        Int prod = 1;
        for (int i = 0; i <= m; ++i) {
            const auto& v_in = i == 0 ? std::vector<int>{} : states[static_cast<std::size_t>(i) - 1];
            const auto& v_out = i == m ? std::vector<int>{} : states[static_cast<std::size_t>(i)];
            prod *= count_section(sections[static_cast<std::size_t>(i)], v_in, v_out, budget);
            if (prod == 0) break;
        }
        rep.section_sum += prod;
        Int bucket = 0;
        auto it = buckets.find(encode_states(states));
        if (it != buckets.end()) bucket = it->second;
        if (bucket != prod) rep.partition_pass = false;
    }
    rep.pass = rep.ext_sigma == rep.section_sum && rep.partition_pass;
    return rep;
}

// Random valid toy framework with N = 2 and m = 2 (n <= 12).
inline BruhatFramework random_toy_framework(std::mt19937& rng) {
    BruhatFramework F;
    F.N = 2;
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint32_t>(hi - lo + 1)); };
    int c1 = pick(0, 2), c2 = pick(0, 2), c3 = pick(0, 2);
    long long s1 = c1 + 3;              // values below s1: c1 stables + 2 gap-1 vars
    long long s2 = s1 + c2 + 3;         // values in (s1,s2): c2 stables + 2 gap-2 vars
    F.separators = {s1, s2};
    auto split = [&](long long lo, long long hi) {
        // Pick 2 variable values out of (lo, hi); the rest are stable.
        std::vector<long long> all;
        for (long long v = lo + 1; v < hi; ++v) all.push_back(v);
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<long long> vars(all.begin(), all.begin() + 2);
        std::vector<long long> stables(all.begin() + 2, all.end());
        std::sort(vars.begin(), vars.end(), std::greater<>());
        return std::pair{vars, stables};
    };
    auto [vars1, stab1] = split(0, s1);
    auto [vars2, stab2] = split(s1, s2);
    std::vector<long long> stab3;
    for (int j = 0; j < c3; ++j) stab3.push_back(s2 + 1 + j);
    std::shuffle(stab1.begin(), stab1.end(), rng);
    std::shuffle(stab2.begin(), stab2.end(), rng);
    std::shuffle(stab3.begin(), stab3.end(), rng);
    // Span i+1 interleaves its stables with gap-i variables (kept descending).
    auto interleave = [&](const std::vector<long long>& stables,
                          const std::vector<long long>& vars) {
        std::vector<long long> span = stables;
        for (long long x : vars) {
            std::size_t at = rng() % (span.size() + 1);
            // keep variables in relative order: insert after any earlier variable
            for (std::size_t q = 0; q < span.size(); ++q)
                if (std::find(vars.begin(), vars.end(), span[q]) != vars.end() && at <= q)
                    at = q + 1;
            span.insert(span.begin() + static_cast<long>(at), x);
        }
        return span;
    };
    std::vector<long long> span1 = stab1;
    std::vector<long long> span2 = interleave(stab2, vars1);
    std::vector<long long> span3 = interleave(stab3, vars2);
    F.flat = span1;
    F.flat.push_back(s1);
    F.flat.insert(F.flat.end(), span2.begin(), span2.end());
    F.flat.push_back(s2);
    F.flat.insert(F.flat.end(), span3.begin(), span3.end());
    validate_framework(F);
    return F;
}

inline void serialize_framework(const BruhatFramework& F, const std::string& path) {
    std::ofstream out(path);
    for (long long v : F.flat) out << v << "\n";
}

// ---------------------------------------------------------------------------
// Full-scale assembly.

// A section template: a concrete gate-shaped block sequence (values 1..length
// by item order).  Gate sections are coupled stacks; the initializing and
// testing sections come from build_sigma1 / build_sigma_final.
struct SectionTemplate {
    std::string name;
    BruhatGate gate;        // concrete items (var = -1 everywhere)
    long long length = 0;   // total element count
    bool is_gate = false;   // participates in the balance check
};

struct AssembledFramework {
    long p = 0;
    int k = 0;               // source circuit wire pairs
    long long N = 0;
    long long m = 0;         // separators; sections = m + 1
    long long n = 0;         // total length of sigma
    std::vector<int> section_template_ids;  // size m + 1
    std::vector<SectionTemplate> templates;
};

inline long long gate_length(const BruhatGate& g) {
    long long s = 0;
    for (const auto& it : g.items) {
        if (it.var >= 0) throw precondition_error("gate_length: symbolic item");
        s += it.shift;
    }
    return s;
}

// Concrete simple gate for prime p: parameters take the fixture residues in
// [0, p), the penultimate block p^3 - 1, and z1 absorbs a multiple-of-p slack
// so that |phi| - k = 2 p^3 exactly.
inline BruhatGate concrete_simple_gate(BruhatGateKind kind, long p) {
    BruhatGate g = make_gate(kind);
    long long p3 = static_cast<long long>(p) * p * p;
    if (kind == BruhatGateKind::Identity) {
        g.items[static_cast<std::size_t>(g.penultimate)].var = -1;
        g.items[static_cast<std::size_t>(g.penultimate)].shift = p3 - 1;
        return g;  // |phi| - 1 = p^3
    }
    GateSolutionFixture fx = gate_fixture(kind);
    if (p < fx.min_prime) throw precondition_error("concrete_simple_gate: inadmissible prime");
    long long total = 0;
    int slack_item = -1;
    for (std::size_t i = 0; i < g.items.size(); ++i) {
        auto& it = g.items[i];
        if (it.var >= 1 && it.var <= 5) {
            long long res = rational_mod(fx.z[static_cast<std::size_t>(it.var) - 1], p);
            if (it.var == 1) slack_item = static_cast<int>(i);
            it.shift = res;
            it.var = -1;
            total += res;
        } else if (it.var == 6) {
            it.shift = p3 - 1;
            it.var = -1;
        }
    }
    // |phi| - 2 = p^3 + 4 + total + slack; the fixture sums to -4 mod p.
    long long slack = ((p3 - (4 + total) % p3) % p3 + p3) % p3;
    if (slack % p != 0) throw precondition_error("concrete_simple_gate: slack not a multiple of p");
    g.items[static_cast<std::size_t>(slack_item)].shift += slack;
    if (gate_length(g) - 2 != 2 * p3)
        throw precondition_error("concrete_simple_gate: balance bookkeeping failed");
    return g;
}

// Rewrites a compound gate into section form: output items (which coupling
// leaves interleaved with the body) are moved to the tail in decreasing key
// order, matching how a framework section lists its gap variables.  Wire j
// carries the j-th largest output value, so the wire order is unchanged.
inline void normalize_outputs(BruhatGate& g) {
    std::set<int> out_set(g.outputs.begin(), g.outputs.end());
    std::vector<GateItem> body, outs;
    std::vector<int> new_index(g.items.size(), -1);
    for (std::size_t i = 0; i < g.items.size(); ++i) {
        if (out_set.count(static_cast<int>(i))) continue;
        new_index[i] = static_cast<int>(body.size());
        body.push_back(g.items[i]);
    }
    for (int idx : g.outputs) outs.push_back(g.items[static_cast<std::size_t>(idx)]);
    std::sort(outs.begin(), outs.end(),
              [](const GateItem& a, const GateItem& b) { return b.key < a.key; });
    for (auto& in : g.inputs) in = new_index[static_cast<std::size_t>(in)];
    if (g.penultimate >= 0) g.penultimate = new_index[static_cast<std::size_t>(g.penultimate)];
    g.outputs.clear();
    for (std::size_t j = 0; j < outs.size(); ++j) {
        g.outputs.push_back(static_cast<int>(body.size()));
        body.push_back(outs[j]);
    }
    g.items = std::move(body);
}

// The N-wire compound gate for one circuit layer: the layer's 2-wire gate at
// wires (pos, pos+1), Identity gates elsewhere, coupled top-down with initial
// blocks of length p^3 - 1.
inline BruhatGate layer_section_gate(GateKind kind, int pos, long long N, long p) {
    long long p3 = static_cast<long long>(p) * p * p;
    BruhatGateKind bk;
    switch (kind) {
        case GateKind::Swap: bk = BruhatGateKind::Swap; break;
        case GateKind::AndOr: bk = BruhatGateKind::AndOr; break;
        case GateKind::TestEq: bk = BruhatGateKind::TestEq; break;
        default: throw precondition_error("layer_section_gate: identity layers have no section");
    }
    // Simple gates from wire 1 down to wire N; the 2-wire gate covers pos, pos+1.
    std::vector<BruhatGate> simples;
    for (long long w = 1; w <= N; ++w) {
        if (w == pos) {
            simples.push_back(concrete_simple_gate(bk, p));
            ++w;
        } else {
            simples.push_back(concrete_simple_gate(BruhatGateKind::Identity, p));
        }
    }
    BruhatGate acc = simples.back();
    for (std::size_t i = simples.size() - 1; i-- > 0;) acc = couple(simples[i], acc, p3 - 1);
    normalize_outputs(acc);
    return acc;
}

inline SectionTemplate template_from_wires(const WireSequence& ws, bool outputs,
                                           const std::string& name) {
    SectionTemplate t;
    t.name = name;
    for (const auto& it : ws.seq.items) {
        GateItem gi;
        gi.key = Rat(static_cast<long>(it.first));
        gi.shift = it.length;
        t.gate.items.push_back(gi);
        t.length += it.length;
    }
    auto& wires = outputs ? t.gate.outputs : t.gate.inputs;
    wires = std::vector<int>(ws.wire_items.begin(), ws.wire_items.end());
    return t;
}

// Exact total length of the assembled sigma for a given number of gate
// sections (= layers of the parallel circuit).
inline long long estimate_length(long long layers, int /*k*/, long p) {
    long long p3 = static_cast<long long>(p) * p * p;
    long long q = static_cast<long long>(p) * p - p;
    long long N = 2 * q;
    long long sigma1 = (q + 1) * (p3 - 1) + 2 * q;
    // Per gate section: one 2-wire gate plus N-2 identity gates.  Each
    // coupling step swaps a penultimate block (p^3 - 1) for a restriction
    // block of the same length, so the lengths simply add.
    long long section = (2 * p3 + 2) + (N - 2) * (p3 + 1);
    long long sigma_final = N + p - 1;
    long long separators = layers + 1;
    return (sigma1 - N) + layers * (section - N) + sigma_final + separators;
}

inline AssembledFramework assemble(const RigidCircuit& C, long p) {
    int k = C.wires / 2;
    if (C.wires % 2 != 0 || k < 1) throw precondition_error("assemble: circuit needs wire pairs");
    if (p <= k) throw precondition_error("assemble: requires p > k");
    if (p < 11) throw precondition_error("assemble: requires p >= 11 for the gate fixtures");
    RigidCircuit Cp = parallelize(C, p);
    AssembledFramework F;
    F.p = p;
    F.k = k;
    F.N = Cp.wires;
    F.m = static_cast<long long>(Cp.layers.size()) + 1;

    F.templates.push_back(template_from_wires(build_sigma1(p), true, "sigma1"));
    F.section_template_ids.push_back(0);
    std::map<std::pair<int, int>, int> layer_templates;  // (kind, pos) -> id
    for (const auto& layer : Cp.layers) {
        auto key = std::pair{static_cast<int>(layer.kind), layer.position};
        auto it = layer_templates.find(key);
        if (it == layer_templates.end()) {
            SectionTemplate t;
            t.name = std::string(gate_kind_name(layer.kind)) + "@" + std::to_string(layer.position);
            t.gate = layer_section_gate(layer.kind, layer.position, F.N, p);
            t.length = gate_length(t.gate);
            t.is_gate = true;
            F.templates.push_back(std::move(t));
            it = layer_templates.emplace(key, static_cast<int>(F.templates.size()) - 1).first;
        }
        F.section_template_ids.push_back(it->second);
    }
    F.templates.push_back(template_from_wires(build_sigma_final(p), false, "sigma_final"));
    F.section_template_ids.push_back(static_cast<int>(F.templates.size()) - 1);

    F.n = 0;
    for (std::size_t i = 0; i < F.section_template_ids.size(); ++i) {
        const auto& t = F.templates[static_cast<std::size_t>(F.section_template_ids[i])];
        bool has_outputs = i + 1 < F.section_template_ids.size();
        F.n += t.length - (has_outputs ? F.N : 0);
    }
    F.n += F.m;  // separators
    return F;
}

struct AssembledReport {
    bool pass = true;
    std::vector<std::string> failures;
};

// Structural validation: per-template gate invariants and balance, wire
// counts, key bijectivity, and the length arithmetic (which certifies that
// the flattened sigma tiles 1..n and the separators are monotone, since the
// global layout is an order-preserving offset of the templates).
inline AssembledReport validate_assembled(const AssembledFramework& F) {
    AssembledReport rep;
    auto fail = [&](const std::string& msg) {
        rep.pass = false;
        rep.failures.push_back(msg);
    };
    long long p3 = static_cast<long long>(F.p) * F.p * F.p;
    for (const auto& t : F.templates) {
        std::set<Rat> keys;
        for (const auto& it : t.gate.items) {
            if (it.var >= 0) fail(t.name + ": symbolic item in template");
            if (!keys.insert(it.key).second) fail(t.name + ": duplicate key");
        }
        if (gate_length(t.gate) != t.length) fail(t.name + ": length mismatch");
        if (t.is_gate) {
            if (static_cast<long long>(t.gate.inputs.size()) != F.N ||
                static_cast<long long>(t.gate.outputs.size()) != F.N)
                fail(t.name + ": wire count != N");
            if ((t.length - static_cast<long long>(t.gate.k())) % p3 != 0)
                fail(t.name + ": not balanced mod p^3");
            // Inputs: the N smallest keys, decreasing values, increasing positions.
            std::vector<Rat> sorted;
            for (const auto& it : t.gate.items) sorted.push_back(it.key);
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 0; j < t.gate.inputs.size(); ++j) {
                if (t.gate.inputs[j] < 0 ||
                    t.gate.inputs[j] >= static_cast<int>(t.gate.items.size())) {
                    fail(t.name + ": input index out of range");
                    continue;
                }
                const auto& item = t.gate.items[static_cast<std::size_t>(t.gate.inputs[j])];
                if (item.key != sorted[t.gate.inputs.size() - 1 - j])
                    fail(t.name + ": input keys not the smallest, decreasing");
                if (j > 0 && t.gate.inputs[j] <= t.gate.inputs[j - 1])
                    fail(t.name + ": input positions not increasing");
            }
            // Outputs: the last N positions, decreasing keys.
            int n_items = static_cast<int>(t.gate.items.size());
            for (std::size_t j = 0; j < t.gate.outputs.size(); ++j) {
                if (t.gate.outputs[j] != n_items - static_cast<int>(F.N) + static_cast<int>(j)) {
                    fail(t.name + ": outputs not the last positions");
                    continue;
                }
                if (j > 0 && !(t.gate.items[static_cast<std::size_t>(t.gate.outputs[j])].key <
                               t.gate.items[static_cast<std::size_t>(t.gate.outputs[j - 1])].key))
                    fail(t.name + ": output keys not decreasing");
            }
            // Penultimate block of p^3 - 1 elements immediately before the outputs.
            int pen = t.gate.penultimate;
            if (pen != n_items - static_cast<int>(F.N) - 1)
                fail(t.name + ": penultimate block not before the outputs");
            else if (t.gate.items[static_cast<std::size_t>(pen)].shift != p3 - 1)
                fail(t.name + ": penultimate block size != p^3 - 1");
        } else {
            long long wires = static_cast<long long>(t.gate.inputs.size()) +
                              static_cast<long long>(t.gate.outputs.size());
            if (wires != F.N) fail(t.name + ": wire count != N");
            // Wires decreasing in value, increasing in position.
            const auto& ws = t.gate.inputs.empty() ? t.gate.outputs : t.gate.inputs;
            for (std::size_t j = 0; j + 1 < ws.size(); ++j) {
                if (ws[j] >= ws[j + 1]) fail(t.name + ": wire positions not increasing");
                if (!(t.gate.items[static_cast<std::size_t>(ws[j + 1])].key <
                      t.gate.items[static_cast<std::size_t>(ws[j])].key))
                    fail(t.name + ": wire values not decreasing");
            }
        }
    }
    if (F.section_template_ids.size() != static_cast<std::size_t>(F.m) + 1)
        fail("section count != m + 1");
    long long n = F.m;
    for (std::size_t i = 0; i < F.section_template_ids.size(); ++i) {
        int id = F.section_template_ids[i];
        if (id < 0 || id >= static_cast<int>(F.templates.size())) {
            fail("bad template id");
            continue;
        }
        n += F.templates[static_cast<std::size_t>(id)].length -
             (i + 1 < F.section_template_ids.size() ? F.N : 0);
    }
    if (n != F.n) fail("total length mismatch");
    return rep;
}

// Plain-text manifest: "n m k p" then one line per section.  Offsets are
// 1-based element positions of each section's span in the flattened sigma.
inline void write_manifest(const AssembledFramework& F, std::ostream& out) {
    out << F.n << " " << F.m << " " << F.k << " " << F.p << "\n";
    long long offset = 1;
    for (std::size_t i = 0; i < F.section_template_ids.size(); ++i) {
        const auto& t = F.templates[static_cast<std::size_t>(F.section_template_ids[i])];
        out << "section " << i + 1 << " " << offset << " " << t.length << "\n";
        bool has_outputs = i + 1 < F.section_template_ids.size();
        offset += t.length - (has_outputs ? F.N : 0) + 1;  // span + separator
    }
}

// Streams the flattened sigma as newline-separated decimal values, one
// section at a time (memory stays O(section)).  Each section's value range
// covers its non-input items; its output singles physically occupy the next
// section's input slots, and the separator s_i takes the value just above
// section i's range.
inline void write_sigma(const AssembledFramework& F, std::ostream& out) {
    // Per-template item layout: offset of each non-input item within the
    // section's value range (key order), or -1 for input items.
    struct Layout {
        std::vector<long long> start;
        long long nonin_len = 0;
    };
    std::vector<Layout> layouts(F.templates.size());
    std::vector<char> done(F.templates.size(), 0);
    auto layout_of = [&](int id) -> const Layout& {
        if (!done[static_cast<std::size_t>(id)]) {
            const auto& g = F.templates[static_cast<std::size_t>(id)].gate;
            Layout lay;
            lay.start.assign(g.items.size(), -1);
            std::set<int> ins(g.inputs.begin(), g.inputs.end());
            std::vector<int> order;
            for (std::size_t i = 0; i < g.items.size(); ++i)
                if (!ins.count(static_cast<int>(i))) order.push_back(static_cast<int>(i));
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return g.items[static_cast<std::size_t>(a)].key <
                                                 g.items[static_cast<std::size_t>(b)].key; });
            for (int idx : order) {
                lay.start[static_cast<std::size_t>(idx)] = lay.nonin_len;
                lay.nonin_len += g.items[static_cast<std::size_t>(idx)].shift;
            }
            layouts[static_cast<std::size_t>(id)] = std::move(lay);
            done[static_cast<std::size_t>(id)] = 1;
        }
        return layouts[static_cast<std::size_t>(id)];
    };
    std::vector<long long> prev_out;  // global values of the previous outputs, wire order
    long long base = 1;
    for (std::size_t s = 0; s < F.section_template_ids.size(); ++s) {
        int id = F.section_template_ids[s];
        const auto& g = F.templates[static_cast<std::size_t>(id)].gate;
        const Layout& lay = layout_of(id);
        std::vector<int> input_wire(g.items.size(), -1);
        for (std::size_t j = 0; j < g.inputs.size(); ++j)
            input_wire[static_cast<std::size_t>(g.inputs[j])] = static_cast<int>(j);
        std::set<int> outs(g.outputs.begin(), g.outputs.end());
        for (std::size_t i = 0; i < g.items.size(); ++i) {
            if (outs.count(static_cast<int>(i))) continue;  // written in the next span
            if (input_wire[i] >= 0) {
                out << prev_out[static_cast<std::size_t>(input_wire[i])] << "\n";
                continue;
            }
            long long v0 = base + lay.start[i];
            for (long long v = v0; v < v0 + g.items[i].shift; ++v) out << v << "\n";
        }
        std::vector<long long> next_out;
        for (int idx : g.outputs) next_out.push_back(base + lay.start[static_cast<std::size_t>(idx)]);
        bool last = s + 1 == F.section_template_ids.size();
        if (!last) out << base + lay.nonin_len << "\n";  // separator s_{i}
        base += lay.nonin_len + (last ? 0 : 1);
        prev_out = std::move(next_out);
    }
}

struct CompileResult {
    AssembledFramework framework;
    bool sigma_written = false;
};

// End-to-end pipeline: 3CNF -> rigid circuit -> assembled framework.  The
// manifest is always written; the full sigma stream is emitted only when n
// fits the element budget (it grows past 10^11 for real instances).
inline CompileResult compile_end_to_end(const CnfFormula& f, long p, std::ostream& manifest,
                                        std::ostream* sigma = nullptr,
                                        long long element_budget = 50'000'000) {
    RigidCircuit C = reduce_3sat(f);
    CompileResult res{assemble(C, p), false};
    write_manifest(res.framework, manifest);
    if (sigma != nullptr) {
        if (res.framework.n > element_budget)
            throw resource_limit_error("compile_end_to_end: sigma length " +
                                       std::to_string(res.framework.n) +
                                       " exceeds the serialization budget");
        write_sigma(res.framework, *sigma);
        res.sigma_written = true;
    }
    return res;
}

}  // namespace lec

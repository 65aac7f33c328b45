#pragma once
// Bruhat logic gates: the rtimes evaluation, restriction, left/middle/right
// insertions, coupling, the parametrized-count polynomial engine, equation
// systems driving the gate search, and the initializing/testing sequences
// sigma_1 and sigma_final together with their congruence verifiers.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <lec/blockseq.hpp>
#include <lec/bruhat.hpp>
#include <lec/core.hpp>
#include <lec/errors.hpp>
#include <lec/numtheory.hpp>
#include <lec/poly.hpp>

namespace lec {

enum class BruhatGateKind { Identity, Swap, AndOr, TestEq };

inline const char* bruhat_gate_kind_name(BruhatGateKind k) {
    switch (k) {
        case BruhatGateKind::Identity: return "identity";
        case BruhatGateKind::Swap: return "swap";
        case BruhatGateKind::AndOr: return "andor";
        case BruhatGateKind::TestEq: return "testeq";
    }
    return "?";
}

// One entry of a gate body.  var < 0 marks a concrete single element.
// var in [0, 6] marks a block of symbolic length z_var + shift; z0 is the
// initial (restriction) block and z6 the penultimate block.  Keys order the
// items by value; blocks never interleave, so one key per item suffices.
struct GateItem {
    Rat key;
    int var = -1;
    long long shift = 1;
};

struct BruhatGate {
    std::vector<GateItem> items;  // position order
    std::vector<int> inputs;      // item indices; wire 1 carries the largest input value
    std::vector<int> outputs;     // item indices; wire 1 is the leftmost output position
    int penultimate = -1;         // item index of the penultimate block, or -1

    int k() const { return static_cast<int>(inputs.size()); }
};

// ---------------------------------------------------------------------------
// Construction of gate bodies.

// Builds a gate from a one-line pattern.  Values listed in `param_values`
// become blocks z1..z5 (in increasing value order); `pen_value` becomes the
// penultimate block z6.  The k smallest remaining values are the inputs and
// the last k positions the outputs.
inline BruhatGate gate_from_pattern(const std::vector<int>& pattern,
                                    const std::vector<int>& param_values,
                                    int pen_value, int k) {
    BruhatGate g;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        GateItem it;
        it.key = Rat(pattern[i]);
        auto pv = std::find(param_values.begin(), param_values.end(), pattern[i]);
        if (pv != param_values.end()) {
            it.var = 1 + static_cast<int>(pv - param_values.begin());
            it.shift = 0;
        } else if (pattern[i] == pen_value) {
            it.var = 6;
            it.shift = 0;
            g.penultimate = static_cast<int>(i);
        }
        g.items.push_back(it);
    }
    // Inputs: the k smallest non-block values, wire 1 = largest of them.
    std::vector<std::pair<int, int>> singles;  // (value, index)
    for (std::size_t i = 0; i < g.items.size(); ++i)
        if (g.items[i].var < 0)
            singles.push_back({pattern[i], static_cast<int>(i)});
    std::sort(singles.begin(), singles.end());
    if (static_cast<int>(singles.size()) < 2 * k)
        throw precondition_error("gate_from_pattern: too few single elements");
    for (int j = k - 1; j >= 0; --j) g.inputs.push_back(singles[j].second);
    for (std::size_t i = g.items.size() - k; i < g.items.size(); ++i)
        g.outputs.push_back(static_cast<int>(i));
    return g;
}

inline BruhatGate make_gate(BruhatGateKind kind) {
    switch (kind) {
        case BruhatGateKind::Identity:
            return gate_from_pattern({1, 2, 3}, {}, 2, 1);
        case BruhatGateKind::Swap:
            return gate_from_pattern({2, 3, 12, 4, 1, 5, 10, 6, 13, 7, 8, 11, 9},
                                     {3, 4, 5, 6, 7}, 8, 2);
        case BruhatGateKind::AndOr:
            return gate_from_pattern({2, 3, 13, 4, 11, 5, 1, 6, 10, 7, 8, 12, 9},
                                     {3, 4, 5, 6, 7}, 8, 2);
        case BruhatGateKind::TestEq:
            return gate_from_pattern({2, 3, 12, 4, 10, 5, 1, 6, 13, 7, 8, 11, 9},
                                     {3, 4, 5, 6, 7}, 8, 2);
    }
    throw precondition_error("make_gate: unknown kind");
}

// The collapsed length-8 base body of a two-wire gate (parameter blocks
// removed, remaining values renumbered 1..8).
inline Permutation collapse_base(BruhatGateKind kind) {
    BruhatGate g = make_gate(kind);
    std::vector<int> vals;
    for (const auto& it : g.items)
        if (it.var < 0 || it.var == 6)
            vals.push_back(static_cast<int>(it.key.get_num().get_si()));
    std::vector<long long> seq(vals.begin(), vals.end());
    return relabel(seq);
}

// ---------------------------------------------------------------------------
// The rtimes operation and structural edits.

// Deletes input variables carrying a 0 bit and output variables carrying a
// 1 bit.  The result has no wires; counting applies afterwards.
inline BruhatGate evaluate_gate(const BruhatGate& g, const std::vector<int>& v_in,
                                const std::vector<int>& v_out) {
    if (static_cast<int>(v_in.size()) != g.k() || static_cast<int>(v_out.size()) != g.k())
        throw precondition_error("evaluate_gate: bit-vector length mismatch");
    std::set<int> dead;
    for (int j = 0; j < g.k(); ++j) {
        if (v_in[j] == 0) dead.insert(g.inputs[j]);
        if (v_out[j] == 1) dead.insert(g.outputs[j]);
    }
    BruhatGate r;
    for (std::size_t i = 0; i < g.items.size(); ++i) {
        if (dead.count(static_cast<int>(i))) continue;
        if (g.penultimate == static_cast<int>(i))
            r.penultimate = static_cast<int>(r.items.size());
        r.items.push_back(g.items[i]);
    }
    return r;
}

inline Rat min_key(const BruhatGate& g) {
    Rat m = g.items.at(0).key;
    for (const auto& it : g.items) m = std::min(m, it.key);
    return m;
}

inline Rat max_key(const BruhatGate& g) {
    Rat m = g.items.at(0).key;
    for (const auto& it : g.items) m = std::max(m, it.key);
    return m;
}

// Prepends the initial block (symbolic length z0) of values above the body.
inline BruhatGate restrict_gate(const BruhatGate& g) {
    BruhatGate r = g;
    GateItem init;
    init.key = max_key(g) + 1;
    init.var = 0;
    init.shift = 0;
    r.items.insert(r.items.begin(), init);
    for (auto& idx : r.inputs) ++idx;
    for (auto& idx : r.outputs) ++idx;
    if (r.penultimate >= 0) ++r.penultimate;
    return r;
}

// Left insertion: a new minimum immediately to the left of the penultimate.
inline BruhatGate insert_L(const BruhatGate& g) {
    if (g.penultimate < 0) throw precondition_error("insert_L: no penultimate block");
    BruhatGate r = g;
    GateItem e;
    e.key = min_key(g) - 1;
    r.items.insert(r.items.begin() + r.penultimate, e);
    for (auto& idx : r.inputs)
        if (idx >= g.penultimate) ++idx;
    for (auto& idx : r.outputs)
        if (idx >= g.penultimate) ++idx;
    ++r.penultimate;
    return r;
}

// Middle insertion: grows the penultimate block by one.
inline BruhatGate insert_M(const BruhatGate& g) {
    if (g.penultimate < 0) throw precondition_error("insert_M: no penultimate block");
    BruhatGate r = g;
    ++r.items[r.penultimate].shift;
    return r;
}

inline BruhatGate insert_M_inverse(const BruhatGate& g) {
    if (g.penultimate < 0) throw precondition_error("insert_M_inverse: no penultimate block");
    BruhatGate r = g;
    --r.items[r.penultimate].shift;
    return r;
}

// Right insertion: one-more-than-the-penultimate-max appended at the end.
inline BruhatGate insert_R(const BruhatGate& g) {
    if (g.penultimate < 0) throw precondition_error("insert_R: no penultimate block");
    BruhatGate r = g;
    Rat pen = g.items[g.penultimate].key;
    Rat next = max_key(g) + 2;  // smallest key above the penultimate block
    for (const auto& it : g.items)
        if (it.key > pen) next = std::min(next, it.key);
    GateItem e;
    e.key = (pen + next) / 2;
    r.items.push_back(e);
    return r;
}

// Applies a word of insertions given as a string over {'L','M','R'}.
inline BruhatGate insert_word(const BruhatGate& g, const std::string& word) {
    BruhatGate r = g;
    for (char c : word) {
        if (c == 'L') r = insert_L(r);
        else if (c == 'M') r = insert_M(r);
        else if (c == 'R') r = insert_R(r);
        else throw precondition_error("insert_word: bad letter");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Concrete expansion and sizes.

// Expands to a block sequence with concrete lengths z0..z6.  Items expand in
// position order; values are allocated by key order.
inline BlockSequence expand_gate(const BruhatGate& g, const std::array<long long, 7>& z) {
    std::vector<int> order(g.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.items[a].key < g.items[b].key; });
    std::vector<long long> start(g.items.size());
    long long next = 1;
    for (int idx : order) {
        const GateItem& it = g.items[idx];
        long long len = it.var < 0 ? it.shift : z[it.var] + it.shift;
        if (len < 0) throw precondition_error("expand_gate: negative block length");
        start[idx] = next;
        next += len;
    }
    BlockSequence seq;
    for (std::size_t i = 0; i < g.items.size(); ++i) {
        const GateItem& it = g.items[i];
        long long len = it.var < 0 ? it.shift : z[it.var] + it.shift;
        if (len == 0) continue;
        if (len == 1) seq.items.push_back(BlockItem::single(start[i]));
        else seq.items.push_back(BlockItem::block(start[i], len));
    }
    return seq;
}

// |phi| as a polynomial in z0..z6.
inline MultiPoly gate_size_poly(const BruhatGate& g) {
    MultiPoly s = MultiPoly::constant(Rat(0));
    for (const auto& it : g.items) {
        if (it.var < 0) s += MultiPoly::constant(Rat(Int(static_cast<long>(it.shift))));
        else s += MultiPoly::variable(it.var) + MultiPoly::constant(Rat(Int(static_cast<long>(it.shift))));
    }
    return s;
}

// Checks the invariants of a simple (uncoupled) gate body.
inline bool check_gate_invariants(const BruhatGate& g) {
    int k = g.k();
    if (k == 0 || static_cast<int>(g.outputs.size()) != k) return false;
    // Inputs: the k smallest keys, in strictly decreasing order of value.
    std::vector<Rat> keys;
    for (const auto& it : g.items) keys.push_back(it.key);
    std::sort(keys.begin(), keys.end());
    std::set<int> input_set(g.inputs.begin(), g.inputs.end());
    for (int j = 0; j < k; ++j)
        if (!input_set.count(
                static_cast<int>(std::find_if(g.items.begin(), g.items.end(),
                                              [&](const GateItem& it) { return it.key == keys[j]; }) -
                                 g.items.begin())))
            return false;
    for (int j = 0; j + 1 < k; ++j) {
        if (g.items[g.inputs[j]].key <= g.items[g.inputs[j + 1]].key) return false;
        if (g.inputs[j] >= g.inputs[j + 1]) return false;
    }
    // Outputs: the last k positions, strictly decreasing values.
    int n = static_cast<int>(g.items.size());
    for (int j = 0; j < k; ++j)
        if (g.outputs[j] != n - k + j) return false;
    for (int j = 0; j + 1 < k; ++j)
        if (g.items[g.outputs[j]].key <= g.items[g.outputs[j + 1]].key) return false;
    // Penultimate: immediately before the outputs, smaller than all of them.
    if (g.penultimate != n - k - 1) return false;
    for (int j = 0; j < k; ++j)
        if (g.items[g.penultimate].key >= g.items[g.outputs[j]].key) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parametrized-count polynomial engine.

// ext(phi[x -> z]) as a polynomial in the symbolic block lengths.  The gate
// must already be evaluated (no wires need deleting).  For each ideal element
// below the collapsed body, each symbolic block contributes
// sum_{h<=l} sum_{j<=r} C(z+h+j-2, h) C(z+j-2, j), where l counts adjacent
// larger elements on the left and r adjacent smaller elements on the right.
inline MultiPoly ext_polynomial(const BruhatGate& g, long long budget = 10'000'000) {
    int m = static_cast<int>(g.items.size());
    for (const auto& it : g.items)
        if (it.var < 0 && it.shift != 1)
            throw precondition_error("ext_polynomial: concrete multi-element runs unsupported");
    // Collapsed permutation: value = rank of key.
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.items[a].key < g.items[b].key; });
    std::vector<int> rank(m);
    for (int r = 0; r < m; ++r) rank[order[r]] = r + 1;
    Permutation base;
    base.entries.assign(rank.begin(), rank.end());
    // value -> (var, shift) of symbolic blocks.
    std::vector<int> sym_value;
    std::vector<int> sym_var;
    std::vector<long long> sym_shift;
    for (int i = 0; i < m; ++i)
        if (g.items[i].var >= 0) {
            sym_value.push_back(rank[i]);
            sym_var.push_back(g.items[i].var);
            sym_shift.push_back(g.items[i].shift);
        }
    auto ideal = enumerate_bruhat_ideal(base, budget);
    // Group ideal elements by their adjacency profile.
    std::map<std::vector<int>, long long> profiles;
    std::vector<int> pos(m + 1);
    for (const auto& tau : ideal) {
        for (int i = 0; i < m; ++i) pos[tau.entries[i]] = i;
        std::vector<int> prof;
        prof.reserve(sym_value.size() * 2);
        for (std::size_t s = 0; s < sym_value.size(); ++s) {
            int v = sym_value[s];
            int p = pos[v];
            int l = 0, r = 0;
            for (int q = p - 1; q >= 0 && tau.entries[q] > v; --q) ++l;
            for (int q = p + 1; q < m && tau.entries[q] < v; ++q) ++r;
            prof.push_back(l);
            prof.push_back(r);
        }
        ++profiles[prof];
    }
    // term(var, shift, l, r); memoized.
    std::map<std::tuple<int, long long, int, int>, MultiPoly> memo;
    auto term = [&](int var, long long shift, int l, int r) -> const MultiPoly& {
        auto key = std::make_tuple(var, shift, l, r);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        MultiPoly t = MultiPoly::constant(Rat(0));
        for (int h = 0; h <= l; ++h)
            for (int j = 0; j <= r; ++j)
                t += falling_binomial_poly(var, shift + h + j - 2, h) *
                     falling_binomial_poly(var, shift + j - 2, j);
        return memo.emplace(key, std::move(t)).first->second;
    };
    MultiPoly g_poly = MultiPoly::constant(Rat(0));
    for (const auto& [prof, count] : profiles) {
        MultiPoly prod = MultiPoly::constant(Rat(Int(static_cast<long>(count))));
        for (std::size_t s = 0; s < sym_value.size(); ++s)
            prod *= term(sym_var[s], sym_shift[s], prof[2 * s], prof[2 * s + 1]);
        g_poly += prod;
    }
    return g_poly;
}

inline MultiPoly ext_polynomial(const BruhatGate& g, const std::vector<int>& v_in,
                                const std::vector<int>& v_out,
                                long long budget = 10'000'000) {
    return ext_polynomial(evaluate_gate(g, v_in, v_out), budget);
}

// ---------------------------------------------------------------------------
// Coupling.

// phi AND phi': phi' is restricted (initial block of concrete length z0_len)
// and put in place of phi's penultimate block.  Pair keys: phi elements
// (x, 0); phi' inputs (0, x); other phi' elements (y, x) with y the key of
// phi's penultimate block.  Wires: phi's wires first, then phi''s.
inline BruhatGate couple(const BruhatGate& phi, const BruhatGate& phi_prime,
                         long long z0_len) {
    if (phi.penultimate < 0) throw precondition_error("couple: phi has no penultimate block");
    BruhatGate pr = restrict_gate(phi_prime);
    pr.items[0].var = -1;  // make the initial block concrete
    pr.items[0].shift = z0_len;
    Rat y = phi.items[phi.penultimate].key;
    std::set<int> pr_inputs(pr.inputs.begin(), pr.inputs.end());

    struct Tmp {
        Rat k1, k2;
        GateItem item;
        int tag;  // 0: phi input, 1: phi output, 2: phi' input, 3: phi' output, -1: none
        int wire;
    };
    std::vector<Tmp> flat;
    auto tag_of = [](const BruhatGate& g, int idx) -> std::pair<int, int> {
        for (std::size_t j = 0; j < g.inputs.size(); ++j)
            if (g.inputs[j] == idx) return {0, static_cast<int>(j)};
        for (std::size_t j = 0; j < g.outputs.size(); ++j)
            if (g.outputs[j] == idx) return {1, static_cast<int>(j)};
        return {-1, 0};
    };
    for (int i = 0; i < static_cast<int>(phi.items.size()); ++i) {
        if (i == phi.penultimate) {
            for (int j = 0; j < static_cast<int>(pr.items.size()); ++j) {
                Tmp t;
                t.item = pr.items[j];
                if (pr_inputs.count(j)) t.k1 = Rat(0);
                else t.k1 = y;
                t.k2 = pr.items[j].key;
                auto [tg, w] = tag_of(pr, j);
                t.tag = tg < 0 ? -1 : tg + 2;
                t.wire = w;
                if (j == pr.penultimate) t.tag = 4;  // marker reused below
                flat.push_back(t);
            }
            continue;
        }
        Tmp t;
        t.item = phi.items[i];
        t.k1 = phi.items[i].key;
        t.k2 = Rat(0);
        auto [tg, w] = tag_of(phi, i);
        t.tag = tg;
        t.wire = w;
        flat.push_back(t);
    }
    // Lexicographic relabel of the pair keys.
    std::vector<int> order(flat.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (flat[a].k1 != flat[b].k1) return flat[a].k1 < flat[b].k1;
        return flat[a].k2 < flat[b].k2;
    });
    BruhatGate out;
    out.items.resize(flat.size());
    std::vector<int> newkey(flat.size());
    for (std::size_t r = 0; r < order.size(); ++r) newkey[order[r]] = static_cast<int>(r) + 1;
    out.inputs.assign(phi.inputs.size() + phi_prime.inputs.size(), -1);
    out.outputs.assign(phi.outputs.size() + phi_prime.outputs.size(), -1);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        out.items[i] = flat[i].item;
        out.items[i].key = Rat(newkey[i]);
        int kphi = static_cast<int>(phi.inputs.size());
        if (flat[i].tag == 0) out.inputs[flat[i].wire] = static_cast<int>(i);
        else if (flat[i].tag == 1) out.outputs[flat[i].wire] = static_cast<int>(i);
        else if (flat[i].tag == 2) out.inputs[kphi + flat[i].wire] = static_cast<int>(i);
        else if (flat[i].tag == 3)
            out.outputs[phi.outputs.size() + flat[i].wire] = static_cast<int>(i);
        else if (flat[i].tag == 4) out.penultimate = static_cast<int>(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equation systems.

enum class SlotTarget { ZeroModP3, One, Zero, NonZero };

struct EquationSlot {
    std::string name;
    MultiPoly poly;    // z6 already substituted by -1; z0 eliminated exactly
    SlotTarget target;
};

// The six equal-wire-count truth-table pairs in lexicographic order.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> truth_table_pairs() {
    return {{{0, 0}, {0, 0}}, {{0, 1}, {0, 1}}, {{0, 1}, {1, 0}},
            {{1, 0}, {0, 1}}, {{1, 0}, {1, 0}}, {{1, 1}, {1, 1}}};
}

// Whether (v_in -> v_out) satisfies the logic relation of `kind` (two wires).
inline bool gate_relation_holds(BruhatGateKind kind, const std::vector<int>& v_in,
                                const std::vector<int>& v_out) {
    int a = v_in[0], b = v_in[1];
    switch (kind) {
        case BruhatGateKind::Identity: return v_out[0] == a;
        case BruhatGateKind::Swap: return v_out[0] == b && v_out[1] == a;
        case BruhatGateKind::AndOr: return v_out[0] == (a & b) && v_out[1] == (a | b);
        case BruhatGateKind::TestEq: return a == b && v_out[0] == a && v_out[1] == b;
    }
    return false;
}

// Slot order: balance, the insertion congruences (2)-(6) (or (8) for the
// Identity gate), then the truth-table slots in lexicographic order.  The
// initial block z0 contributes an exact factor C(|phi rtimes| + z0, z0) that
// is 1 mod p at every slot of a balanced gate, so the insertion polynomials
// are generated from the unrestricted body; z6 is substituted by -1, which
// agrees with p^3 - 1 modulo p.
inline std::vector<EquationSlot> generate_equation_system(const BruhatGate& base,
                                                          BruhatGateKind kind,
                                                          long long budget = 10'000'000) {
    std::vector<EquationSlot> slots;
    int k = base.k();
    MultiPoly balance = gate_size_poly(base) - MultiPoly::constant(Rat(k));
    slots.push_back({"balance", balance.substitute(6, Rat(-1)), SlotTarget::ZeroModP3});

    auto insertion_slot = [&](const std::string& name, const std::vector<int>& v_in,
                              const std::vector<int>& v_out,
                              const std::vector<std::pair<std::string, int>>& combo) {
        MultiPoly sum = MultiPoly::constant(Rat(0));
        for (const auto& [word, coeff] : combo) {
            BruhatGate h = insert_word(base, word);
            sum += Rat(coeff) * ext_polynomial(h, v_in, v_out, budget);
        }
        slots.push_back({name, sum.substitute(6, Rat(-1)), SlotTarget::Zero});
    };
    const std::vector<std::pair<std::string, int>> first_order = {
        {"M", -2}, {"L", 1}, {"R", 1}};
    const std::vector<std::pair<std::string, int>> second_order = {
        {"MM", 2}, {"LM", -4}, {"RM", -4}, {"LL", 1}, {"LR", 2}, {"RR", 1}};
    if (kind == BruhatGateKind::Identity) {
        insertion_slot("eq8 (0,1)", {0}, {1}, first_order);
        return slots;  // two equations for the Identity gate
    }
    insertion_slot("eq2 (10,11)", {1, 0}, {1, 1}, first_order);
    insertion_slot("eq3 (01,11)", {0, 1}, {1, 1}, first_order);
    insertion_slot("eq4 (00,01)", {0, 0}, {0, 1}, first_order);
    insertion_slot("eq5 (00,10)", {0, 0}, {1, 0}, first_order);
    insertion_slot("eq6 (00,11)", {0, 0}, {1, 1}, second_order);

    for (const auto& [v_in, v_out] : truth_table_pairs()) {
        MultiPoly g_poly = ext_polynomial(base, v_in, v_out, budget).substitute(6, Rat(-1));
        bool sat = gate_relation_holds(kind, v_in, v_out);
        SlotTarget target = !sat ? SlotTarget::Zero
                            : (kind == BruhatGateKind::Swap ? SlotTarget::One
                                                            : SlotTarget::NonZero);
        std::string name = "tt (";
        for (int b : v_in) name += char('0' + b);
        name += ",";
        for (int b : v_out) name += char('0' + b);
        name += ")";
        slots.push_back({name, g_poly, target});
    }
    return slots;
}

// ---------------------------------------------------------------------------
// Fixture solutions and verification.

struct GateSolutionFixture {
    BruhatGateKind kind;
    std::array<Rat, 5> z;
    long min_prime;
    std::vector<Rat> nonzero_values;
};

inline GateSolutionFixture gate_fixture(BruhatGateKind kind) {
    switch (kind) {
        case BruhatGateKind::Swap:
            return {kind, {Rat(-1), Rat(-2), Rat(0), Rat(1), Rat(-2)}, 2, {}};
        case BruhatGateKind::AndOr:
            return {kind, {Rat(-2), Rat(1), Rat(-3), Rat(1), Rat(-1)}, 3, {Rat(2), Rat(4)}};
        case BruhatGateKind::TestEq:
            return {kind,
                    {Rat(-2), Rat(-8, 3), Rat(5, 3), Rat(-3), Rat(2)},
                    11,
                    {Rat(7, 3), Rat(-8, 3)}};
        default:
            throw precondition_error("gate_fixture: no fixture for this kind");
    }
}

struct GateVerifyReport {
    bool all_equalities_hold = true;
    std::vector<long> inequation_residues;
    std::vector<std::string> failures;
};

inline Rat eval_slot(const MultiPoly& poly, const std::array<Rat, 5>& z) {
    std::array<Rat, kPolyVars> point;
    point[0] = Rat(-1);
    for (int i = 0; i < 5; ++i) point[i + 1] = z[i];
    point[6] = Rat(-1);
    return poly.eval(point);
}

inline GateVerifyReport verify_solution(BruhatGateKind kind, long p,
                                        long long budget = 10'000'000) {
    GateSolutionFixture fx = gate_fixture(kind);
    if (p < fx.min_prime) throw precondition_error("verify_solution: prime not admissible");
    auto slots = generate_equation_system(make_gate(kind), kind, budget);
    GateVerifyReport rep;
    Int p3 = Int(p) * p * p;
    for (const auto& slot : slots) {
        Rat value = eval_slot(slot.poly, fx.z);
        switch (slot.target) {
            case SlotTarget::ZeroModP3: {
                // Exact rational value must vanish mod p^3.
                Int num = value.get_num(), den = value.get_den();
                Int inv;
                if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p3.get_mpz_t()) == 0)
                    throw precondition_error("verify_solution: denominator not invertible");
                Int r = ((num * inv) % p3 + p3) % p3;
                if (r != 0) {
                    rep.all_equalities_hold = false;
                    rep.failures.push_back(slot.name);
                }
                break;
            }
            case SlotTarget::One:
            case SlotTarget::Zero: {
                long want = slot.target == SlotTarget::One ? 1 : 0;
                if (rational_mod(value, p) != want % p) {
                    rep.all_equalities_hold = false;
                    rep.failures.push_back(slot.name);
                }
                break;
            }
            case SlotTarget::NonZero:
                // Inequation slots are reported, not gated: the pass flag
                // covers the equality slots only.
                rep.inequation_residues.push_back(rational_mod(value, p));
                break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Candidate enumeration and mod-p search.

// Length-8 base bodies: input 2 in position one, input 1 in positions 2-5,
// the penultimate (value 3) third-from-last, the smaller output (value 4)
// last, the larger output in position 7, three free singles in between.
inline std::vector<Permutation> enumerate_candidates() {
    std::vector<Permutation> out;
    std::vector<int> rest = {5, 6, 7, 8};
    for (int pos1 = 1; pos1 <= 4; ++pos1) {         // position of value 1 among slots 2..5
        for (int o1 : rest) {                        // larger output value
            std::vector<int> frees;
            for (int v : rest)
                if (v != o1) frees.push_back(v);
            std::sort(frees.begin(), frees.end());
            do {
                std::vector<int> body = {2};
                int fi = 0;
                for (int s = 1; s <= 4; ++s)
                    body.push_back(s == pos1 ? 1 : frees[fi++]);
                body.push_back(3);
                body.push_back(o1);
                body.push_back(4);
                Permutation perm;
                perm.entries.assign(body.begin(), body.end());
                out.push_back(perm);
            } while (std::next_permutation(frees.begin(), frees.end()));
        }
    }
    return out;
}

// Inserts the five parameter blocks (values 3..7 after shifting) after the
// first five positions of a length-8 base body.
inline BruhatGate gate_from_candidate(const Permutation& base8) {
    if (base8.n() != 8) throw precondition_error("gate_from_candidate: length != 8");
    std::vector<int> body;
    for (int i = 0; i < 8; ++i) {
        int v = base8.entries[i];
        body.push_back(v >= 3 ? v + 5 : v);
        if (i < 5) body.push_back(3 + i);
    }
    return gate_from_pattern(body, {3, 4, 5, 6, 7}, 8, 2);
}

// Exhaustive scan of F_p^5 against the equation system of `candidate` with
// the target semantics of `kind`.  Sorted list of solutions.
inline std::vector<std::array<long, 5>> search_solutions_mod_p(const BruhatGate& candidate,
                                                               BruhatGateKind kind, long p,
                                                               long long budget = 10'000'000) {
    if (p > 13) throw resource_limit_error("search_solutions_mod_p: p > 13");
    auto slots = generate_equation_system(candidate, kind, budget);
    std::vector<std::array<long, 5>> sols;
    std::array<long, kPolyVars> pt{};
    pt[0] = p - 1;  // z0 = -1 mod p (eliminated; unused by the polynomials)
    pt[6] = p - 1;  // z6 = -1 mod p
    std::array<long, 5> z{};
    auto target_ok = [p](const EquationSlot& s, long r) {
        switch (s.target) {
            case SlotTarget::ZeroModP3: return r == 0;  // necessary condition mod p
            case SlotTarget::One: return r == 1 % p;
            case SlotTarget::Zero: return r == 0;
            case SlotTarget::NonZero: return true;  // reported, not gated
        }
        return false;
    };
    while (true) {
        for (int i = 0; i < 5; ++i) pt[i + 1] = z[i];
        bool ok = true;
        for (const auto& slot : slots) {
            long r = slot.poly.eval_mod(pt, p);
            if (!target_ok(slot, r)) {
                ok = false;
                break;
            }
        }
        if (ok) sols.push_back(z);
        int i = 4;
        while (i >= 0 && z[i] == p - 1) z[i--] = 0;
        if (i < 0) break;
        ++z[i];
    }
    std::sort(sols.begin(), sols.end());
    return sols;
}

// ---------------------------------------------------------------------------
// sigma_1 and sigma_{m+1}.

struct WireSequence {
    BlockSequence seq;
    std::vector<int> wire_items;  // item index of wire a_1, a_2, ...
};

// Compact labels: items ordered by value, blocks counted as one element.
inline std::vector<std::pair<bool, int>> compact_labels(const BlockSequence& seq) {
    std::vector<int> order(seq.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return seq.items[a].first < seq.items[b].first; });
    std::vector<int> label(seq.items.size());
    for (std::size_t r = 0; r < order.size(); ++r) label[order[r]] = static_cast<int>(r) + 1;
    std::vector<std::pair<bool, int>> out;
    for (std::size_t i = 0; i < seq.items.size(); ++i)
        out.push_back({seq.items[i].is_block, label[i]});
    return out;
}

// sigma_1 before the duplication step: q+1 blocks of size p^3-1 in
// decreasing order followed by q variables in decreasing order, the j-th
// variable valued between blocks j and j+1.
inline WireSequence build_sigma1_predup(long p) {
    long long s = static_cast<long long>(p) * p * p - 1;
    long long q = static_cast<long long>(p) * p - p;
    WireSequence ws;
    for (long long j = q + 1; j >= 1; --j)
        ws.seq.items.push_back(BlockItem::block((j - 1) * (s + 1) + 1, s));
    for (long long j = q; j >= 1; --j) {
        ws.wire_items.push_back(static_cast<int>(ws.seq.items.size()));
        ws.seq.items.push_back(BlockItem::single(j * (s + 1)));
    }
    return ws;
}

// sigma_1: every variable duplicated in place, everything re-shifted so the
// trailing 2q variables are distinct and strictly decreasing.
inline WireSequence build_sigma1(long p) {
    long long s = static_cast<long long>(p) * p * p - 1;
    long long q = static_cast<long long>(p) * p - p;
    WireSequence ws;
    for (long long j = q + 1; j >= 1; --j)
        ws.seq.items.push_back(BlockItem::block((j - 1) * (s + 2) + 1, s));
    for (long long j = q; j >= 1; --j) {
        ws.wire_items.push_back(static_cast<int>(ws.seq.items.size()));
        ws.seq.items.push_back(BlockItem::single(j * (s + 2)));
        ws.wire_items.push_back(static_cast<int>(ws.seq.items.size()));
        ws.seq.items.push_back(BlockItem::single(j * (s + 2) - 1));
    }
    return ws;
}

// sigma_{m+1}: (N, ..., 1) with dividers N+1..N+p-1 inserted after the first
// p-1 groups of 2p-1 wires; the final group holds p-1 wires.
inline WireSequence build_sigma_final(long p) {
    long long N = 2LL * p * p - 2 * p;
    WireSequence ws;
    long long value = N;
    long long divider = N + 1;
    for (long g = 0; g < p - 1; ++g) {
        for (long t = 0; t < 2 * p - 1; ++t) {
            ws.wire_items.push_back(static_cast<int>(ws.seq.items.size()));
            ws.seq.items.push_back(BlockItem::single(value--));
        }
        ws.seq.items.push_back(BlockItem::single(divider++));
    }
    while (value >= 1) {
        ws.wire_items.push_back(static_cast<int>(ws.seq.items.size()));
        ws.seq.items.push_back(BlockItem::single(value--));
    }
    return ws;
}

inline BlockSequence delete_items(const BlockSequence& seq, const std::set<int>& dead) {
    BlockSequence out;
    for (std::size_t i = 0; i < seq.items.size(); ++i)
        if (!dead.count(static_cast<int>(i))) out.items.push_back(seq.items[i]);
    return out;
}

struct LemmaReport {
    bool pass = true;
    std::vector<std::string> failures;
};

// Lemma "init" at prime p: count(sigma_1 rtimes (empty, v)) mod p is 1 when
// exactly one of each wire pair carries a 1, and 0 otherwise.
inline LemmaReport verify_init_lemma(long p) {
    if (p != 2) throw resource_limit_error("verify_init_lemma: only p = 2 is countable");
    WireSequence ws = build_sigma1(p);
    long long N = static_cast<long long>(ws.wire_items.size());
    LemmaReport rep;
    for (long long v = 0; v < (1LL << N); ++v) {
        std::set<int> dead;
        for (long long j = 0; j < N; ++j)
            if ((v >> j) & 1) dead.insert(ws.wire_items[j]);
        long got = count_blockseq_ideal_mod(delete_items(ws.seq, dead), p);
        bool good = true;
        for (long long i = 0; i < N / 2; ++i) {
            int ones = ((v >> (2 * i)) & 1) + ((v >> (2 * i + 1)) & 1);
            if (ones != 1) good = false;
        }
        long want = good ? 1 : 0;
        if (got != want) {
            rep.pass = false;
            rep.failures.push_back("v=" + std::to_string(v));
        }
    }
    return rep;
}

// Lemma "TestingWires" at prime p: for |v| = p^2 - p, the residue is -1 when
// the last wire reads 1 and 0 otherwise (0-bit wires are deleted).
inline LemmaReport verify_testing_lemma(long p) {
    if (p != 2) throw resource_limit_error("verify_testing_lemma: only p = 2 is countable");
    WireSequence ws = build_sigma_final(p);
    long long N = static_cast<long long>(ws.wire_items.size());
    long long want_pop = static_cast<long long>(p) * p - p;
    LemmaReport rep;
    for (long long v = 0; v < (1LL << N); ++v) {
        if (__builtin_popcountll(static_cast<unsigned long long>(v)) != want_pop) continue;
        std::set<int> dead;
        for (long long j = 0; j < N; ++j)
            if (((v >> j) & 1) == 0) dead.insert(ws.wire_items[j]);
        long got = count_blockseq_ideal_mod(delete_items(ws.seq, dead), p);
        long want = ((v >> (N - 1)) & 1) ? (p - 1) : 0;
        if (got != want) {
            rep.pass = false;
            rep.failures.push_back("v=" + std::to_string(v));
        }
    }
    return rep;
}

}  // namespace lec

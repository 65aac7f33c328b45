#pragma once

// circuit.hpp: specialized rigid circuits — F2 wire states, the four simple
// gates (Identity, Swap, AndOr, TestEq), evaluation with short-out, exact
// satisfying-assignment counting, the parsimonious #3SAT reduction, and the
// mod-p parallel circuit.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"
#include "numtheory.hpp"

namespace lec {

enum class GateKind { Identity, Swap, AndOr, TestEq };

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Identity: return "identity";
        case GateKind::Swap: return "swap";
        case GateKind::AndOr: return "andor";
        case GateKind::TestEq: return "testeq";
    }
    return "?";
}

// One compound gate layer: a single non-Identity simple gate at `position`
// (1-based top wire), all other coupled positions Identity.
struct CircuitLayer {
    GateKind kind = GateKind::Identity;
    int position = 1;
};

// Wire-state vector over F2; initial states pair wires as (a_i, not a_i).
struct CircuitState {
    std::vector<uint8_t> bits;

    int wires() const { return static_cast<int>(bits.size()); }
    long popcount() const {
        long c = 0;
        for (uint8_t b : bits) c += b;
        return c;
    }
};

struct RigidCircuit {
    int wires = 0;  // always even, = 2k
    std::vector<CircuitLayer> layers;

    int k() const { return wires / 2; }
};

// Applies one layer; returns nullopt on short-out (TestEq with unequal bits).
inline std::optional<CircuitState> apply_gate(const CircuitState& s, const CircuitLayer& layer) {
    int pos = layer.position;
    if (layer.kind != GateKind::Identity) {
        if (pos < 1 || pos + 1 > s.wires())
            throw precondition_error("apply_gate: position out of range");
    }
    CircuitState t = s;
    uint8_t a = 0, b = 0;
    if (layer.kind != GateKind::Identity) {
        a = s.bits[static_cast<size_t>(pos - 1)];
        b = s.bits[static_cast<size_t>(pos)];
    }
    switch (layer.kind) {
        case GateKind::Identity:
            break;
        case GateKind::Swap:
            t.bits[static_cast<size_t>(pos - 1)] = b;
            t.bits[static_cast<size_t>(pos)] = a;
            break;
        case GateKind::AndOr:
            t.bits[static_cast<size_t>(pos - 1)] = a & b;
            t.bits[static_cast<size_t>(pos)] = a | b;
            break;
        case GateKind::TestEq:
            if (a != b) return std::nullopt;
            break;
    }
    return t;
}

// Full trace of a run: v1..vm, or short-circuited early.
struct CircuitTrace {
    std::vector<CircuitState> states;
    bool shorted = false;
    bool satisfying = false;  // no short-out and last wire of the final state is 1
};

inline CircuitState initial_state(const RigidCircuit& C, const std::vector<uint8_t>& assignment) {
    if (static_cast<int>(assignment.size()) != C.k())
        throw precondition_error("initial_state: assignment length != k");
    CircuitState v;
    v.bits.resize(static_cast<size_t>(C.wires));
    for (int i = 0; i < C.k(); ++i) {
        v.bits[static_cast<size_t>(2 * i)] = assignment[static_cast<size_t>(i)] ? 1 : 0;
        v.bits[static_cast<size_t>(2 * i + 1)] = assignment[static_cast<size_t>(i)] ? 0 : 1;
    }
    return v;
}

inline CircuitTrace trace(const RigidCircuit& C, const std::vector<uint8_t>& assignment) {
    CircuitTrace tr;
    tr.states.push_back(initial_state(C, assignment));
    for (const auto& layer : C.layers) {
        auto next = apply_gate(tr.states.back(), layer);
        if (!next) {
            tr.shorted = true;
            return tr;
        }
        tr.states.push_back(*next);
    }
    tr.satisfying = tr.states.back().bits.back() == 1;
    return tr;
}

inline bool evaluate(const RigidCircuit& C, const std::vector<uint8_t>& assignment) {
    return trace(C, assignment).satisfying;
}

// ext(C): satisfying paired initial assignments, by 2^k enumeration.
inline Int count_satisfying(const RigidCircuit& C) {
    if (C.k() > 24) throw size_limit_error("count_satisfying: k > 24");
    Int total = 0;
    std::vector<uint8_t> a(static_cast<size_t>(C.k()));
    for (uint32_t m = 0; m < (uint32_t{1} << C.k()); ++m) {
        for (int i = 0; i < C.k(); ++i) a[static_cast<size_t>(i)] = (m >> i) & 1;
        if (evaluate(C, a)) ++total;
    }
    return total;
}

// ---------------------------------------------------------------------------
// #3SAT reduction
// ---------------------------------------------------------------------------

// 3CNF with exactly three literals per clause (duplicates allowed); literals
// are signed 1-based variable indices.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

// Truth-table #SAT over the declared variables.
inline Int truth_table_sat_count(const CnfFormula& f) {
    if (f.num_vars > 24) throw size_limit_error("truth_table_sat_count: too many variables");
    Int total = 0;
    for (uint32_t m = 0; m < (uint32_t{1} << f.num_vars); ++m) {
        bool ok = true;
        for (const auto& cl : f.clauses) {
            bool sat = false;
            for (int lit : cl) {
                int v = std::abs(lit) - 1;
                bool val = (m >> v) & 1;
                if ((lit > 0) == val) { sat = true; break; }
            }
            if (!sat) { ok = false; break; }
        }
        if (ok) ++total;
    }
    return total;
}

namespace detail {

// Appends Swap layers moving wire `from` to wire `to` by adjacent
// transpositions, left-to-right bubbling.  Returns nothing; the schedule is
// deterministic so reductions are reproducible byte-for-byte.
inline void bubble(std::vector<CircuitLayer>& layers, int from, int to) {
    while (from < to) {
        layers.push_back({GateKind::Swap, from});
        ++from;
    }
    while (from > to) {
        layers.push_back({GateKind::Swap, from - 1});
        --from;
    }
}

}  // namespace detail

// Human-readable log of the reduction schedule (wire roles, gate purposes),
// kept alongside the circuit for auditability.
struct ReductionTrace {
    std::vector<std::string> notes;
};

// Parsimonious reduction from #3SAT: one wire pair (a_s, not a_s) per clause
// literal slot (6v wires total); TestEq layers force all occurrences of a
// variable equal; per clause two AndOr gates compute the disjunction;
// a final AndOr chain conjoins the clauses, and a Swap routes the result to
// the last wire.  count_satisfying(result) = #SAT over the occurring
// variables of f.
inline RigidCircuit reduce_3sat(const CnfFormula& f, ReductionTrace* rt = nullptr) {
    int v = static_cast<int>(f.clauses.size());
    if (v == 0) throw precondition_error("reduce_3sat: formula has no clauses");
    RigidCircuit C;
    C.wires = 6 * v;
    auto note = [&](const std::string& s) { if (rt) rt->notes.push_back(s); };

    // Slot s (1-based, s = 3i-2..3i for clause i) owns wires 2s-1 (a_s) and
    // 2s (not a_s).  The slot's literal value lives on wire 2s-1 if the
    // literal is positive, else on wire 2s.
    auto var_of_slot = [&](int s) { return std::abs(f.clauses[static_cast<size_t>((s - 1) / 3)][static_cast<size_t>((s - 1) % 3)]); };
    auto lit_of_slot = [&](int s) { return f.clauses[static_cast<size_t>((s - 1) / 3)][static_cast<size_t>((s - 1) % 3)]; };

    // Phase 1: equality forcing.  For each variable, TestEq its first slot
    // against every later slot (both the a and the not-a wires), moving the
    // earlier wire next to the later one and back.
    int max_var = 0;
    for (int s = 1; s <= 3 * v; ++s) max_var = std::max(max_var, var_of_slot(s));
    for (int var = 1; var <= max_var; ++var) {
        int first = 0;
        for (int s = 1; s <= 3 * v; ++s) {
            if (var_of_slot(s) != var) continue;
            if (first == 0) { first = s; continue; }
            // copy-check a_first == a_s and not-a_first == not-a_s.
            for (int off = 0; off <= 1; ++off) {
                int wsrc = 2 * first - 1 + off;
                int wdst = 2 * s - 1 + off;
                note("testeq var x" + std::to_string(var) + ": wire " + std::to_string(wsrc) +
                     " vs " + std::to_string(wdst));
                detail::bubble(C.layers, wsrc, wdst - 1);
                C.layers.push_back({GateKind::TestEq, wdst - 1});
                detail::bubble(C.layers, wdst - 1, wsrc);
            }
        }
    }

    // Phase 2: clause disjunctions.  The literal wire of slot s is fetched
    // next to the next literal wire and AndOr'd; the OR accumulates on the
    // second wire of the pair.  Negation is handled purely by routing the
    // not-a wire (no extra gates).
    std::vector<int> clause_wire(static_cast<size_t>(v));
    for (int i = 1; i <= v; ++i) {
        int s1 = 3 * i - 2, s2 = 3 * i - 1, s3 = 3 * i;
        auto lit_wire = [&](int s) { return lit_of_slot(s) > 0 ? 2 * s - 1 : 2 * s; };
        note("clause " + std::to_string(i) + ": or of wires " + std::to_string(lit_wire(s1)) + "," +
             std::to_string(lit_wire(s2)) + "," + std::to_string(lit_wire(s3)));
        // or(l1, l2) -> accumulates at lit_wire(s2)
        detail::bubble(C.layers, lit_wire(s1), lit_wire(s2) - 1);
        C.layers.push_back({GateKind::AndOr, lit_wire(s2) - 1});
        // the partial OR now sits at position lit_wire(s2); move it before l3.
        detail::bubble(C.layers, lit_wire(s2), lit_wire(s3) - 1);
        C.layers.push_back({GateKind::AndOr, lit_wire(s3) - 1});
        clause_wire[static_cast<size_t>(i - 1)] = lit_wire(s3);
    }

    // Phase 3: conjunction chain.  AndOr leaves the AND on the first wire of
    // the pair; accumulate left-to-right across clause result wires.
    int acc = clause_wire[0];
    for (int i = 2; i <= v; ++i) {
        int next = clause_wire[static_cast<size_t>(i - 1)];
        note("conjoin clause " + std::to_string(i));
        detail::bubble(C.layers, acc, next - 1);
        C.layers.push_back({GateKind::AndOr, next - 1});
        acc = next - 1;
    }

    // Final routing: result to the very last wire.
    note("route result to last wire");
    detail::bubble(C.layers, acc, C.wires);
    return C;
}

// ---------------------------------------------------------------------------
// mod-p parallel circuit
// ---------------------------------------------------------------------------

// C_p: pad C to p wire pairs, link the padding inputs to a_1 with TestEq,
// stack p-1 copies (construction-phase TestEq layers between neighbouring
// copies force equal initial assignments and are repeated p-1 times), route
// every AndOr/TestEq to wires 1-2, and finally swap each copy's last wire
// into the trailing p-1 positions.
inline RigidCircuit parallelize(const RigidCircuit& C, long p) {
    int k = C.k();
    if (p <= k) throw precondition_error("parallelize: need p > k");
    int kp = static_cast<int>(p);           // wire pairs per copy
    int copies = static_cast<int>(p) - 1;
    RigidCircuit D;
    D.wires = 2 * kp * copies;               // = 2p(p-1)

    auto wire = [&](int copy, int w) { return copy * 2 * kp + w; };  // copy 0-based, w 1-based

    // Executes a simple gate on global wires (w1, w2), w1 < w2, routed to the
    // top: bubble w1 -> 1 and w2 -> 2, apply at wires 1-2, restore.  Swap and
    // Identity layers may act anywhere and are emitted in place.
    auto emit_top = [&](GateKind kind, int w1, int w2) {
        if (kind == GateKind::Swap || kind == GateKind::Identity) {
            D.layers.push_back({kind, w1});
            return;
        }
        // Bubbling w1 leftwards shifts only positions < w1, so w2 > w1 is
        // untouched; the restore runs in reverse order.
        detail::bubble(D.layers, w1, 1);
        detail::bubble(D.layers, w2, 2);
        D.layers.push_back({kind, 1});
        detail::bubble(D.layers, 2, w2);
        detail::bubble(D.layers, 1, w1);
    };

    // Construction phase (repeated p-1 times): within each copy TestEq the
    // padding pairs against pair 1, and TestEq neighbouring copies' pairs
    // (copy i vs copy i+1) so all copies share the initial assignment.
    for (int rep = 0; rep < copies; ++rep) {
        for (int copy = 0; copy < copies; ++copy)
            for (int pair = k; pair < kp; ++pair)
                for (int off = 0; off <= 1; ++off)
                    emit_top(GateKind::TestEq, wire(copy, 1 + off), wire(copy, 2 * pair + 1 + off));
        for (int copy = 0; copy + 1 < copies; ++copy)
            for (int pair = 0; pair < kp; ++pair)
                for (int off = 0; off <= 1; ++off)
                    emit_top(GateKind::TestEq, wire(copy, 2 * pair + 1 + off),
                             wire(copy + 1, 2 * pair + 1 + off));
    }

    // Computation phase: replay C's layers in every copy, all AndOr/TestEq
    // routed to wires 1-2.
    for (const auto& layer : C.layers)
        for (int copy = 0; copy < copies; ++copy)
            emit_top(layer.kind, wire(copy, layer.position), wire(copy, layer.position + 1));

    // Output phase: each copy's last wire (wire 2k of the embedded C) moves
    // into the trailing p-1 positions; last copy first so earlier sources
    // keep their original indices.
    for (int copy = copies - 1; copy >= 0; --copy) {
        int src = wire(copy, 2 * k);
        int dst = D.wires - (copies - 1 - copy);
        detail::bubble(D.layers, src, dst);
    }
    return D;
}

}  // namespace lec

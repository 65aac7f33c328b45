// Tests for rigid circuits: gate semantics, evaluation, conservation,
// the #3SAT reduction (parsimony), and the mod-p parallel circuit.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lec/circuit.hpp>

#include <random>

using namespace lec;

namespace {

// All traces of a circuit; checks the conservation lemma on each.
void check_conservation(const RigidCircuit& C) {
    std::vector<uint8_t> a(static_cast<size_t>(C.k()));
    for (uint32_t m = 0; m < (uint32_t{1} << C.k()); ++m) {
        for (int i = 0; i < C.k(); ++i) a[static_cast<size_t>(i)] = (m >> i) & 1;
        CircuitTrace tr = trace(C, a);
        long want = tr.states.front().popcount();
        for (const auto& st : tr.states) CHECK(st.popcount() == want);
    }
}

RigidCircuit random_circuit(std::mt19937& rng, int k, int layers) {
    RigidCircuit C;
    C.wires = 2 * k;
    for (int i = 0; i < layers; ++i) {
        GateKind kind = static_cast<GateKind>(rng() % 4);
        int pos = 1 + static_cast<int>(rng() % static_cast<uint32_t>(2 * k - 1));
        C.layers.push_back({kind, pos});
    }
    return C;
}

}  // namespace

TEST_CASE("gate semantics") {
    CircuitState s{{1, 0}};
    auto sw = apply_gate(s, {GateKind::Swap, 1});
    REQUIRE(sw);
    CHECK(sw->bits == std::vector<uint8_t>{0, 1});
    auto ao = apply_gate(s, {GateKind::AndOr, 1});
    REQUIRE(ao);
    CHECK(ao->bits == std::vector<uint8_t>{0, 1});
    CHECK_FALSE(apply_gate(s, {GateKind::TestEq, 1}));
    CircuitState eq{{1, 1}};
    auto te = apply_gate(eq, {GateKind::TestEq, 1});
    REQUIRE(te);
    CHECK(te->bits == eq.bits);
    auto id = apply_gate(s, {GateKind::Identity, 1});
    REQUIRE(id);
    CHECK(id->bits == s.bits);
}

TEST_CASE("evaluate on k=1 circuits") {
    RigidCircuit ident;
    ident.wires = 2;
    ident.layers.push_back({GateKind::Identity, 1});
    CHECK(evaluate(ident, {0}));       // last wire is not-a = 1
    CHECK_FALSE(evaluate(ident, {1}));
    CHECK(count_satisfying(ident) == 1);

    RigidCircuit swp;
    swp.wires = 2;
    swp.layers.push_back({GateKind::Swap, 1});
    CHECK(evaluate(swp, {1}));
    CHECK_FALSE(evaluate(swp, {0}));
    CHECK(count_satisfying(swp) == 1);
}

TEST_CASE("forced short-out counts zero") {
    // TestEq across the complementary pair (a, not-a) always shorts.
    RigidCircuit C;
    C.wires = 2;
    C.layers.push_back({GateKind::TestEq, 1});
    CHECK(count_satisfying(C) == 0);
}

TEST_CASE("conservation lemma on random circuits") {
    std::mt19937 rng(31337);
    for (int t = 0; t < 25; ++t) check_conservation(random_circuit(rng, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 10)));
}

TEST_CASE("swap-only circuits act as bijections") {
    std::mt19937 rng(2718);
    for (int t = 0; t < 10; ++t) {
        int k = 2;
        RigidCircuit C;
        C.wires = 2 * k;
        for (int i = 0; i < 6; ++i)
            C.layers.push_back({rng() % 2 ? GateKind::Swap : GateKind::Identity,
                                1 + static_cast<int>(rng() % static_cast<uint32_t>(2 * k - 1))});
        // fold layer functions over all of F2^{2k}
        std::set<std::vector<uint8_t>> images;
        for (uint32_t m = 0; m < (uint32_t{1} << (2 * k)); ++m) {
            CircuitState s;
            s.bits.resize(static_cast<size_t>(2 * k));
            for (int i = 0; i < 2 * k; ++i) s.bits[static_cast<size_t>(i)] = (m >> i) & 1;
            for (const auto& L : C.layers) s = *apply_gate(s, L);
            images.insert(s.bits);
        }
        CHECK(images.size() == (size_t{1} << (2 * k)));
    }
}

TEST_CASE("reduce_3sat fixtures") {
    CnfFormula f1{1, {{1, 1, 1}}};
    CHECK(count_satisfying(reduce_3sat(f1)) == 1);
    CnfFormula f2{1, {{1, -1, 1}}};
    CHECK(count_satisfying(reduce_3sat(f2)) == 2);
    CnfFormula f3{3, {{1, 2, 3}, {-1, -2, -3}}};
    CHECK(count_satisfying(reduce_3sat(f3)) == 6);
    CHECK(truth_table_sat_count(f3) == 6);
}

TEST_CASE("parsimony over an exhaustive family of small 3CNFs") {
    // all clauses over variables {1,2,3} up to literal pattern, v <= 2
    std::vector<std::array<int, 3>> clauses;
    for (int a = 1; a <= 3; ++a)
        for (int b = a; b <= 3; ++b)
            for (int c = b; c <= 3; ++c)
                for (int sa : {1, -1})
                    for (int sb : {1, -1})
                        for (int sc : {1, -1}) clauses.push_back({sa * a, sb * b, sc * c});
    // v = 1
    int tested = 0;
    for (const auto& cl : clauses) {
        CnfFormula f;
        f.clauses = {cl};
        int mv = 0;
        for (int lit : cl) mv = std::max(mv, std::abs(lit));
        f.num_vars = mv;
        // ensure every declared variable occurs (drop gapped patterns)
        std::set<int> occ;
        for (int lit : cl) occ.insert(std::abs(lit));
        if (static_cast<int>(occ.size()) != mv && *occ.begin() != 1) continue;
        if (static_cast<int>(occ.size()) < mv) continue;
        RigidCircuit C = reduce_3sat(f);
        CHECK(C.wires == 6 * static_cast<int>(f.clauses.size()));
        CHECK(count_satisfying(C) == truth_table_sat_count(f));
        check_conservation(C);
        ++tested;
    }
    CHECK(tested > 10);
    // v = 2: sampled pairs (full cross product is large; keep a fixed stride)
    std::mt19937 rng(11);
    for (int t = 0; t < 40; ++t) {
        CnfFormula f;
        f.clauses = {clauses[rng() % clauses.size()], clauses[rng() % clauses.size()]};
        std::set<int> occ;
        int mv = 0;
        for (const auto& cl : f.clauses)
            for (int lit : cl) {
                occ.insert(std::abs(lit));
                mv = std::max(mv, std::abs(lit));
            }
        if (static_cast<int>(occ.size()) < mv) { --t; continue; }
        f.num_vars = mv;
        RigidCircuit C = reduce_3sat(f);
        CHECK(count_satisfying(C) == truth_table_sat_count(f));
        check_conservation(C);
    }
}

TEST_CASE("parallelize") {
    RigidCircuit ident;
    ident.wires = 2;
    ident.layers.push_back({GateKind::Identity, 1});
    RigidCircuit D = parallelize(ident, 2);
    CHECK(D.wires == 4);
    CHECK(count_satisfying(D) == 1);

    std::mt19937 rng(909);
    for (int t = 0; t < 20; ++t) {
        int k = 1 + static_cast<int>(rng() % 2);
        long p = (k == 1) ? (rng() % 2 ? 2 : 3) : 3;
        RigidCircuit C = random_circuit(rng, k, 1 + static_cast<int>(rng() % 5));
        RigidCircuit Cp = parallelize(C, p);
        CHECK(Cp.wires == 2 * p * (p - 1));
        CHECK(count_satisfying(Cp) == count_satisfying(C));
        // every satisfying trace of C_p has per-state popcount p^2 - p
        std::vector<uint8_t> a(static_cast<size_t>(Cp.k()));
        for (uint32_t m = 0; m < (uint32_t{1} << Cp.k()); ++m) {
            for (int i = 0; i < Cp.k(); ++i) a[static_cast<size_t>(i)] = (m >> i) & 1;
            CircuitTrace tr = trace(Cp, a);
            if (!tr.satisfying) continue;
            for (const auto& st : tr.states) CHECK(st.popcount() == p * p - p);
        }
        // AndOr/TestEq layers act on wires 1-2
        for (const auto& L : Cp.layers)
            if (L.kind == GateKind::AndOr || L.kind == GateKind::TestEq) CHECK(L.position == 1);
    }
    CHECK_THROWS_AS(parallelize(ident, 1), precondition_error);
}

// Tests for the text formats (round-trips, parse-error line numbers) and the
// command-line front end (outputs, exit codes, determinism).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <lec/bruhat.hpp>
#include <lec/cli.hpp>
#include <lec/core.hpp>
#include <lec/io.hpp>

using namespace lec;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string("/tmp/lec_cli_test_") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string line_msg(const std::exception& e) { return e.what(); }

}  // namespace

TEST_CASE("poset format round-trips and rejects malformed input") {
    Poset P(4);
    P.add_relation(0, 1);
    P.add_relation(0, 2);
    P.add_relation(1, 3);
    P.add_relation(2, 3);
    P.close();

    std::ostringstream buf;
    write_poset(P, buf);
    std::istringstream in(buf.str());
    Poset Q = read_poset(in);
    REQUIRE(Q.n == P.n);
    for (int i = 0; i < P.n; ++i)
        for (int j = 0; j < P.n; ++j) CHECK(Q.less(i, j) == P.less(i, j));

    // Only covers are written: the diamond has 4 cover lines, not 5.
    CHECK(buf.str() == "poset 4\n1 < 2\n1 < 3\n2 < 4\n3 < 4\n");

    SUBCASE("closure is taken on load") {
        std::istringstream chain("poset 3\n1 < 2\n2 < 3\n");
        Poset C = read_poset(chain);
        CHECK(C.less(0, 2));
    }
    SUBCASE("comments and blank lines are skipped") {
        std::istringstream src("# a chain\n\nposet 2\n# cover\n1 < 2\n");
        CHECK(read_poset(src).less(0, 1));
    }
    SUBCASE("bad header") {
        std::istringstream src("graph 3\n");
        CHECK_THROWS_AS(read_poset(src), parse_error);
    }
    SUBCASE("parse errors carry 1-based line numbers") {
        std::istringstream src("poset 3\n1 < 2\n2 < 9\n");
        try {
            read_poset(src);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(line_msg(e).substr(0, 7) == "line 3:");
        }
    }
    SUBCASE("cycles are rejected") {
        std::istringstream src("poset 2\n1 < 2\n2 < 1\n");
        CHECK_THROWS_AS(read_poset(src), parse_error);
    }
}

TEST_CASE("permutation format") {
    std::istringstream ok("3 1 2\n");
    Permutation s = read_permutation(ok);
    REQUIRE(s.n() == 3);
    CHECK(s.entries == std::vector<int>{3, 1, 2});

    std::istringstream dup("1 1 2\n");
    CHECK_THROWS_AS(read_permutation(dup), parse_error);
    std::istringstream gap("1 5 2\n");
    CHECK_THROWS_AS(read_permutation(gap), parse_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_permutation(empty), parse_error);
}

TEST_CASE("block sequence format round-trips") {
    std::istringstream in("3 [5:4] 1 [10:2]\n");
    BlockSequence seq = read_blockseq(in);
    REQUIRE(seq.items.size() == 4);
    CHECK(seq.items[1].is_block);
    CHECK(seq.items[1].first == 5);
    CHECK(seq.items[1].length == 4);
    CHECK(seq.size() == 8);

    std::ostringstream buf;
    write_blockseq(seq, buf);
    CHECK(buf.str() == "3 [5:4] 1 [10:2]\n");
    std::istringstream again(buf.str());
    BlockSequence seq2 = read_blockseq(again);
    CHECK(seq2.items.size() == seq.items.size());

    std::istringstream bad("3 [5:x]\n");
    CHECK_THROWS_AS(read_blockseq(bad), parse_error);
    std::istringstream overlap("3 [2:4]\n");
    CHECK_THROWS_AS(read_blockseq(overlap), parse_error);
    std::istringstream zero("[4:0]\n");
    CHECK_THROWS_AS(read_blockseq(zero), parse_error);
}

TEST_CASE("graph format round-trips and rejects malformed input") {
    std::istringstream in("graph 4\n1 2\n2 3\n3 4\n");
    Graph G = read_graph(in);
    REQUIRE(G.n == 4);
    REQUIRE(G.edges.size() == 3);

    std::ostringstream buf;
    write_graph(G, buf);
    CHECK(buf.str() == "graph 4\n1 2\n2 3\n3 4\n");

    SUBCASE("out-of-range endpoint names its line") {
        std::istringstream src("graph 3\n1 2\n2 5\n");
        try {
            read_graph(src);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(line_msg(e).substr(0, 7) == "line 3:");
        }
    }
    SUBCASE("loops and multi-edges are rejected with line numbers") {
        std::istringstream loop("graph 3\n2 2\n");
        CHECK_THROWS_AS(read_graph(loop), parse_error);
        std::istringstream multi("graph 3\n1 2\n2 1\n");
        try {
            read_graph(multi);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(line_msg(e).substr(0, 7) == "line 3:");
        }
    }
}

TEST_CASE("DIMACS format") {
    std::istringstream in("c comment\np cnf 4 2\n1 -2 3 0\n-4 0\n");
    CnfFormula f = read_dimacs(in);
    CHECK(f.num_vars == 4);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::array<int, 3>{1, -2, 3});
    // Short clauses are padded by repeating the last literal.
    CHECK(f.clauses[1] == std::array<int, 3>{-4, -4, -4});

    std::istringstream noheader("1 2 0\n");
    CHECK_THROWS_AS(read_dimacs(noheader), parse_error);
    std::istringstream wide("p cnf 5 1\n1 2 3 4 0\n");
    CHECK_THROWS_AS(read_dimacs(wide), parse_error);
    std::istringstream range("p cnf 2 1\n1 3 0\n");
    CHECK_THROWS_AS(read_dimacs(range), parse_error);
    std::istringstream open_clause("p cnf 2 1\n1 2\n");
    CHECK_THROWS_AS(read_dimacs(open_clause), parse_error);
    std::istringstream miscount("p cnf 2 2\n1 2 0\n");
    CHECK_THROWS_AS(read_dimacs(miscount), parse_error);
}

TEST_CASE("circuit format round-trips") {
    std::istringstream in("circuit 4\nswap 1\nandor 3\nidentity 4\ntesteq 2\n");
    RigidCircuit C = read_circuit(in);
    REQUIRE(C.wires == 4);
    REQUIRE(C.layers.size() == 4);
    CHECK(C.layers[0].kind == GateKind::Swap);
    CHECK(C.layers[2].kind == GateKind::Identity);

    std::ostringstream buf;
    write_circuit(C, buf);
    CHECK(buf.str() == "circuit 4\nswap 1\nandor 3\nidentity 4\ntesteq 2\n");

    std::istringstream oddwires("circuit 3\n");
    CHECK_THROWS_AS(read_circuit(oddwires), parse_error);
    std::istringstream badkind("circuit 4\nnand 1\n");
    CHECK_THROWS_AS(read_circuit(badkind), parse_error);
    // A 2-wire gate at the last wire would overhang; identity there is fine.
    std::istringstream overhang("circuit 4\nswap 4\n");
    CHECK_THROWS_AS(read_circuit(overhang), parse_error);
    std::istringstream idlast("circuit 4\nidentity 4\n");
    CHECK(read_circuit(idlast).layers.size() == 1);
}

TEST_CASE("cli: count subcommands") {
    auto chain3 = write_temp("chain3.poset", "poset 3\n1 < 2\n2 < 3\n");
    auto path3 = write_temp("path3.graph", "graph 3\n1 2\n2 3\n");

    CliRun r = run({"count", "bruhat", "2 1 3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "ext 2\n");

    r = run({"count", "poset", chain3});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "ext 1\n");

    r = run({"count", "poset", chain3, "--method", "brute"});
    CHECK(r.out == "ext 1\n");

    r = run({"count", "incidence", path3});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "ext 16\n");
    r = run({"count", "incidence", "--graph", path3, "--method", "generic"});
    CHECK(r.out == "ext 16\n");

    auto circ = write_temp("c.circuit", "circuit 4\nswap 1\nandor 3\n");
    RigidCircuit C = read_circuit_file(circ);
    r = run({"count", "circuit", circ});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "ext " + count_satisfying(C).get_str() + "\n");

    r = run({"count", "bruhat", "3 1 2", "--mod", "2"});
    CHECK(r.out == "ext " + std::to_string(count_bruhat_ideal(relabel({3, 1, 2})).get_si() % 2) + "\n");
}

TEST_CASE("cli: nt subcommands") {
    CliRun r = run({"nt", "primes", "4", "16"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "primes 5 7 11 13\n");

    r = run({"nt", "crt", "1", "5", "2", "7"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "value 16\nmodulus 35\n");

    r = run({"nt", "crt", "1", "5", "2"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: gates and gadget subcommands") {
    CliRun r = run({"gates", "verify", "--kind", "swap", "--prime", "11"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("equalities pass") != std::string::npos);

    r = run({"gates", "candidates"});
    CHECK(r.out == "candidates 96\n");

    r = run({"gates", "verify", "--kind", "bogus", "--prime", "11"});
    CHECK(r.exit_code == 2);

    r = run({"gadget", "jp", "--prime", "5"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "ext 70151973743876867555328\nmod_p 3\n");
}

TEST_CASE("cli: reduce emits parseable instances") {
    auto chain3 = write_temp("chain3b.poset", "poset 3\n1 < 2\n2 < 3\n");

    CliRun r = run({"reduce", "incidence", "--poset", chain3, "--prime", "5"});
    REQUIRE(r.exit_code == 0);
    std::istringstream gin(r.out);
    Graph G = read_graph(gin);
    CHECK(G.n == 3 + 2 * 5 - 2);  // n + |J_5| vertices

    r = run({"reduce", "height2", "--poset", chain3, "--prime", "5"});
    REQUIRE(r.exit_code == 0);
    std::istringstream pin(r.out);
    Poset Q = read_poset(pin);
    CHECK(Q.n > 3);
}

TEST_CASE("cli: recover matches brute force") {
    auto chain3 = write_temp("chain3c.poset", "poset 3\n1 < 2\n2 < 3\n");
    CliRun r = run({"recover", "height2", "--poset", chain3});
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 6) == "ext 1\n");

    r = run({"recover", "incidence", "--poset", chain3});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ext 1\n") == 0);
    CHECK(r.out.find("mode ") != std::string::npos);
    CHECK(r.out.find("residue_mod_5") != std::string::npos);
}

TEST_CASE("cli: compile dry run prints the length estimate") {
    auto cnf = write_temp("f.cnf", "p cnf 2 1\n1 -2 0\n");
    CliRun r = run({"compile", "--cnf", cnf, "--prime", "11", "--dry-run"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("estimated_length ") == 0);

    CnfFormula f = read_dimacs_file(cnf);
    RigidCircuit C = reduce_3sat(f);
    RigidCircuit Cp = parallelize(C, 11);
    long long est = estimate_length(static_cast<long long>(Cp.layers.size()), C.k(), 11);
    CHECK(r.out == "estimated_length " + std::to_string(est) + "\n");
}

TEST_CASE("cli: exit codes") {
    CliRun r = run({"count", "poset", "/tmp/lec_cli_no_such_file.poset"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("parse error") != std::string::npos);

    auto bad = write_temp("bad.poset", "poset 2\n1 < 9\n");
    r = run({"count", "poset", bad});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    // 25 isolated vertices exceed the 24-vertex subset-DP limit.
    std::string big = "graph 25\n";
    auto bigpath = write_temp("big.graph", big);
    r = run({"count", "incidence", bigpath});
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("size limit") != std::string::npos);

    r = run({"count"});
    CHECK(r.exit_code == 2);

    r = run({"--help"});
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: deterministic byte-identical output and well-formed JSON") {
    auto path3 = write_temp("path3b.graph", "graph 3\n1 2\n2 3\n");
    CliRun a = run({"count", "incidence", path3});
    CliRun b = run({"count", "incidence", path3});
    CHECK(a.out == b.out);
    CHECK(a.exit_code == b.exit_code);

    CliRun j = run({"count", "incidence", path3, "--format-json"});
    CHECK(j.exit_code == 0);
    nlohmann::json parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["command"] == "count");
    CHECK(parsed["pass"] == true);
    CHECK(parsed["results"]["ext"] == "16");
}

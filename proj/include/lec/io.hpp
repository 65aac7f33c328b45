#pragma once
// Text formats: posets ("poset <n>" + "i < j" lines), permutations (one line
// of integers), block sequences ("v" / "[first:len]" tokens), graphs
// ("graph <n>" + "u v" lines), DIMACS CNF, and rigid circuits
// ("circuit <wires>" + "<kind> <position>" lines).  Parse errors carry line
// numbers.  All indices in files are 1-based.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <lec/blockseq.hpp>
#include <lec/circuit.hpp>
#include <lec/core.hpp>
#include <lec/errors.hpp>
#include <lec/incidence.hpp>

namespace lec {

namespace io_detail {

inline parse_error at_line(int line, const std::string& msg) {
    return parse_error("line " + std::to_string(line) + ": " + msg);
}

// Reads lines, skipping blanks and '#' comments; returns (line_number, text).
inline std::vector<std::pair<int, std::string>> content_lines(std::istream& in) {
    std::vector<std::pair<int, std::string>> out;
    std::string s;
    int no = 0;
    while (std::getline(in, s)) {
        ++no;
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos || s[a] == '#') continue;
        out.push_back({no, s});
    }
    return out;
}

}  // namespace io_detail

inline Poset read_poset(std::istream& in) {
    auto lines = io_detail::content_lines(in);
    if (lines.empty()) throw parse_error("line 1: expected 'poset <n>' header");
    std::istringstream head(lines[0].second);
    std::string tag;
    int n = -1;
    if (!(head >> tag >> n) || tag != "poset" || n < 0)
        throw io_detail::at_line(lines[0].first, "expected 'poset <n>' header");
    Poset P(n);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ls(lines[i].second);
        int a = 0, b = 0;
        std::string op;
        if (!(ls >> a >> op >> b) || op != "<" || a < 1 || b < 1 || a > n || b > n || a == b)
            throw io_detail::at_line(lines[i].first, "expected 'i < j' with 1 <= i,j <= n");
        P.add_relation(a - 1, b - 1);
    }
    try {
        P.close();
    } catch (const precondition_error& e) {
        throw parse_error(std::string("poset relations contain a cycle: ") + e.what());
    }
    return P;
}

inline void write_poset(const Poset& P, std::ostream& out) {
    out << "poset " << P.n << "\n";
    for (int i = 0; i < P.n; ++i)
        for (int j = 0; j < P.n; ++j) {
            if (!P.less(i, j)) continue;
            bool cover = true;
            for (int k = 0; k < P.n && cover; ++k)
                if (P.less(i, k) && P.less(k, j)) cover = false;
            if (cover) out << i + 1 << " < " << j + 1 << "\n";
        }
}

inline Permutation read_permutation(std::istream& in) {
    std::vector<long long> vals;
    long long v;
    while (in >> v) vals.push_back(v);
    if (vals.empty()) throw parse_error("line 1: expected a permutation of 1..n");
    Permutation perm = relabel(vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (perm.entries[i] != vals[i])
            throw parse_error("line 1: not a permutation of 1..n");
    return perm;
}

inline BlockSequence read_blockseq(std::istream& in) {
    BlockSequence seq;
    std::string tok;
    int count = 0;
    while (in >> tok) {
        ++count;
        if (!tok.empty() && tok.front() == '[') {
            std::size_t colon = tok.find(':');
            if (tok.back() != ']' || colon == std::string::npos)
                throw parse_error("token " + std::to_string(count) +
                                  ": expected '[first:len]', got '" + tok + "'");
            try {
                long long first = std::stoll(tok.substr(1, colon - 1));
                long long len = std::stoll(tok.substr(colon + 1, tok.size() - colon - 2));
                if (len < 1) throw std::invalid_argument("len");
                seq.items.push_back(BlockItem::block(first, len));
            } catch (const std::logic_error&) {
                throw parse_error("token " + std::to_string(count) + ": bad block '" + tok + "'");
            }
        } else {
            try {
                seq.items.push_back(BlockItem::single(std::stoll(tok)));
            } catch (const std::logic_error&) {
                throw parse_error("token " + std::to_string(count) + ": bad value '" + tok + "'");
            }
        }
    }
    if (seq.items.empty()) throw parse_error("empty block sequence");
    if (!seq.values_distinct()) throw parse_error("block sequence values overlap");
    return seq;
}

inline void write_blockseq(const BlockSequence& seq, std::ostream& out) {
    bool first = true;
    for (const auto& it : seq.items) {
        if (!first) out << ' ';
        first = false;
        if (it.is_block)
            out << '[' << it.first << ':' << it.length << ']';
        else
            out << it.first;
    }
    out << '\n';
}

inline Graph read_graph(std::istream& in) {
    auto lines = io_detail::content_lines(in);
    if (lines.empty()) throw parse_error("line 1: expected 'graph <n>' header");
    std::istringstream head(lines[0].second);
    std::string tag;
    int n = -1;
    if (!(head >> tag >> n) || tag != "graph" || n < 0)
        throw io_detail::at_line(lines[0].first, "expected 'graph <n>' header");
    Graph G;
    G.n = n;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ls(lines[i].second);
        int u = 0, v = 0;
        if (!(ls >> u >> v) || u < 1 || v < 1 || u > n || v > n)
            throw io_detail::at_line(lines[i].first, "expected edge 'u v' with 1 <= u,v <= n");
        try {
            G.add_edge(u - 1, v - 1);
        } catch (const precondition_error& e) {
            throw io_detail::at_line(lines[i].first, e.what());
        }
    }
    return G;
}

inline void write_graph(const Graph& G, std::ostream& out) {
    out << "graph " << G.n << "\n";
    for (const auto& [u, v] : G.edges) out << u + 1 << ' ' << v + 1 << "\n";
}

inline CnfFormula read_dimacs(std::istream& in) {
    CnfFormula f;
    bool seen_header = false;
    std::string s;
    int no = 0;
    long declared_clauses = -1;
    std::vector<int> cur;
    while (std::getline(in, s)) {
        ++no;
        std::istringstream ls(s);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        if (first == "p") {
            std::string fmt;
            if (seen_header || !(ls >> fmt >> f.num_vars >> declared_clauses) || fmt != "cnf")
                throw io_detail::at_line(no, "expected 'p cnf <vars> <clauses>'");
            seen_header = true;
            continue;
        }
        if (!seen_header) throw io_detail::at_line(no, "clause before 'p cnf' header");
        ls.clear();
        ls.str(s);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (cur.empty() || cur.size() > 3)
                    throw io_detail::at_line(no, "clauses must have 1 to 3 literals");
                while (cur.size() < 3) cur.push_back(cur.back());  // duplicate = no-op in OR
                f.clauses.push_back({cur[0], cur[1], cur[2]});
                cur.clear();
                continue;
            }
            if (lit < -f.num_vars || lit > f.num_vars)
                throw io_detail::at_line(no, "literal out of range");
            cur.push_back(lit);
        }
    }
    if (!seen_header) throw parse_error("line 1: missing 'p cnf' header");
    if (!cur.empty()) throw parse_error("unterminated clause at end of input");
    if (declared_clauses >= 0 && declared_clauses != static_cast<long>(f.clauses.size()))
        throw parse_error("clause count does not match the header");
    return f;
}

inline RigidCircuit read_circuit(std::istream& in) {
    auto lines = io_detail::content_lines(in);
    if (lines.empty()) throw parse_error("line 1: expected 'circuit <wires>' header");
    std::istringstream head(lines[0].second);
    std::string tag;
    int wires = 0;
    if (!(head >> tag >> wires) || tag != "circuit" || wires < 2 || wires % 2 != 0)
        throw io_detail::at_line(lines[0].first, "expected 'circuit <wires>' with even wires");
    RigidCircuit C;
    C.wires = wires;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ls(lines[i].second);
        std::string kind;
        int pos = 0;
        if (!(ls >> kind >> pos))
            throw io_detail::at_line(lines[i].first, "expected '<kind> <position>'");
        CircuitLayer L;
        if (kind == "identity") L.kind = GateKind::Identity;
        else if (kind == "swap") L.kind = GateKind::Swap;
        else if (kind == "andor") L.kind = GateKind::AndOr;
        else if (kind == "testeq") L.kind = GateKind::TestEq;
        else throw io_detail::at_line(lines[i].first, "unknown gate kind '" + kind + "'");
        int span = (L.kind == GateKind::Identity) ? 1 : 2;
        if (pos < 1 || pos + span - 1 > wires)
            throw io_detail::at_line(lines[i].first, "gate position out of range");
        L.position = pos;
        C.layers.push_back(L);
    }
    return C;
}

inline void write_circuit(const RigidCircuit& C, std::ostream& out) {
    out << "circuit " << C.wires << "\n";
    for (const auto& L : C.layers) out << gate_kind_name(L.kind) << ' ' << L.position << "\n";
}

// File-path conveniences.
template <class T, T (*Reader)(std::istream&)>
inline T read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    return Reader(in);
}

inline Poset read_poset_file(const std::string& path) {
    return read_file<Poset, read_poset>(path);
}
inline Graph read_graph_file(const std::string& path) {
    return read_file<Graph, read_graph>(path);
}
inline CnfFormula read_dimacs_file(const std::string& path) {
    return read_file<CnfFormula, read_dimacs>(path);
}
inline RigidCircuit read_circuit_file(const std::string& path) {
    return read_file<RigidCircuit, read_circuit>(path);
}

}  // namespace lec

#pragma once
// Command-line front end: thin adapters from parsed arguments to the library
// operations.  No counting logic lives here.  Exit codes: 0 success,
// 1 check failed, 2 parse error, 3 resource/size limit.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <lec/bruhat.hpp>
#include <lec/circuit.hpp>
#include <lec/core.hpp>
#include <lec/framework.hpp>
#include <lec/gates.hpp>
#include <lec/height2.hpp>
#include <lec/incidence.hpp>
#include <lec/io.hpp>
#include <lec/numtheory.hpp>
#include <lec/selftest.hpp>

namespace lec {

namespace cli_detail {

// Result lines accumulated by a command; printed as text or JSON.
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> results;
    bool pass = true;

    void add(const std::string& key, const std::string& value) {
        results.push_back({key, value});
    }
    void add(const std::string& key, const Int& value) { add(key, value.get_str()); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }

    void print(std::ostream& out, bool json) const {
        if (json) {
            nlohmann::json j;
            j["command"] = command;
            j["pass"] = pass;
            auto& res = j["results"] = nlohmann::json::object();
            for (const auto& [k, v] : results) res[k] = v;
            out << j.dump(2) << "\n";
        } else {
            for (const auto& [k, v] : results) out << k << " " << v << "\n";
        }
    }
};

inline Permutation parse_inline_permutation(const std::string& arg) {
    // Either a file path or an inline whitespace-separated permutation.
    if (arg.find_first_not_of("0123456789 \t") == std::string::npos) {
        std::istringstream in(arg);
        return read_permutation(in);
    }
    std::ifstream in(arg);
    if (!in) throw parse_error("cannot open file: " + arg);
    return read_permutation(in);
}

inline long positive_mod(const Int& x, long p) {
    Int r = x % p;
    if (r < 0) r += p;
    return r.get_si();
}

}  // namespace cli_detail

// Runs the CLI against `args` (without the program name); returns the exit
// code and writes all output to `out` / `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::RunReport;
    CLI::App app{"exact linear-extension counting pipelines"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    int jobs = 1;
    app.add_flag("--format-json,--json", json, "emit JSON instead of plain text");
    app.add_option("--jobs", jobs, "parallelism hint (modules are deterministic)");

    RunReport rep;
    int exit_code = 0;

    // Option storage shared with the subcommand callbacks below; kept at
    // function scope so repeated run_cli calls start from clean defaults.
    std::string poset_path, poset_method = "downset";
    long poset_mod = 0;
    std::string bruhat_arg;
    long bruhat_mod = 0;
    std::string circuit_path;
    std::string inc_path, inc_graph, inc_method = "subset";
    long nt_k = 0, nt_hi = 0;
    std::vector<long> crt_vals;
    std::string gate_kind;
    long gate_prime = 11;
    long jp_prime = 5;
    std::string reduce_h2_path, reduce_inc_path;
    long reduce_h2_prime = 5, reduce_inc_prime = 5;
    std::string recover_h2_path, recover_inc_path;
    std::string cnf_path, manifest_path = "manifest.txt", sigma_path;
    long compile_prime = 11;
    bool dry_run = false;
    bool quick = false;

    // ---- count ----------------------------------------------------------
    auto* count = app.add_subcommand("count", "exact counts");
    {
        auto* poset = count->add_subcommand("poset", "ext of a poset file");
        poset->add_option("file", poset_path)->required();
        poset->add_option("--method", poset_method)->check(CLI::IsMember({"brute", "downset"}));
        poset->add_option("--mod", poset_mod);
        poset->callback([&] {
            Poset P = read_poset_file(poset_path);
            auto method = poset_method == "brute" ? CountMethod::Brute : CountMethod::DownsetDP;
            Int e = count_linear_extensions(P, method);
            rep.add("ext", poset_mod > 0 ? Int(cli_detail::positive_mod(e, poset_mod)) : e);
        });

        auto* bruhat = count->add_subcommand("bruhat", "weak Bruhat ideal size");
        bruhat->add_option("permutation", bruhat_arg, "inline permutation or file")->required();
        bruhat->add_option("--mod", bruhat_mod);
        bruhat->callback([&] {
            Permutation sigma = cli_detail::parse_inline_permutation(bruhat_arg);
            Int e = count_bruhat_ideal(sigma);
            rep.add("ext", bruhat_mod > 0 ? Int(cli_detail::positive_mod(e, bruhat_mod)) : e);
        });

        auto* circuit = count->add_subcommand("circuit", "satisfying count of a rigid circuit");
        circuit->add_option("file", circuit_path)->required();
        circuit->callback([&] {
            RigidCircuit C = read_circuit_file(circuit_path);
            rep.add("ext", count_satisfying(C));
        });

        auto* inc = count->add_subcommand("incidence", "ext of an incidence poset");
        inc->add_option("file", inc_path);
        inc->add_option("--graph", inc_graph);
        inc->add_option("--method", inc_method)->check(CLI::IsMember({"subset", "generic"}));
        inc->callback([&] {
            std::string path = inc_graph.empty() ? inc_path : inc_graph;
            if (path.empty()) throw CLI::ValidationError("count incidence: missing graph file");
            Graph G = read_graph_file(path);
            Int e = inc_method == "generic"
                        ? count_linear_extensions(incidence_poset(G))
                        : count_ext_incidence(G);
            rep.add("ext", e);
        });
    }

    // ---- nt -------------------------------------------------------------
    auto* nt = app.add_subcommand("nt", "number theory utilities");
    {
        auto* primes = nt->add_subcommand("primes", "primes strictly between k and hi");
        primes->add_option("k", nt_k)->required();
        primes->add_option("hi", nt_hi)->required();
        primes->callback([&] {
            std::string list;
            for (long p : primes_between(nt_k, nt_hi)) {
                if (!list.empty()) list += " ";
                list += std::to_string(p);
            }
            rep.add("primes", list);
        });

        auto* crt = nt->add_subcommand("crt", "combine residue/modulus pairs");
        crt->add_option("pairs", crt_vals, "r1 m1 r2 m2 ...")->required();
        crt->callback([&] {
            if (crt_vals.size() < 2 || crt_vals.size() % 2 != 0)
                throw parse_error("crt: expected an even number of values");
            ResidueSystem rs;
            for (std::size_t i = 0; i < crt_vals.size(); i += 2)
                rs.push_back({Int(crt_vals[i]), Int(crt_vals[i + 1])});
            auto [value, modulus] = crt_combine(rs);
            rep.add("value", value);
            rep.add("modulus", modulus);
        });
    }

    // ---- gates ----------------------------------------------------------
    auto* gates = app.add_subcommand("gates", "Bruhat gate verification and search");
    {
        auto kind_of = [](const std::string& s) {
            if (s == "swap") return BruhatGateKind::Swap;
            if (s == "andor") return BruhatGateKind::AndOr;
            if (s == "testeq") return BruhatGateKind::TestEq;
            throw CLI::ValidationError("unknown gate kind: " + s);
        };

        auto* verify = gates->add_subcommand("verify", "verify the printed solution");
        verify->add_option("--kind", gate_kind)->required();
        verify->add_option("--prime", gate_prime)->required();
        verify->callback([&] {
            auto r = verify_solution(kind_of(gate_kind), gate_prime);
            rep.pass = r.all_equalities_hold;
            rep.add("equalities", r.all_equalities_hold ? "pass" : "fail");
            std::string residues;
            for (long v : r.inequation_residues) {
                if (!residues.empty()) residues += " ";
                residues += std::to_string(v);
            }
            rep.add("inequation_residues", residues);
            if (!r.all_equalities_hold) exit_code = 1;
        });

        auto* search = gates->add_subcommand("search", "exhaustive mod-p solution scan");
        search->add_option("--kind", gate_kind)->required();
        search->add_option("--prime", gate_prime)->required();
        search->callback([&] {
            auto kind = kind_of(gate_kind);
            auto sols = search_solutions_mod_p(make_gate(kind), kind, gate_prime);
            rep.add("solutions", static_cast<long>(sols.size()));
            int shown = 0;
            for (const auto& z : sols) {
                std::string s;
                for (long v : z) s += (s.empty() ? "" : " ") + std::to_string(v);
                rep.add("z" + std::to_string(shown++), s);
            }
        });

        auto* cand = gates->add_subcommand("candidates", "enumerate the 96 candidate bodies");
        cand->callback([&] {
            auto cs = enumerate_candidates();
            rep.add("candidates", static_cast<long>(cs.size()));
        });
    }

    // ---- gadget ---------------------------------------------------------
    auto* gadget = app.add_subcommand("gadget", "incidence gadget calculations");
    {
        auto* jp = gadget->add_subcommand("jp", "ext(I_{J_p}) by the state recurrence");
        jp->add_option("--prime", jp_prime)->required();
        jp->callback([&] {
            Int e = count_Jp_recurrence(jp_prime);
            rep.add("ext", e);
            rep.add("mod_p", Int(cli_detail::positive_mod(e, jp_prime)));
        });
    }

    // ---- reduce ---------------------------------------------------------
    auto* reduce = app.add_subcommand("reduce", "emit reduction instances");
    {
        auto* h2 = reduce->add_subcommand("height2", "emit Q_p for a poset");
        h2->add_option("--poset", reduce_h2_path)->required();
        h2->add_option("--prime", reduce_h2_prime)->required();
        h2->callback([&] {
            Poset P = read_poset_file(reduce_h2_path);
            std::ostringstream body;
            write_poset(build_Qp(P, reduce_h2_prime), body);
            out << body.str();
        });

        auto* rinc = reduce->add_subcommand("incidence", "emit G_p for a poset");
        rinc->add_option("--poset", reduce_inc_path)->required();
        rinc->add_option("--prime", reduce_inc_prime)->required();
        rinc->callback([&] {
            Poset P = read_poset_file(reduce_inc_path);
            std::ostringstream body;
            write_graph(build_Gp(P, reduce_inc_prime), body);
            out << body.str();
        });
    }

    // ---- recover --------------------------------------------------------
    auto* recover = app.add_subcommand("recover", "recover ext(P) from residues");
    {
        auto* h2 = recover->add_subcommand("height2", "height-2 pipeline");
        h2->add_option("--poset", recover_h2_path)->required();
        h2->callback([&] {
            auto r = recover_ext_height2(read_poset_file(recover_h2_path));
            rep.add("ext", r.ext);
            for (std::size_t i = 0; i < r.residues.size(); ++i)
                rep.add("residue_mod_" + r.residues[i].modulus.get_str(),
                        r.residues[i].residue);
        });

        auto* rinc = recover->add_subcommand("incidence", "incidence pipeline");
        rinc->add_option("--poset", recover_inc_path)->required();
        rinc->callback([&] {
            auto r = recover_ext_incidence(read_poset_file(recover_inc_path));
            rep.add("ext", r.ext);
            rep.add("mode", r.used_search ? "search" : "crt");
            for (std::size_t i = 0; i < r.residues.size(); ++i)
                rep.add("residue_mod_" + r.residues[i].modulus.get_str(),
                        r.residues[i].residue);
        });
    }

    // ---- compile --------------------------------------------------------
    auto* compile = app.add_subcommand("compile", "3CNF to Bruhat framework");
    {
        compile->add_option("--cnf", cnf_path)->required();
        compile->add_option("--prime", compile_prime)->required();
        compile->add_option("--manifest", manifest_path);
        compile->add_option("--sigma", sigma_path);
        compile->add_flag("--dry-run", dry_run);
        compile->callback([&] {
            CnfFormula f = read_dimacs_file(cnf_path);
            if (dry_run) {
                RigidCircuit C = reduce_3sat(f);
                RigidCircuit Cp = parallelize(C, compile_prime);
                rep.add("estimated_length",
                        Int(static_cast<long>(estimate_length(
                            static_cast<long long>(Cp.layers.size()), C.k(),
                            compile_prime))));
                return;
            }
            std::ofstream manifest(manifest_path);
            if (!manifest) throw parse_error("cannot open for writing: " + manifest_path);
            CompileResult res =
                sigma_path.empty()
                    ? compile_end_to_end(f, compile_prime, manifest)
                    : [&] {
                          std::ofstream sigma(sigma_path);
                          if (!sigma)
                              throw parse_error("cannot open for writing: " + sigma_path);
                          return compile_end_to_end(f, compile_prime, manifest, &sigma);
                      }();
            rep.add("n", Int(static_cast<long>(res.framework.n)));
            rep.add("m", Int(static_cast<long>(res.framework.m)));
            rep.add("manifest", manifest_path);
            rep.add("sigma_written", res.sigma_written ? "yes" : "no");
        });
    }

    // ---- selftest -------------------------------------------------------
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    {
        selftest->add_flag("--quick", quick);
        selftest->callback([&] {
            bool all = true;
            for (const auto& fn : acceptance_criteria()) {
                CriterionResult r = fn(quick);
                rep.add("criterion_" + std::to_string(r.id),
                        std::string(r.pass ? "pass" : "FAIL") + " " + r.name + " (" +
                            r.detail + ")");
                all = all && r.pass;
            }
            rep.pass = all;
            if (!all) exit_code = 1;
        });
    }

    // Let global flags like --format-json appear after a subcommand, and make
    // bare group commands ("count" with no kind) a usage error.
    std::function<void(CLI::App*)> finalize = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough();
            if (!sub->get_subcommands({}).empty()) sub->require_subcommand(1);
            finalize(sub);
        }
    };
    finalize(&app);

    try {
        std::vector<const char*> argv = {"lec"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const size_limit_error& e) {
        err << "size limit: " << e.what() << "\n";
        return 3;
    }

    rep.command = app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
    rep.print(out, json);
    return exit_code;
}

}  // namespace lec

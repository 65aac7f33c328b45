// Acceptance gate: runs the fourteen end-to-end criteria and prints one
// pass/fail line per criterion.  Exit code 0 iff all pass.

#include <cstdio>
#include <string>

#include <lec/selftest.hpp>

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    bool all_pass = true;
    for (const auto& fn : lec::acceptance_criteria()) {
        lec::CriterionResult r = fn(quick);
        std::printf("criterion %2d [%s] %s (%s)\n", r.id, r.pass ? "pass" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

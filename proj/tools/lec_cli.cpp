// Command-line entry point; all behavior lives in the run_cli adapter.

#include <iostream>
#include <string>
#include <vector>

#include <lec/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lec::run_cli(args, std::cout, std::cerr);
}

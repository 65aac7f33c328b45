#pragma once

// errors.hpp: exception taxonomy shared by all modules.  The CLI maps these
// to stable exit codes (parse -> 2, resource/size limits -> 3, failed
// check -> 1), so library code should always throw one of the types below
// rather than a bare std::runtime_error.

#include <stdexcept>
#include <string>

namespace lec {

// Malformed text input (posets, permutations, DIMACS, circuits, ...).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured budget (memo entries, enumeration size, ...) was exceeded.
// Budgets guard runaway computations; exceeding one is an error, never a
// silent truncation.
struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// An input violates a hard size precondition (e.g. brute force beyond n=10).
struct size_limit_error : std::runtime_error {
    explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition unrelated to size was violated (bad prime, length mismatch,
// duplicate points, ...).
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lec

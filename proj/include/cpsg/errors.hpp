#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cpsg {

// Malformed input: wrong dimensions, unknown ids, broken invariants.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown inside a solver (iteration cap, failed post-check).
// Raised instead of ever returning a silently wrong answer.
class SolverFailure : public std::runtime_error {
public:
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

// A line outage disconnects the grid graph.
class NetworkSplitError : public std::runtime_error {
public:
    explicit NetworkSplitError(const std::string& what) : std::runtime_error(what) {}
};

// Dispatch problem has no feasible point (load unservable under limits).
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, std::vector<std::string> binding)
        : std::runtime_error(what), binding_constraints(std::move(binding)) {}
    std::vector<std::string> binding_constraints;
};

// Config / data file rejected.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpsg

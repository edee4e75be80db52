#pragma once

#include <string>
#include <vector>

#include "sat/solver.hpp"

namespace sat {

struct Dimacs {
    int num_vars = 0;
    std::vector<std::vector<Lit>> clauses;
};

Dimacs parse_dimacs(const std::string& text);  // throws std::runtime_error
std::string write_dimacs(int num_vars, const std::vector<std::vector<Lit>>& clauses);

// Loads the problem into a fresh solver.
void load_dimacs(const Dimacs& d, Solver& s);

}  // namespace sat

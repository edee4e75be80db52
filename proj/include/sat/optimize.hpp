#pragma once

// Lexicographic objective optimization over counters, by iterative bound
// tightening: solve, read the incumbent value, assert the next-tighter
// bound, re-solve until UNSAT proves optimality.

#include "sat/solver.hpp"

namespace sat {

struct Objective {
    std::vector<Lit> lits;
    bool maximize = false;
};

struct OptimizeResult {
    Status status = Status::Unknown;  // Sat when a model was found
    bool optimal = false;             // every objective proved optimal
    std::vector<int> values;          // achieved value per objective
    std::vector<Lit> bounds;          // assumptions pinning the achieved values
};

OptimizeResult optimize_lexicographic(Solver& s, const std::vector<Objective>& objectives,
                                      const std::vector<Lit>& base_assumptions = {});

}  // namespace sat

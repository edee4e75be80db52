#pragma once

// SMT-LIB2 and DIMACS (plus sidecar variable map) exports of a problem.

#include "cir/ground.hpp"
#include "cir/ir.hpp"

namespace cir {

// Finite sorts become enumerated datatypes; tables become uninterpreted
// functions; cardinalities use ite-sums over Int.
std::string export_smtlib(const Problem& p);

// Grounds the problem into a fresh solver and renders its clauses.
struct DimacsExport {
    std::string dimacs;
    std::string varmap_json;
    std::string manifest_json;
};
DimacsExport export_dimacs(Problem& p);

}  // namespace cir

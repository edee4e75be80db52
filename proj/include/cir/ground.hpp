#pragma once

// Incremental grounding of a cir::Problem into a CDCL solver. Each function
// cell becomes a one-hot block of SAT variables; formulas go through a
// Tseitin transformation; cardinality constraints through sequential
// counters. Tracks which clause ranges each assertion group produced.

#include <map>
#include <unordered_map>

#include "cir/ir.hpp"
#include "sat/solver.hpp"

namespace cir {

struct ClauseRange {
    size_t begin = 0, end = 0;  // clause indices in the solver, half-open
};

class Grounder {
  public:
    Grounder(Problem& problem, sat::Solver& solver) : p_(problem), s_(solver) {}

    // Grounds assertions and cardinalities added since the previous call.
    void ground_pending();

    sat::Lit cell_lit(int table, const std::vector<int>& args, int value);
    sat::Lit cell_lit(const Term& t, int value) { return cell_lit(t.table, t.args, value); }
    sat::Lit bool_lit(int bvar);

    // Reads a cell from the solver's model; throws on one-hot violation.
    int read_cell(int table, const std::vector<int>& args) const;
    bool read_bool(int bvar) const;

    const std::vector<std::pair<std::string, ClauseRange>>& manifest() const { return manifest_; }

    // Description of an allocated SAT variable, for the DIMACS sidecar map.
    struct VarInfo {
        std::string table;          // empty for plain booleans / aux
        std::vector<int> args;
        int value = -1;
        std::string name;           // boolean name, or empty for aux
    };
    std::vector<VarInfo> var_map() const;

    Problem& problem() { return p_; }
    sat::Solver& solver() { return s_; }

  private:
    sat::Lit tseitin(const Formula& f);
    void assert_top(const Formula& f);
    void alloc_table(int table);
    sat::Lit card_lit(const CardLit& l);
    void ground_card(const Cardinality& c);

    Problem& p_;
    sat::Solver& s_;
    size_t next_assertion_ = 0;
    size_t next_card_ = 0;
    std::vector<int> table_base_;            // first SAT var of each table's block
    std::vector<int> bool_var_;              // bvar -> SAT var
    // Keyed by shared_ptr so cached nodes stay alive; raw pointers would be
    // reused by later allocations and alias entries.
    std::unordered_map<Formula, sat::Lit> cache_;
    std::vector<std::pair<std::string, ClauseRange>> manifest_;
};

}  // namespace cir

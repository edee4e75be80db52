#pragma once

// Sequential-counter cardinality encoding. The counter is encoded in both
// directions, so its outputs can be asserted or assumed with either polarity.

#include "sat/solver.hpp"

namespace sat {

// Unary counter over `lits`: outputs[j] is true iff at least j+1 of the
// literals are true (for j in 0..lits.size()-1).
std::vector<Lit> encode_counter(Solver& s, const std::vector<Lit>& lits);

struct CounterBounds {
    std::vector<Lit> outputs;
    // Literal asserting count <= k (or >= k); constant handled by caller when
    // out of range.
    Lit at_most(int k) const { return ~outputs[k]; }   // valid for k < n
    Lit at_least(int k) const { return outputs[k - 1]; }  // valid for 1 <= k <= n
};

// Convenience: permanently assert a bound over lits.
void add_at_most(Solver& s, const std::vector<Lit>& lits, int k);
void add_at_least(Solver& s, const std::vector<Lit>& lits, int k);
void add_exactly(Solver& s, const std::vector<Lit>& lits, int k);

}  // namespace sat

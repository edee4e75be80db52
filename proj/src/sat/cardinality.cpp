#include "sat/cardinality.hpp"

namespace sat {

// s[i][j] <-> at least j+1 true among the first i+1 literals.
std::vector<Lit> encode_counter(Solver& s, const std::vector<Lit>& lits) {
    const int n = (int)lits.size();
    if (n == 0) return {};
    std::vector<Lit> prev(n), cur(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i && j < n; ++j) cur[j] = Lit::pos(s.new_var());
        for (int j = 0; j <= i && j < n; ++j) {
            Lit sij = cur[j];
            Lit x = lits[i];
            if (i == 0) {
                // s[0][0] <-> x
                s.add_clause({~x, sij});
                s.add_clause({~sij, x});
                continue;
            }
            bool has_prev_j = j <= i - 1;
            if (j == 0) {
                // s[i][0] <-> s[i-1][0] | x
                s.add_clause({~prev[0], sij});
                s.add_clause({~x, sij});
                s.add_clause({~sij, prev[0], x});
            } else if (has_prev_j) {
                // s[i][j] <-> s[i-1][j] | (s[i-1][j-1] & x)
                s.add_clause({~prev[j], sij});
                s.add_clause({~prev[j - 1], ~x, sij});
                s.add_clause({~sij, prev[j], x});
                s.add_clause({~sij, prev[j], prev[j - 1]});
            } else {
                // j == i: s[i][i] <-> s[i-1][i-1] & x
                s.add_clause({~prev[j - 1], ~x, sij});
                s.add_clause({~sij, prev[j - 1]});
                s.add_clause({~sij, x});
            }
        }
        std::swap(prev, cur);
    }
    prev.resize(n);
    return prev;
}

void add_at_most(Solver& s, const std::vector<Lit>& lits, int k) {
    if (k < 0) {
        s.add_clause({});
        return;
    }
    if (k >= (int)lits.size()) return;
    auto outs = encode_counter(s, lits);
    s.add_clause({~outs[k]});
}

void add_at_least(Solver& s, const std::vector<Lit>& lits, int k) {
    if (k <= 0) return;
    if (k > (int)lits.size()) {
        s.add_clause({});
        return;
    }
    if (k == 1) {
        s.add_clause(lits);
        return;
    }
    auto outs = encode_counter(s, lits);
    s.add_clause({outs[k - 1]});
}

void add_exactly(Solver& s, const std::vector<Lit>& lits, int k) {
    if (k < 0 || k > (int)lits.size()) {
        s.add_clause({});
        return;
    }
    auto outs = encode_counter(s, lits);
    if (k < (int)lits.size()) s.add_clause({~outs[k]});
    if (k >= 1) s.add_clause({outs[k - 1]});
}

}  // namespace sat

#include "sat/optimize.hpp"

#include <cstdio>
#include <cstdlib>

#include "sat/cardinality.hpp"

namespace sat {

namespace {
bool trace_enabled() {
    static bool on = std::getenv("MGINFER_TRACE") != nullptr;
    return on;
}
}  // namespace

namespace {
int count_true(const Solver& s, const std::vector<Lit>& lits) {
    int n = 0;
    for (Lit l : lits) n += s.model_value(l);
    return n;
}
}  // namespace

OptimizeResult optimize_lexicographic(Solver& s, const std::vector<Objective>& objectives,
                                      const std::vector<Lit>& base_assumptions) {
    OptimizeResult out;
    std::vector<Lit> assumptions = base_assumptions;
    out.status = s.solve(assumptions);
    if (out.status != Status::Sat) return out;
    out.optimal = true;

    for (const auto& obj : objectives) {
        const int n = (int)obj.lits.size();
        int incumbent = count_true(s, obj.lits);
        std::vector<Lit> outs = encode_counter(s, obj.lits);
        bool proved = n == 0;
        while (!proved) {
            // next tighter bound
            Lit bound;
            if (obj.maximize) {
                if (incumbent >= n) {
                    proved = true;
                    break;
                }
                bound = outs[incumbent];  // count >= incumbent + 1
            } else {
                if (incumbent <= 0) {
                    proved = true;
                    break;
                }
                bound = ~outs[incumbent - 1];  // count <= incumbent - 1
            }
            auto attempt = assumptions;
            attempt.push_back(bound);
            if (trace_enabled())
                std::fprintf(stderr, "[optimize] incumbent %d, trying %s, conflicts so far %lld\n", incumbent,
                             obj.maximize ? ">= incumbent+1" : "<= incumbent-1", (long long)s.conflicts());
            Status st = s.solve(attempt);
            if (st == Status::Sat) {
                incumbent = count_true(s, obj.lits);
            } else if (st == Status::Unsat) {
                proved = true;
            } else {
                out.optimal = false;
                break;
            }
            if (trace_enabled())
                std::fprintf(stderr, "[optimize] -> %s, incumbent %d, conflicts %lld\n",
                             st == Status::Sat ? "sat" : st == Status::Unsat ? "optimal" : "budget", incumbent,
                             (long long)s.conflicts());
        }
        out.values.push_back(incumbent);
        // pin this objective at its achieved value for the rest
        if (n > 0) {
            Lit pin_hi = obj.maximize ? (incumbent > 0 ? outs[incumbent - 1] : Lit())      // >= incumbent
                                      : (incumbent < n ? ~outs[incumbent] : Lit());        // <= incumbent
            if (pin_hi.valid()) {
                assumptions.push_back(pin_hi);
                out.bounds.push_back(pin_hi);
            }
        }
        // restore a model satisfying all pinned bounds
        if (s.solve(assumptions) != Status::Sat) {
            out.status = Status::Unknown;
            out.optimal = false;
            return out;
        }
    }
    out.status = Status::Sat;
    return out;
}

}  // namespace sat

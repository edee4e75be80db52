#pragma once

// CDCL solver: two-watched literals, first-UIP learning, VSIDS activities,
// phase saving, Luby restarts, assumptions with core extraction, incremental
// clause addition, and an independent model verifier.

#include <cstdint>
#include <memory>
#include <vector>

namespace sat {

using Var = int32_t;

struct Lit {
    int32_t x = -2;  // 2*var + sign
    Lit() = default;
    constexpr Lit(Var v, bool negated) : x(v * 2 + (negated ? 1 : 0)) {}
    static constexpr Lit pos(Var v) { return Lit(v, false); }
    static constexpr Lit neg(Var v) { return Lit(v, true); }
    Var var() const { return x >> 1; }
    bool sign() const { return x & 1; }  // true = negated
    Lit operator~() const {
        Lit q;
        q.x = x ^ 1;
        return q;
    }
    bool valid() const { return x >= 0; }
    friend auto operator<=>(const Lit&, const Lit&) = default;
};

enum class Status : uint8_t { Sat, Unsat, Unknown };

class Solver {
  public:
    Solver();
    ~Solver();

    Var new_var();
    int num_vars() const { return (int)assigns_.size(); }
    void ensure_var(Var v);

    // False if the clause database is already unsatisfiable.
    bool add_clause(std::vector<Lit> lits);
    bool okay() const { return ok_; }

    void set_seed(uint64_t seed);
    void set_random_decision_freq(double f) { random_freq_ = f; }
    void set_conflict_budget(int64_t budget) { conflict_budget_ = budget; }  // <0 = off

    Status solve(const std::vector<Lit>& assumptions = {});

    bool model_value(Var v) const { return model_[v]; }
    bool model_value(Lit l) const { return model_[l.var()] ^ l.sign(); }
    const std::vector<bool>& model() const { return model_; }
    // After Unsat under assumptions: a subset of them inconsistent with the clauses.
    const std::vector<Lit>& core() const { return core_; }

    // Linear re-check of the current model against every original clause.
    bool verify_model() const;

    int64_t conflicts() const { return conflicts_; }
    int64_t propagations() const { return propagations_; }
    size_t num_clauses() const { return originals_.size(); }
    const std::vector<std::vector<Lit>>& original_clauses() const { return originals_; }

  private:
    struct Clause;
    struct Watcher {
        Clause* c;
        Lit blocker;
    };

    using lbool = int8_t;  // 1 true, -1 false, 0 undef
    lbool value(Lit l) const {
        lbool v = assigns_[l.var()];
        return l.sign() ? (lbool)-v : v;
    }

    bool enqueue(Lit l, Clause* reason);
    Clause* propagate();
    void analyze(Clause* conflict, std::vector<Lit>& learnt, int& bt_level);
    void analyze_final(Lit p);
    bool lit_redundant(Lit l);
    void cancel_until(int level);
    Lit pick_branch();
    Status search();
    void reduce_db();
    void attach(Clause* c);
    void detach(Clause* c);
    void bump_var(Var v);
    void bump_clause(Clause* c);
    void rebuild_heap();

    // heap keyed by activity
    void heap_insert(Var v);
    Var heap_pop();
    void heap_up(int i);
    void heap_down(int i);
    bool heap_contains(Var v) const { return heap_pos_[v] >= 0; }

    bool ok_ = true;
    std::vector<lbool> assigns_;
    std::vector<bool> phase_;
    std::vector<int> level_;
    std::vector<Clause*> reason_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;

    std::vector<std::vector<Watcher>> watches_;
    std::vector<Clause*> clauses_;
    std::vector<Clause*> learnts_;
    std::vector<std::vector<Lit>> originals_;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<Var> heap_;
    std::vector<int> heap_pos_;
    double cla_inc_ = 1.0;

    std::vector<Lit> assumptions_;
    std::vector<Lit> core_;
    std::vector<bool> model_;

    std::vector<char> seen_;
    std::vector<Lit> analyze_stack_;

    uint64_t rng_ = 0x9e3779b97f4a7c15ull;
    double random_freq_ = 0.0;
    int64_t conflicts_ = 0;
    int64_t propagations_ = 0;
    int64_t conflict_budget_ = -1;
    double max_learnts_ = 0;
};

}  // namespace sat

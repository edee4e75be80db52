#include "sat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace sat {

struct Solver::Clause {
    float act = 0;
    bool learnt = false;
    std::vector<Lit> lits;
};

Solver::Solver() = default;

Solver::~Solver() {
    for (auto* c : clauses_) delete c;
    for (auto* c : learnts_) delete c;
}

Var Solver::new_var() {
    Var v = (int)assigns_.size();
    assigns_.push_back(0);
    phase_.push_back(false);
    level_.push_back(0);
    reason_.push_back(nullptr);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
}

void Solver::ensure_var(Var v) {
    while (num_vars() <= v) new_var();
}

void Solver::set_seed(uint64_t seed) { rng_ = seed * 2654435761u + 0x9e3779b97f4a7c15ull; }

void Solver::attach(Clause* c) {
    watches_[(~c->lits[0]).x].push_back({c, c->lits[1]});
    watches_[(~c->lits[1]).x].push_back({c, c->lits[0]});
}

void Solver::detach(Clause* c) {
    for (Lit w : {c->lits[0], c->lits[1]}) {
        auto& ws = watches_[(~w).x];
        for (size_t i = 0; i < ws.size(); ++i)
            if (ws[i].c == c) {
                ws[i] = ws.back();
                ws.pop_back();
                break;
            }
    }
}

bool Solver::add_clause(std::vector<Lit> lits) {
    assert(trail_lim_.empty());
    if (!ok_) return false;
    for (Lit l : lits) ensure_var(l.var());
    originals_.push_back(lits);

    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    for (size_t i = 0; i < lits.size(); ++i) {
        Lit l = lits[i];
        if (i + 1 < lits.size() && lits[i + 1] == ~l) return true;  // tautology
        if (i > 0 && l == lits[i - 1]) continue;
        lbool v = value(l);
        if (v > 0) return true;  // satisfied at level 0
        if (v < 0) continue;     // falsified at level 0
        out.push_back(l);
    }
    if (out.empty()) {
        ok_ = false;
        return false;
    }
    if (out.size() == 1) {
        if (!enqueue(out[0], nullptr)) {
            ok_ = false;
            return false;
        }
        if (propagate() != nullptr) {
            ok_ = false;
            return false;
        }
        return true;
    }
    auto* c = new Clause{0, false, std::move(out)};
    clauses_.push_back(c);
    attach(c);
    return true;
}

bool Solver::enqueue(Lit l, Clause* reason) {
    lbool v = value(l);
    if (v != 0) return v > 0;
    assigns_[l.var()] = l.sign() ? -1 : 1;
    level_[l.var()] = (int)trail_lim_.size();
    reason_[l.var()] = reason;
    trail_.push_back(l);
    return true;
}

Solver::Clause* Solver::propagate() {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        propagations_++;
        auto& ws = watches_[p.x];
        size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i];
            if (value(w.blocker) > 0) {
                ws[j++] = ws[i++];
                continue;
            }
            Clause* c = w.c;
            auto& ls = c->lits;
            Lit false_lit = ~p;
            if (ls[0] == false_lit) std::swap(ls[0], ls[1]);
            if (value(ls[0]) > 0) {
                ws[j++] = {c, ls[0]};
                ++i;
                continue;
            }
            bool moved = false;
            for (size_t k = 2; k < ls.size(); ++k) {
                if (value(ls[k]) >= 0) {
                    std::swap(ls[1], ls[k]);
                    watches_[(~ls[1]).x].push_back({c, ls[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
                continue;
            }
            // unit or conflict
            ws[j++] = {c, ls[0]};
            ++i;
            if (value(ls[0]) < 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return c;
            }
            enqueue(ls[0], c);
        }
        ws.resize(j);
    }
    return nullptr;
}

void Solver::bump_var(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_contains(v)) heap_up(heap_pos_[v]);
}

void Solver::bump_clause(Clause* c) {
    c->act += (float)cla_inc_;
    if (c->act > 1e20f) {
        for (auto* l : learnts_) l->act *= 1e-20f;
        cla_inc_ *= 1e-20;
    }
}

void Solver::analyze(Clause* conflict, std::vector<Lit>& learnt, int& bt_level) {
    learnt.clear();
    learnt.push_back(Lit());  // slot for the asserting literal
    int counter = 0;
    Lit p;
    p.x = -2;
    size_t idx = trail_.size();
    Clause* reason = conflict;
    int current_level = (int)trail_lim_.size();

    do {
        bump_clause(reason);
        // lits[0] of a reason clause is its implied literal; skip it there.
        for (size_t k = (p.valid() ? 1 : 0); k < reason->lits.size(); ++k) {
            Lit q = reason->lits[k];
            Var v = q.var();
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                bump_var(v);
                if (level_[v] >= current_level)
                    counter++;
                else
                    learnt.push_back(q);
            }
        }
        while (!seen_[trail_[--idx].var()]) {}
        p = trail_[idx];
        reason = reason_[p.var()];
        seen_[p.var()] = 0;
        counter--;
    } while (counter > 0);
    learnt[0] = ~p;

    // Drop literals implied by the remaining ones.
    analyze_stack_ = learnt;  // marks to clear afterwards
    size_t j = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
        if (reason_[learnt[i].var()] == nullptr || !lit_redundant(learnt[i])) learnt[j++] = learnt[i];
    }
    learnt.resize(j);

    bt_level = 0;
    if (learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t i = 2; i < learnt.size(); ++i)
            if (level_[learnt[i].var()] > level_[learnt[max_i].var()]) max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        bt_level = level_[learnt[1].var()];
    }
    for (Lit l : analyze_stack_) seen_[l.var()] = 0;
    analyze_stack_.clear();
}

// A literal is redundant if its reason's other literals are all seen or at
// level 0 (one-step self-subsumption).
bool Solver::lit_redundant(Lit l) {
    Clause* r = reason_[l.var()];
    if (!r) return false;
    for (size_t k = 1; k < r->lits.size(); ++k) {
        Lit q = r->lits[k];
        if (level_[q.var()] > 0 && !seen_[q.var()]) return false;
    }
    return true;
}

// p is the true literal contradicting a failed assumption (~p). Builds the
// core as the subset of assumption literals forcing p.
void Solver::analyze_final(Lit p) {
    core_.clear();
    core_.push_back(~p);
    if (trail_lim_.empty()) return;
    seen_[p.var()] = 1;
    for (size_t i = trail_.size(); i-- > (size_t)trail_lim_[0];) {
        Var v = trail_[i].var();
        if (!seen_[v]) continue;
        if (reason_[v] == nullptr) {
            if (level_[v] > 0 && trail_[i] != p) core_.push_back(trail_[i]);
        } else {
            for (size_t k = 1; k < reason_[v]->lits.size(); ++k) {
                Lit q = reason_[v]->lits[k];
                if (level_[q.var()] > 0) seen_[q.var()] = 1;
            }
        }
        seen_[v] = 0;
    }
    seen_[p.var()] = 0;
}

void Solver::cancel_until(int level) {
    if ((int)trail_lim_.size() <= level) return;
    for (size_t i = trail_.size(); i-- > (size_t)trail_lim_[level];) {
        Var v = trail_[i].var();
        assigns_[v] = 0;
        phase_[v] = !trail_[i].sign();
        reason_[v] = nullptr;
        if (!heap_contains(v)) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

void Solver::heap_insert(Var v) {
    heap_pos_[v] = (int)heap_.size();
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
}

Var Solver::heap_pop() {
    Var top = heap_[0];
    heap_pos_[top] = -1;
    if (heap_.size() > 1) {
        heap_[0] = heap_.back();
        heap_pos_[heap_[0]] = 0;
        heap_.pop_back();
        heap_down(0);
    } else {
        heap_.pop_back();
    }
    return top;
}

void Solver::heap_up(int i) {
    Var v = heap_[i];
    while (i > 0) {
        int parent = (i - 1) >> 1;
        if (activity_[heap_[parent]] >= activity_[v]) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = i;
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

void Solver::heap_down(int i) {
    Var v = heap_[i];
    int n = (int)heap_.size();
    while (true) {
        int l = 2 * i + 1, r = 2 * i + 2, best = i;
        double best_act = activity_[v];
        if (l < n && activity_[heap_[l]] > best_act) {
            best = l;
            best_act = activity_[heap_[l]];
        }
        if (r < n && activity_[heap_[r]] > best_act) best = r;
        if (best == i) break;
        heap_[i] = heap_[best];
        heap_pos_[heap_[i]] = i;
        i = best;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

void Solver::rebuild_heap() {
    heap_.clear();
    for (Var v = 0; v < num_vars(); ++v) {
        heap_pos_[v] = -1;
        if (assigns_[v] == 0) heap_insert(v);
    }
}

Lit Solver::pick_branch() {
    if (random_freq_ > 0) {
        rng_ = rng_ * 6364136223846793005ull + 1442695040888963407ull;
        double r = (double)(rng_ >> 11) / (double)(1ull << 53);
        if (r < random_freq_ && !heap_.empty()) {
            size_t idx = (size_t)(rng_ % heap_.size());
            Var v = heap_[idx];
            if (assigns_[v] == 0) return Lit(v, !phase_[v]);
        }
    }
    while (!heap_.empty()) {
        Var v = heap_pop();
        if (assigns_[v] == 0) return Lit(v, !phase_[v]);
    }
    Lit none;
    return none;
}

void Solver::reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [](Clause* a, Clause* b) {
        if (a->lits.size() == 2 && b->lits.size() != 2) return false;
        if (b->lits.size() == 2 && a->lits.size() != 2) return true;
        return a->act < b->act;
    });
    size_t keep_from = learnts_.size() / 2;
    std::vector<Clause*> kept;
    for (size_t i = 0; i < learnts_.size(); ++i) {
        Clause* c = learnts_[i];
        bool locked = false;
        lbool v0 = value(c->lits[0]);
        if (v0 > 0 && reason_[c->lits[0].var()] == c) locked = true;
        if (i >= keep_from || locked || c->lits.size() == 2) {
            kept.push_back(c);
        } else {
            detach(c);
            delete c;
        }
    }
    learnts_ = std::move(kept);
}

namespace {
int64_t luby(int64_t x) {
    // 0-based index into 1,1,2,1,1,2,4,...
    int64_t size = 1, seq = 0;
    while (size < x + 1) {
        seq++;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return (int64_t)1 << seq;
}
}  // namespace

Status Solver::search() {
    int64_t restart_round = 0;
    int64_t conflicts_until_restart = 100 * luby(restart_round);
    int64_t start_conflicts = conflicts_;
    std::vector<Lit> learnt;

    while (true) {
        Clause* conflict = propagate();
        if (conflict != nullptr) {
            conflicts_++;
            if (trail_lim_.empty()) return Status::Unsat;
            int bt;
            analyze(conflict, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                if (!enqueue(learnt[0], nullptr)) return Status::Unsat;
            } else {
                auto* c = new Clause{0, true, learnt};
                learnts_.push_back(c);
                attach(c);
                bump_clause(c);
                enqueue(learnt[0], c);
            }
            var_inc_ /= 0.95;
            cla_inc_ /= 0.999;
            if (conflict_budget_ >= 0 && conflicts_ - start_conflicts > conflict_budget_) return Status::Unknown;
            if (--conflicts_until_restart <= 0) {
                restart_round++;
                conflicts_until_restart = 100 * luby(restart_round);
                cancel_until(0);
                if ((double)learnts_.size() > max_learnts_) {
                    reduce_db();
                    max_learnts_ *= 1.1;
                }
            }
        } else {
            if ((int)trail_lim_.size() < (int)assumptions_.size()) {
                Lit a = assumptions_[trail_lim_.size()];
                lbool v = value(a);
                if (v > 0) {
                    trail_lim_.push_back((int)trail_.size());  // dummy level
                    continue;
                }
                if (v < 0) {
                    analyze_final(~a);
                    return Status::Unsat;
                }
                trail_lim_.push_back((int)trail_.size());
                enqueue(a, nullptr);
                continue;
            }
            Lit next = pick_branch();
            if (!next.valid()) {
                model_.assign(num_vars(), false);
                for (Var v = 0; v < num_vars(); ++v) model_[v] = assigns_[v] > 0;
                return Status::Sat;
            }
            trail_lim_.push_back((int)trail_.size());
            enqueue(next, nullptr);
        }
    }
}

Status Solver::solve(const std::vector<Lit>& assumptions) {
    if (!ok_) {
        core_.clear();
        return Status::Unsat;
    }
    for (Lit l : assumptions) ensure_var(l.var());
    assumptions_ = assumptions;
    core_.clear();
    if (max_learnts_ < 1000) max_learnts_ = std::max<double>(1000, (double)clauses_.size() / 3);
    rebuild_heap();
    Status st = search();
    cancel_until(0);
    assumptions_.clear();
    return st;
}

bool Solver::verify_model() const {
    for (const auto& c : originals_) {
        bool sat_c = false;
        for (Lit l : c)
            if (l.var() < (int)model_.size() && model_value(l)) {
                sat_c = true;
                break;
            }
        if (!sat_c) return false;
    }
    return true;
}

}  // namespace sat

#include "cir/ground.hpp"

#include "sat/cardinality.hpp"

namespace cir {

void Grounder::alloc_table(int table) {
    while ((int)table_base_.size() <= table) table_base_.push_back(-1);
    if (table_base_[table] >= 0) return;
    int cells = p_.cell_count(table);
    int width = p_.sorts[p_.tables[table].codomain].size;
    int base = s_.num_vars();
    table_base_[table] = base;
    s_.ensure_var(base + cells * width - 1);
    size_t from = s_.num_clauses();
    for (int c = 0; c < cells; ++c) {
        std::vector<sat::Lit> vals;
        for (int v = 0; v < width; ++v) vals.push_back(sat::Lit::pos(base + c * width + v));
        s_.add_clause(vals);  // at least one value
        for (int v = 0; v < width; ++v)
            for (int w = v + 1; w < width; ++w) s_.add_clause({~vals[v], ~vals[w]});
    }
    manifest_.push_back({"onehot:" + p_.tables[table].name, {from, s_.num_clauses()}});
}

sat::Lit Grounder::cell_lit(int table, const std::vector<int>& args, int value) {
    alloc_table(table);
    int width = p_.sorts[p_.tables[table].codomain].size;
    return sat::Lit::pos(table_base_[table] + p_.cell_index(table, args) * width + value);
}

sat::Lit Grounder::bool_lit(int bvar) {
    while ((int)bool_var_.size() <= bvar) {
        bool_var_.push_back(s_.num_vars());
        s_.ensure_var(s_.num_vars());
    }
    return sat::Lit::pos(bool_var_[bvar]);
}

sat::Lit Grounder::tseitin(const Formula& f) {
    switch (f->op) {
        case Op::True: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            sat::Lit l = sat::Lit::pos(s_.new_var());
            s_.add_clause({l});
            return cache_[f] = l;
        }
        case Op::False: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            sat::Lit l = sat::Lit::pos(s_.new_var());
            s_.add_clause({~l});
            return cache_[f] = l;
        }
        case Op::BVar: return bool_lit(f->bvar);
        case Op::CellEq: return cell_lit(f->t1, f->value);
        case Op::TermEq: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            // case split over the shared codomain
            int width = p_.sorts[p_.tables[f->t1.table].codomain].size;
            std::vector<Formula> cases;
            for (int v = 0; v < width; ++v) cases.push_back(f_and({f_eq(f->t1, v), f_eq(f->t2, v)}));
            sat::Lit l = tseitin(f_or(std::move(cases)));
            return cache_[f] = l;
        }
        case Op::Not: return ~tseitin(f->kids[0]);
        case Op::Implies: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            sat::Lit l = tseitin(f_or({f_not(f->kids[0]), f->kids[1]}));
            return cache_[f] = l;
        }
        case Op::Iff: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            sat::Lit a = tseitin(f->kids[0]), b = tseitin(f->kids[1]);
            sat::Lit l = sat::Lit::pos(s_.new_var());
            s_.add_clause({~l, ~a, b});
            s_.add_clause({~l, a, ~b});
            s_.add_clause({l, a, b});
            s_.add_clause({l, ~a, ~b});
            return cache_[f] = l;
        }
        case Op::And: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            std::vector<sat::Lit> ks;
            for (const auto& k : f->kids) ks.push_back(tseitin(k));
            sat::Lit l = sat::Lit::pos(s_.new_var());
            std::vector<sat::Lit> back{l};
            for (sat::Lit k : ks) {
                s_.add_clause({~l, k});
                back.push_back(~k);
            }
            s_.add_clause(back);
            return cache_[f] = l;
        }
        case Op::Or: {
            auto it = cache_.find(f);
            if (it != cache_.end()) return it->second;
            std::vector<sat::Lit> ks;
            for (const auto& k : f->kids) ks.push_back(tseitin(k));
            sat::Lit l = sat::Lit::pos(s_.new_var());
            std::vector<sat::Lit> fwd{~l};
            for (sat::Lit k : ks) {
                s_.add_clause({l, ~k});
                fwd.push_back(k);
            }
            s_.add_clause(fwd);
            return cache_[f] = l;
        }
    }
    throw std::logic_error("unreachable");
}

// Top-level assertions avoid a Tseitin variable for outer conjunctions and
// plain disjunctions of literals.
void Grounder::assert_top(const Formula& f) {
    switch (f->op) {
        case Op::True: return;
        case Op::False: s_.add_clause({}); return;
        case Op::And:
            for (const auto& k : f->kids) assert_top(k);
            return;
        case Op::Implies:
            assert_top(f_or({f_not(f->kids[0]), f->kids[1]}));
            return;
        case Op::Or: {
            std::vector<sat::Lit> clause;
            for (const auto& k : f->kids) clause.push_back(tseitin(k));
            s_.add_clause(clause);
            return;
        }
        default: s_.add_clause({tseitin(f)});
    }
}

sat::Lit Grounder::card_lit(const CardLit& l) {
    sat::Lit lit = l.is_bool ? bool_lit(l.bvar) : cell_lit(l.t, l.value);
    return l.positive ? lit : ~lit;
}

void Grounder::ground_card(const Cardinality& c) {
    std::vector<sat::Lit> lits;
    for (const auto& l : c.lits) lits.push_back(card_lit(l));
    switch (c.sense) {
        case Sense::AtMost: sat::add_at_most(s_, lits, c.bound); break;
        case Sense::AtLeast: sat::add_at_least(s_, lits, c.bound); break;
        case Sense::Exactly: sat::add_exactly(s_, lits, c.bound); break;
    }
}

void Grounder::ground_pending() {
    for (; next_assertion_ < p_.assertions.size(); ++next_assertion_) {
        const auto& a = p_.assertions[next_assertion_];
        size_t from = s_.num_clauses();
        assert_top(a.f);
        manifest_.push_back({a.group, {from, s_.num_clauses()}});
    }
    for (; next_card_ < p_.cards.size(); ++next_card_) {
        const auto& a = p_.cards[next_card_];
        size_t from = s_.num_clauses();
        ground_card(a.card);
        manifest_.push_back({a.group, {from, s_.num_clauses()}});
    }
}

int Grounder::read_cell(int table, const std::vector<int>& args) const {
    int width = p_.sorts[p_.tables[table].codomain].size;
    int base = table_base_[table] + p_.cell_index(table, args) * width;
    int found = -1;
    for (int v = 0; v < width; ++v) {
        if (s_.model_value(sat::Var(base + v))) {
            if (found >= 0) throw std::logic_error("one-hot violation in table " + p_.tables[table].name);
            found = v;
        }
    }
    if (found < 0) throw std::logic_error("empty cell in table " + p_.tables[table].name);
    return found;
}

bool Grounder::read_bool(int bvar) const { return s_.model_value(sat::Var(bool_var_[bvar])); }

std::vector<Grounder::VarInfo> Grounder::var_map() const {
    std::vector<VarInfo> out(s_.num_vars());
    for (size_t t = 0; t < table_base_.size(); ++t) {
        if (table_base_[t] < 0) continue;
        const Table& tab = p_.tables[t];
        int width = p_.sorts[tab.codomain].size;
        int cells = p_.cell_count((int)t);
        std::vector<int> args(tab.domain.size(), 0);
        for (int c = 0; c < cells; ++c) {
            for (int v = 0; v < width; ++v) {
                VarInfo& vi = out[table_base_[t] + c * width + v];
                vi.table = tab.name;
                vi.args = args;
                vi.value = v;
            }
            for (int i = (int)args.size() - 1; i >= 0; --i) {
                if (++args[i] < p_.sorts[tab.domain[i]].size) break;
                args[i] = 0;
            }
        }
    }
    for (size_t b = 0; b < bool_var_.size(); ++b) out[bool_var_[b]].name = p_.bool_names[b];
    return out;
}

}  // namespace cir

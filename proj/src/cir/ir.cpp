#include "cir/ir.hpp"

#include <stdexcept>

namespace cir {

namespace {
Formula make(Node n) { return std::make_shared<Node>(std::move(n)); }
}  // namespace

Formula f_true() {
    static Formula t = make({Op::True});
    return t;
}

Formula f_false() {
    static Formula f = make({Op::False});
    return f;
}

Formula f_bool(int bvar) {
    Node n{Op::BVar};
    n.bvar = bvar;
    return make(std::move(n));
}

Formula f_eq(Term t, int value) {
    Node n{Op::CellEq};
    n.t1 = std::move(t);
    n.value = value;
    return make(std::move(n));
}

Formula f_ne(Term t, int value) { return f_not(f_eq(std::move(t), value)); }

Formula f_eq2(Term a, Term b) {
    Node n{Op::TermEq};
    n.t1 = std::move(a);
    n.t2 = std::move(b);
    return make(std::move(n));
}

Formula f_not(Formula f) {
    if (f->op == Op::True) return f_false();
    if (f->op == Op::False) return f_true();
    if (f->op == Op::Not) return f->kids[0];
    Node n{Op::Not};
    n.kids = {std::move(f)};
    return make(std::move(n));
}

Formula f_and(std::vector<Formula> kids) {
    std::vector<Formula> out;
    for (auto& k : kids) {
        if (k->op == Op::False) return f_false();
        if (k->op == Op::True) continue;
        out.push_back(std::move(k));
    }
    if (out.empty()) return f_true();
    if (out.size() == 1) return out[0];
    Node n{Op::And};
    n.kids = std::move(out);
    return make(std::move(n));
}

Formula f_or(std::vector<Formula> kids) {
    std::vector<Formula> out;
    for (auto& k : kids) {
        if (k->op == Op::True) return f_true();
        if (k->op == Op::False) continue;
        out.push_back(std::move(k));
    }
    if (out.empty()) return f_false();
    if (out.size() == 1) return out[0];
    Node n{Op::Or};
    n.kids = std::move(out);
    return make(std::move(n));
}

Formula f_implies(Formula a, Formula b) {
    if (a->op == Op::True) return b;
    if (a->op == Op::False) return f_true();
    if (b->op == Op::True) return f_true();
    if (b->op == Op::False) return f_not(a);
    Node n{Op::Implies};
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Formula f_iff(Formula a, Formula b) {
    if (a->op == Op::True) return b;
    if (b->op == Op::True) return a;
    if (a->op == Op::False) return f_not(b);
    if (b->op == Op::False) return f_not(a);
    Node n{Op::Iff};
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

int Problem::add_sort(std::string name, int size) {
    if (size < 1) throw std::invalid_argument("sort " + name + " must have positive size");
    sorts.push_back({std::move(name), size});
    return (int)sorts.size() - 1;
}

int Problem::add_table(std::string name, std::vector<int> domain, int codomain) {
    tables.push_back({std::move(name), std::move(domain), codomain});
    return (int)tables.size() - 1;
}

int Problem::add_bool(std::string name) {
    bool_names.push_back(std::move(name));
    return (int)bool_names.size() - 1;
}

void Problem::assert_formula(const std::string& group, Formula f) {
    check_well_sorted(f);
    assertions.push_back({group, std::move(f)});
}

void Problem::assert_card(const std::string& group, Cardinality c) {
    if (c.bound < 0 || c.bound > (int)c.lits.size())
        throw std::invalid_argument("cardinality bound out of range");
    for (const auto& l : c.lits)
        if (!l.is_bool) check_term(l.t);
    cards.push_back({group, std::move(c)});
}

int Problem::cell_count(int table) const {
    int n = 1;
    for (int s : tables[table].domain) n *= sorts[s].size;
    return n;
}

int Problem::cell_index(int table, const std::vector<int>& args) const {
    const Table& t = tables[table];
    int idx = 0;
    for (size_t i = 0; i < t.domain.size(); ++i) idx = idx * sorts[t.domain[i]].size + args[i];
    return idx;
}

void Problem::check_term(const Term& t) const {
    if (t.table < 0 || t.table >= (int)tables.size()) throw std::invalid_argument("unknown table in term");
    const Table& tab = tables[t.table];
    if (t.args.size() != tab.domain.size())
        throw std::invalid_argument("arity mismatch in application of " + tab.name);
    for (size_t i = 0; i < t.args.size(); ++i)
        if (t.args[i] < 0 || t.args[i] >= sorts[tab.domain[i]].size)
            throw std::invalid_argument("ill-sorted argument " + std::to_string(t.args[i]) + " in application of " +
                                        tab.name);
}

void Problem::check_well_sorted(const Formula& f) const {
    switch (f->op) {
        case Op::CellEq: {
            check_term(f->t1);
            const Table& tab = tables[f->t1.table];
            if (f->value < 0 || f->value >= sorts[tab.codomain].size)
                throw std::invalid_argument("ill-sorted value in " + tab.name + " = " + std::to_string(f->value));
            break;
        }
        case Op::TermEq: {
            check_term(f->t1);
            check_term(f->t2);
            if (tables[f->t1.table].codomain != tables[f->t2.table].codomain)
                throw std::invalid_argument("codomain mismatch equating " + tables[f->t1.table].name + " and " +
                                            tables[f->t2.table].name);
            break;
        }
        case Op::BVar:
            if (f->bvar < 0 || f->bvar >= (int)bool_names.size())
                throw std::invalid_argument("unknown boolean variable");
            break;
        default:
            for (const auto& k : f->kids) check_well_sorted(k);
    }
}

}  // namespace cir

#include <functional>
#include <random>

#include "cir/export.hpp"
#include "cir/ground.hpp"
#include "cir/ir.hpp"
#include "doctest.h"
#include "sat/dimacs.hpp"

using namespace cir;

namespace {

// Brute-force evaluation of a Problem over all interpretations: cells take
// codomain values, boolean variables take truth values. The independent
// oracle for grounding soundness/completeness.
struct BruteInterp {
    std::vector<std::vector<int>> cells;  // per table, per cell index
    std::vector<bool> bools;
};

bool eval_formula(const Problem& p, const BruteInterp& it, const Formula& f) {
    switch (f->op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::BVar: return it.bools[f->bvar];
        case Op::CellEq: return it.cells[f->t1.table][p.cell_index(f->t1.table, f->t1.args)] == f->value;
        case Op::TermEq:
            return it.cells[f->t1.table][p.cell_index(f->t1.table, f->t1.args)] ==
                   it.cells[f->t2.table][p.cell_index(f->t2.table, f->t2.args)];
        case Op::Not: return !eval_formula(p, it, f->kids[0]);
        case Op::And:
            for (const auto& k : f->kids)
                if (!eval_formula(p, it, k)) return false;
            return true;
        case Op::Or:
            for (const auto& k : f->kids)
                if (eval_formula(p, it, k)) return true;
            return false;
        case Op::Implies: return !eval_formula(p, it, f->kids[0]) || eval_formula(p, it, f->kids[1]);
        case Op::Iff: return eval_formula(p, it, f->kids[0]) == eval_formula(p, it, f->kids[1]);
    }
    return false;
}

bool eval_card(const Problem& p, const BruteInterp& it, const Cardinality& c) {
    int count = 0;
    for (const auto& l : c.lits) {
        bool v = l.is_bool ? it.bools[l.bvar]
                           : it.cells[l.t.table][p.cell_index(l.t.table, l.t.args)] == l.value;
        count += (v == l.positive);
    }
    switch (c.sense) {
        case Sense::AtMost: return count <= c.bound;
        case Sense::AtLeast: return count >= c.bound;
        case Sense::Exactly: return count == c.bound;
    }
    return false;
}

// Enumerates all interpretations, returning the satisfying ones.
std::vector<BruteInterp> brute_models(const Problem& p) {
    std::vector<BruteInterp> result;
    std::vector<int> widths;    // successive positions: each cell, then bools
    BruteInterp it;
    it.cells.resize(p.tables.size());
    for (size_t t = 0; t < p.tables.size(); ++t) {
        int cells = p.cell_count((int)t);
        it.cells[t].assign(cells, 0);
        for (int c = 0; c < cells; ++c) widths.push_back(p.sorts[p.tables[t].codomain].size);
    }
    it.bools.assign(p.bool_names.size(), false);
    for (size_t b = 0; b < p.bool_names.size(); ++b) widths.push_back(2);

    std::vector<int> digits(widths.size(), 0);
    while (true) {
        size_t d = 0;
        for (size_t t = 0; t < p.tables.size(); ++t)
            for (auto& cell : it.cells[t]) cell = digits[d++];
        for (size_t b = 0; b < p.bool_names.size(); ++b) it.bools[b] = digits[d++] != 0;
        bool ok = true;
        for (const auto& a : p.assertions) ok = ok && eval_formula(p, it, a.f);
        for (const auto& c : p.cards) ok = ok && eval_card(p, it, c.card);
        if (ok) result.push_back(it);
        size_t i = 0;
        for (; i < digits.size(); ++i) {
            if (++digits[i] < widths[i]) break;
            digits[i] = 0;
        }
        if (i == digits.size()) break;
    }
    return result;
}

// Enumerates SAT models projected onto all cells+bools via blocking clauses.
std::vector<BruteInterp> ground_models(Problem& p) {
    sat::Solver s;
    Grounder g(p, s);
    // touch all tables so projection covers them
    for (size_t t = 0; t < p.tables.size(); ++t) {
        std::vector<int> args(p.tables[t].domain.size(), 0);
        g.cell_lit((int)t, args, 0);
    }
    for (size_t b = 0; b < p.bool_names.size(); ++b) g.bool_lit((int)b);
    g.ground_pending();
    std::vector<BruteInterp> out;
    while (s.solve() == sat::Status::Sat) {
        REQUIRE(s.verify_model());
        BruteInterp it;
        it.cells.resize(p.tables.size());
        std::vector<sat::Lit> block;
        for (size_t t = 0; t < p.tables.size(); ++t) {
            const auto& tab = p.tables[t];
            int cells = p.cell_count((int)t);
            std::vector<int> args(tab.domain.size(), 0);
            for (int c = 0; c < cells; ++c) {
                int v = g.read_cell((int)t, args);
                it.cells[t].push_back(v);
                block.push_back(~g.cell_lit((int)t, args, v));
                for (int i = (int)args.size() - 1; i >= 0; --i) {
                    if (++args[i] < p.sorts[tab.domain[i]].size) break;
                    args[i] = 0;
                }
            }
        }
        for (size_t b = 0; b < p.bool_names.size(); ++b) {
            bool v = g.read_bool((int)b);
            it.bools.push_back(v);
            block.push_back(v ? ~g.bool_lit((int)b) : g.bool_lit((int)b));
        }
        out.push_back(it);
        if (out.size() > 4096) FAIL("model explosion");
        if (!s.add_clause(block)) break;
    }
    return out;
}

bool same_interp(const BruteInterp& a, const BruteInterp& b) { return a.cells == b.cells && a.bools == b.bools; }

bool same_model_set(std::vector<BruteInterp> a, std::vector<BruteInterp> b) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        bool found = false;
        for (const auto& y : b) found = found || same_interp(x, y);
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("grounding a fixed point: f(a) = a") {
    Problem p;
    int S = p.add_sort("S", 2);
    int f = p.add_table("f", {S}, S);
    p.assert_formula("ax", f_eq(Term{f, {0}}, 0));
    auto models = ground_models(p);
    auto expected = brute_models(p);
    CHECK(models.size() == 2);  // f(1) free
    CHECK(same_model_set(models, expected));
    for (const auto& m : models) CHECK(m.cells[0][0] == 0);
}

TEST_CASE("exactly-one over three literals has three models") {
    Problem p;
    int b0 = p.add_bool("b0"), b1 = p.add_bool("b1"), b2 = p.add_bool("b2");
    Cardinality c;
    c.lits = {CardLit::boolean(b0), CardLit::boolean(b1), CardLit::boolean(b2)};
    c.bound = 1;
    c.sense = Sense::Exactly;
    p.assert_card("card", c);
    auto models = ground_models(p);
    CHECK(models.size() == 3);
    CHECK(same_model_set(models, brute_models(p)));
}

TEST_CASE("at most two of four literals has eleven models") {
    Problem p;
    Cardinality c;
    for (int i = 0; i < 4; ++i) c.lits.push_back(CardLit::boolean(p.add_bool("b" + std::to_string(i))));
    c.bound = 2;
    c.sense = Sense::AtMost;
    p.assert_card("card", c);
    auto models = ground_models(p);
    CHECK(models.size() == 11);
    CHECK(same_model_set(models, brute_models(p)));
}

TEST_CASE("equality between applications case-splits correctly") {
    Problem p;
    int S = p.add_sort("S", 3);
    int f = p.add_table("f", {S}, S);
    int g = p.add_table("g", {}, S);
    p.assert_formula("ax", f_eq2(Term{f, {1}}, Term{g, {}}));
    p.assert_formula("ax", f_ne(Term{g, {}}, 2));
    auto models = ground_models(p);
    CHECK(same_model_set(models, brute_models(p)));
}

TEST_CASE("random small problems agree with brute-force enumeration") {
    std::mt19937 rng(31337);
    for (int iter = 0; iter < 60; ++iter) {
        Problem p;
        int S = p.add_sort("S", 2 + (int)(rng() % 2));
        int f = p.add_table("f", {S}, S);
        int c0 = p.add_table("c0", {}, S);
        int nb = 1 + (int)(rng() % 3);
        for (int b = 0; b < nb; ++b) p.add_bool("b" + std::to_string(b));

        auto rand_term = [&]() -> Term {
            if (rng() % 2) return Term{f, {(int)(rng() % p.sorts[S].size)}};
            return Term{c0, {}};
        };
        auto rand_atom = [&]() -> Formula {
            int pick = (int)(rng() % 3);
            if (pick == 0) return f_bool((int)(rng() % nb));
            if (pick == 1) return f_eq(rand_term(), (int)(rng() % p.sorts[S].size));
            return f_eq2(rand_term(), rand_term());
        };
        std::function<Formula(int)> rand_formula = [&](int depth) -> Formula {
            if (depth == 0 || rng() % 3 == 0) return rand_atom();
            switch (rng() % 4) {
                case 0: return f_not(rand_formula(depth - 1));
                case 1: return f_and({rand_formula(depth - 1), rand_formula(depth - 1)});
                case 2: return f_or({rand_formula(depth - 1), rand_formula(depth - 1)});
                default: return f_implies(rand_formula(depth - 1), rand_formula(depth - 1));
            }
        };
        int n_asserts = 1 + (int)(rng() % 3);
        for (int a = 0; a < n_asserts; ++a) p.assert_formula("ax", rand_formula(2));
        if (rng() % 2) {
            Cardinality c;
            for (int b = 0; b < nb; ++b) c.lits.push_back(CardLit::boolean(b, rng() % 2 == 0));
            c.lits.push_back(CardLit::cell(Term{c0, {}}, 0));
            c.bound = (int)(rng() % (c.lits.size() + 1));
            c.sense = (Sense)(rng() % 3);
            p.assert_card("card", c);
        }
        auto ground = ground_models(p);
        auto brute = brute_models(p);
        CAPTURE(iter);
        CHECK(same_model_set(ground, brute));
    }
}

TEST_CASE("ill-sorted terms are rejected with the offending atom named") {
    Problem p;
    int S = p.add_sort("S", 2);
    int T = p.add_sort("T", 3);
    int f = p.add_table("f", {S}, S);
    int g = p.add_table("g", {}, T);
    CHECK_THROWS_WITH_AS(p.assert_formula("ax", f_eq(Term{f, {5}}, 0)), doctest::Contains("f"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(p.assert_formula("ax", f_eq2(Term{f, {0}}, Term{g, {}})), doctest::Contains("codomain"),
                         std::invalid_argument);
}

TEST_CASE("manifest records clause ranges per group") {
    Problem p;
    int S = p.add_sort("S", 2);
    int f = p.add_table("f", {S}, S);
    p.assert_formula("groupA", f_eq(Term{f, {0}}, 0));
    p.assert_formula("groupB", f_eq(Term{f, {1}}, 1));
    sat::Solver s;
    Grounder g(p, s);
    g.ground_pending();
    bool a = false, b = false;
    for (const auto& [group, range] : g.manifest()) {
        if (group == "groupA") a = range.end > range.begin;
        if (group == "groupB") b = range.end > range.begin;
    }
    CHECK(a);
    CHECK(b);
}

TEST_CASE("smtlib export renders sorts, tables and assertions") {
    Problem p;
    int S = p.add_sort("S", 2);
    int f = p.add_table("f", {S}, S);
    p.assert_formula("ax", f_and({f_eq(Term{f, {0}}, 0), f_eq(Term{f, {0}}, 1)}));
    auto text = export_smtlib(p);
    CHECK(text.find("declare-datatypes") != std::string::npos);
    CHECK(text.find("(declare-fun f (S) S)") != std::string::npos);
    CHECK(text.find("(check-sat)") != std::string::npos);

    Problem empty;
    auto etext = export_smtlib(empty);
    CHECK(etext.find("(check-sat)") != std::string::npos);
}

TEST_CASE("dimacs export matches grounded satisfiability") {
    Problem p;
    int S = p.add_sort("S", 2);
    int f = p.add_table("f", {S}, S);
    p.assert_formula("ax", f_eq(Term{f, {0}}, 0));
    p.assert_formula("ax", f_ne(Term{f, {0}}, 0));
    auto ex = export_dimacs(p);
    auto d = sat::parse_dimacs(ex.dimacs);
    sat::Solver s;
    sat::load_dimacs(d, s);
    CHECK(s.solve() == sat::Status::Unsat);
    CHECK(ex.varmap_json.find("\"table\"") != std::string::npos);
}

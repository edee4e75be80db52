#pragma once

// Finite-domain constraint IR: finite sorts, function tables over them,
// quantifier-free formulas whose atoms are equalities between function
// applications and sort constants (or boolean variables), and cardinality
// constraints. Grounds to CNF with a one-hot encoding per function cell.

#include <memory>
#include <string>
#include <vector>

namespace cir {

struct Sort {
    std::string name;
    int size;
};

struct Table {
    std::string name;
    std::vector<int> domain;  // sort ids
    int codomain;             // sort id
};

struct Term {
    int table = -1;
    std::vector<int> args;  // constants, one per domain sort
    friend bool operator==(const Term&, const Term&) = default;
};

enum class Op : uint8_t { True, False, BVar, CellEq, TermEq, Not, And, Or, Implies, Iff };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    int bvar = -1;  // BVar
    Term t1, t2;    // CellEq uses t1/value; TermEq uses t1/t2
    int value = -1;
    std::vector<Formula> kids;
};

Formula f_true();
Formula f_false();
Formula f_bool(int bvar);
Formula f_eq(Term t, int value);
Formula f_ne(Term t, int value);
Formula f_eq2(Term a, Term b);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> kids);
Formula f_or(std::vector<Formula> kids);
Formula f_implies(Formula a, Formula b);
Formula f_iff(Formula a, Formula b);

struct CardLit {
    bool is_bool = false;
    int bvar = -1;
    Term t;
    int value = 0;
    bool positive = true;

    static CardLit cell(Term t, int value, bool positive = true) { return {false, -1, std::move(t), value, positive}; }
    static CardLit boolean(int bvar, bool positive = true) { return {true, bvar, {}, 0, positive}; }
};

enum class Sense : uint8_t { AtMost, AtLeast, Exactly };

struct Cardinality {
    std::vector<CardLit> lits;
    int bound = 0;
    Sense sense = Sense::AtMost;
};

// Indexed collection of sorts, tables, boolean variables and tagged
// assertions. Assertions accumulate; grounding picks up the pending ones.
struct Problem {
    std::vector<Sort> sorts;
    std::vector<Table> tables;
    std::vector<std::string> bool_names;

    struct Assertion {
        std::string group;
        Formula f;
    };
    struct CardAssertion {
        std::string group;
        Cardinality card;
    };
    std::vector<Assertion> assertions;
    std::vector<CardAssertion> cards;

    int add_sort(std::string name, int size);
    int add_table(std::string name, std::vector<int> domain, int codomain);
    int add_bool(std::string name);

    void assert_formula(const std::string& group, Formula f);
    void assert_card(const std::string& group, Cardinality c);

    int cell_count(int table) const;
    int cell_index(int table, const std::vector<int>& args) const;  // row-major

    // Throws std::invalid_argument naming the offending atom if a term's
    // arguments fall outside its domain sorts or equated sorts mismatch.
    void check_well_sorted(const Formula& f) const;
    void check_term(const Term& t) const;
};

}  // namespace cir

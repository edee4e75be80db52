#include <random>

#include "doctest.h"
#include "sat/cardinality.hpp"
#include "sat/dimacs.hpp"
#include "sat/solver.hpp"

using namespace sat;

namespace {

// Brute-force satisfiability over <= 20 variables.
bool brute_sat(int nvars, const std::vector<std::vector<Lit>>& clauses) {
    for (uint32_t m = 0; m < (1u << nvars); ++m) {
        bool ok = true;
        for (const auto& c : clauses) {
            bool sat_c = false;
            for (Lit l : c) sat_c = sat_c || (((m >> l.var()) & 1) != (unsigned)l.sign());
            if (!sat_c) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

int brute_count(int nvars, const std::vector<std::vector<Lit>>& clauses) {
    int count = 0;
    for (uint32_t m = 0; m < (1u << nvars); ++m) {
        bool ok = true;
        for (const auto& c : clauses) {
            bool sat_c = false;
            for (Lit l : c) sat_c = sat_c || (((m >> l.var()) & 1) != (unsigned)l.sign());
            if (!sat_c) {
                ok = false;
                break;
            }
        }
        count += ok;
    }
    return count;
}

int count_models_projected(Solver& s, const std::vector<Var>& projection, int limit = 1 << 20) {
    int n = 0;
    while (n < limit && s.solve() == Status::Sat) {
        REQUIRE(s.verify_model());
        ++n;
        std::vector<Lit> block;
        for (Var v : projection) block.push_back(Lit(v, s.model_value(v)));
        if (!s.add_clause(block)) break;
    }
    return n;
}

}  // namespace

TEST_CASE("trivial sat and unsat") {
    Solver s;
    Var x = s.new_var(), y = s.new_var();
    s.add_clause({Lit::pos(x), Lit::pos(y)});
    s.add_clause({Lit::neg(x)});
    REQUIRE(s.solve() == Status::Sat);
    CHECK(s.model_value(y));
    CHECK(s.verify_model());

    Solver u;
    Var z = u.new_var();
    u.add_clause({Lit::pos(z)});
    u.add_clause({Lit::neg(z)});
    CHECK(u.solve() == Status::Unsat);
}

TEST_CASE("random 3-cnf agrees with brute force") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 500; ++iter) {
        int nvars = 5 + (int)(rng() % 8);  // 5..12
        int nclauses = 3 + (int)(rng() % (nvars * 5));
        std::vector<std::vector<Lit>> clauses;
        for (int c = 0; c < nclauses; ++c) {
            std::vector<Lit> cl;
            for (int k = 0; k < 3; ++k) cl.push_back(Lit((Var)(rng() % nvars), rng() % 2 == 0));
            clauses.push_back(cl);
        }
        Solver s;
        s.ensure_var(nvars - 1);
        for (auto& c : clauses) s.add_clause(c);
        Status st = s.solve();
        bool expected = brute_sat(nvars, clauses);
        CAPTURE(iter);
        REQUIRE(st == (expected ? Status::Sat : Status::Unsat));
        if (st == Status::Sat) CHECK(s.verify_model());
    }
}

TEST_CASE("incremental solving keeps learned state usable") {
    std::mt19937 rng(99);
    Solver s;
    std::vector<std::vector<Lit>> clauses;
    int nvars = 10;
    s.ensure_var(nvars - 1);
    for (int round = 0; round < 30; ++round) {
        for (int add = 0; add < 3; ++add) {
            std::vector<Lit> cl;
            for (int k = 0; k < 3; ++k) cl.push_back(Lit((Var)(rng() % nvars), rng() % 2 == 0));
            clauses.push_back(cl);
            s.add_clause(cl);
        }
        bool expected = brute_sat(nvars, clauses);
        Status st = s.solve();
        REQUIRE(st == (expected ? Status::Sat : Status::Unsat));
        if (st == Status::Sat)
            CHECK(s.verify_model());
        else
            break;
    }
}

TEST_CASE("assumption cores are correct") {
    std::mt19937 rng(4242);
    for (int iter = 0; iter < 100; ++iter) {
        int nvars = 6 + (int)(rng() % 5);
        std::vector<std::vector<Lit>> clauses;
        int nclauses = 5 + (int)(rng() % 25);
        for (int c = 0; c < nclauses; ++c) {
            std::vector<Lit> cl;
            int len = 1 + (int)(rng() % 3);
            for (int k = 0; k < len; ++k) cl.push_back(Lit((Var)(rng() % nvars), rng() % 2 == 0));
            clauses.push_back(cl);
        }
        Solver s;
        s.ensure_var(nvars - 1);
        bool ok = true;
        for (auto& c : clauses) ok = s.add_clause(c) && ok;
        std::vector<Lit> assumptions;
        for (Var v = 0; v < nvars / 2; ++v) assumptions.push_back(Lit(v, rng() % 2 == 0));
        if (!ok) continue;
        Status st = s.solve(assumptions);

        auto with_units = clauses;
        for (Lit a : assumptions) with_units.push_back({a});
        bool expected = brute_sat(nvars, with_units);
        REQUIRE(st == (expected ? Status::Sat : Status::Unsat));
        if (st == Status::Unsat) {
            // the core must itself be inconsistent with the clauses
            auto core = s.core();
            for (Lit c : core)
                CHECK(std::find(assumptions.begin(), assumptions.end(), c) != assumptions.end());
            auto core_units = clauses;
            for (Lit c : core) core_units.push_back({c});
            CHECK_FALSE(brute_sat(nvars, core_units));
        }
    }
}

TEST_CASE("counter outputs match true counts") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 1 + (int)(rng() % 6);
        Solver s;
        std::vector<Lit> lits;
        for (int i = 0; i < n; ++i) lits.push_back(Lit::pos(s.new_var()));
        auto outs = encode_counter(s, lits);
        // pin a random assignment of the inputs
        int true_count = 0;
        for (Lit l : lits) {
            bool val = rng() % 2 == 0;
            true_count += val;
            s.add_clause({val ? l : ~l});
        }
        REQUIRE(s.solve() == Status::Sat);
        for (int j = 0; j < n; ++j) CHECK(s.model_value(outs[j]) == (true_count >= j + 1));
    }
}

TEST_CASE("cardinality constraints match brute-force model counts") {
    std::mt19937 rng(2024);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 2 + (int)(rng() % 5);
        int bound = (int)(rng() % (n + 1));
        int sense = (int)(rng() % 3);
        Solver s;
        std::vector<Lit> lits;
        std::vector<Var> vars;
        for (int i = 0; i < n; ++i) {
            Var v = s.new_var();
            vars.push_back(v);
            lits.push_back(Lit(v, rng() % 2 == 0));  // mixed polarities
        }
        if (sense == 0)
            add_at_most(s, lits, bound);
        else if (sense == 1)
            add_at_least(s, lits, bound);
        else
            add_exactly(s, lits, bound);

        int expected = 0;
        for (uint32_t m = 0; m < (1u << n); ++m) {
            int cnt = 0;
            for (int i = 0; i < n; ++i) cnt += ((m >> i) & 1) != (unsigned)lits[i].sign();
            if (sense == 0) expected += cnt <= bound;
            if (sense == 1) expected += cnt >= bound;
            if (sense == 2) expected += cnt == bound;
        }
        CHECK(count_models_projected(s, vars) == expected);
    }
}

TEST_CASE("model enumeration with projection") {
    // (x | y) projected on {x, y} -> 3 models
    Solver s;
    Var x = s.new_var(), y = s.new_var();
    s.add_clause({Lit::pos(x), Lit::pos(y)});
    CHECK(count_models_projected(s, {x, y}) == 3);

    // exactly-one over three -> 3 models
    Solver s2;
    std::vector<Lit> lits;
    std::vector<Var> vars;
    for (int i = 0; i < 3; ++i) {
        Var v = s2.new_var();
        vars.push_back(v);
        lits.push_back(Lit::pos(v));
    }
    add_exactly(s2, lits, 1);
    CHECK(count_models_projected(s2, vars) == 3);

    // at most 2 of 4 -> 11 models
    Solver s3;
    lits.clear();
    vars.clear();
    for (int i = 0; i < 4; ++i) {
        Var v = s3.new_var();
        vars.push_back(v);
        lits.push_back(Lit::pos(v));
    }
    add_at_most(s3, lits, 2);
    CHECK(count_models_projected(s3, vars) == 11);

    // unsat -> no models
    Solver s4;
    Var z = s4.new_var();
    s4.add_clause({Lit::pos(z)});
    s4.add_clause({Lit::neg(z)});
    CHECK(count_models_projected(s4, {z}) == 0);
}

TEST_CASE("conflict budget yields unknown") {
    // pigeonhole: 7 pigeons, 6 holes
    const int P = 7, H = 6;
    Solver s;
    std::vector<std::vector<Var>> v(P, std::vector<Var>(H));
    for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) v[p][h] = s.new_var();
    for (int p = 0; p < P; ++p) {
        std::vector<Lit> c;
        for (int h = 0; h < H; ++h) c.push_back(Lit::pos(v[p][h]));
        s.add_clause(c);
    }
    for (int h = 0; h < H; ++h)
        for (int p = 0; p < P; ++p)
            for (int q = p + 1; q < P; ++q) s.add_clause({Lit::neg(v[p][h]), Lit::neg(v[q][h])});
    s.set_conflict_budget(20);
    CHECK(s.solve() == Status::Unknown);
    s.set_conflict_budget(-1);
    CHECK(s.solve() == Status::Unsat);
}

TEST_CASE("dimacs round trip") {
    std::string text = "c comment\np cnf 3 2\n1 -2 0\n2 3 0\n";
    auto d = parse_dimacs(text);
    CHECK(d.num_vars == 3);
    REQUIRE(d.clauses.size() == 2);
    CHECK(d.clauses[0][1] == Lit::neg(1));
    auto printed = write_dimacs(d.num_vars, d.clauses);
    auto d2 = parse_dimacs(printed);
    CHECK(d2.clauses == d.clauses);
    Solver s;
    load_dimacs(d2, s);
    CHECK(s.solve() == Status::Sat);
}

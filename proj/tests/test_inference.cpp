#include <random>

#include "doctest.h"
#include "inf/inference.hpp"
#include "sat/cardinality.hpp"
#include "sat/optimize.hpp"
#include "test_util.hpp"

using namespace mg;

namespace {
enc::Config quick_config() {
    enc::Config cfg;
    cfg.max_items = 8;
    return cfg;
}
}  // namespace

TEST_CASE("optimizer matches brute force on toy objectives") {
    // minimize true-count over {a,b,c} subject to a|b -> optimum 1
    {
        sat::Solver s;
        sat::Var a = s.new_var(), b = s.new_var(), c = s.new_var();
        s.add_clause({sat::Lit::pos(a), sat::Lit::pos(b)});
        sat::Objective obj;
        obj.lits = {sat::Lit::pos(a), sat::Lit::pos(b), sat::Lit::pos(c)};
        auto r = sat::optimize_lexicographic(s, {obj});
        REQUIRE(r.status == sat::Status::Sat);
        CHECK(r.optimal);
        CHECK(r.values == std::vector<int>{1});
    }
    // maximize the number of distinct values used by 3 one-hot groups of 2
    {
        sat::Solver s;
        std::vector<std::vector<sat::Lit>> groups;
        for (int g = 0; g < 3; ++g) {
            sat::Var v0 = s.new_var(), v1 = s.new_var();
            s.add_clause({sat::Lit::pos(v0), sat::Lit::pos(v1)});
            s.add_clause({sat::Lit::neg(v0), sat::Lit::neg(v1)});
            groups.push_back({sat::Lit::pos(v0), sat::Lit::pos(v1)});
        }
        // distinct(value k used) aux
        std::vector<sat::Lit> used;
        for (int k = 0; k < 2; ++k) {
            sat::Var u = s.new_var();
            std::vector<sat::Lit> any{sat::Lit::neg(u)};
            for (int g = 0; g < 3; ++g) {
                s.add_clause({~groups[g][k], sat::Lit::pos(u)});
                any.push_back(groups[g][k]);
            }
            s.add_clause(any);
            used.push_back(sat::Lit::pos(u));
        }
        sat::Objective obj;
        obj.lits = used;
        obj.maximize = true;
        auto r = sat::optimize_lexicographic(s, {obj});
        REQUIRE(r.status == sat::Status::Sat);
        CHECK(r.values == std::vector<int>{2});
    }
}

TEST_CASE("nested lexicographic optimization matches a brute-force scan") {
    std::mt19937 rng(5150);
    for (int iter = 0; iter < 25; ++iter) {
        int nvars = 8 + (int)(rng() % 3);
        std::vector<std::vector<sat::Lit>> clauses;
        int nclauses = 4 + (int)(rng() % 16);
        for (int c = 0; c < nclauses; ++c) {
            std::vector<sat::Lit> cl;
            for (int k = 0; k < 3; ++k) cl.push_back(sat::Lit((sat::Var)(rng() % nvars), rng() % 2 == 0));
            clauses.push_back(cl);
        }
        sat::Solver s;
        s.ensure_var(nvars - 1);
        bool ok = true;
        for (auto& c : clauses) ok = s.add_clause(c) && ok;

        sat::Objective o1, o2;
        for (int v = 0; v < nvars / 2; ++v) o1.lits.push_back(sat::Lit::pos(v));
        for (int v = nvars / 2; v < nvars; ++v) o2.lits.push_back(sat::Lit::pos(v));
        o2.maximize = true;

        // brute-force lexicographic scan
        int best1 = -1, best2 = -1;
        for (uint32_t mdl = 0; mdl < (1u << nvars); ++mdl) {
            bool sat_all = true;
            for (const auto& c : clauses) {
                bool satc = false;
                for (auto l : c) satc = satc || (((mdl >> l.var()) & 1) != (unsigned)l.sign());
                if (!satc) {
                    sat_all = false;
                    break;
                }
            }
            if (!sat_all) continue;
            int v1 = 0, v2 = 0;
            for (auto l : o1.lits) v1 += (mdl >> l.var()) & 1;
            for (auto l : o2.lits) v2 += (mdl >> l.var()) & 1;
            if (best1 < 0 || v1 < best1 || (v1 == best1 && v2 > best2)) {
                best1 = v1;
                best2 = v2;
            }
        }
        auto r = sat::optimize_lexicographic(s, {o1, o2});
        CAPTURE(iter);
        if (best1 < 0) {
            CHECK(r.status == sat::Status::Unsat);
        } else {
            REQUIRE(r.status == sat::Status::Sat);
            CHECK(r.values == std::vector<int>{best1, best2});
        }
    }
}

TEST_CASE("single-sentence inference produces small validated lexicons") {
    auto corpus = load_corpus();
    std::vector<AnnotatedSentence> sub{corpus[8]};  // pizza was eaten
    inf::CostSpec cost;
    cost.order = {"items"};
    auto r = inf::run(sub, quick_config(), cost, 3);
    REQUIRE(r.ok);
    CHECK(r.optimal);
    CHECK(r.objectives.at("items") <= 4);
    for (const auto& s : r.samples) {
        CHECK(s.validated);
        CHECK(s.items == r.objectives.at("items"));
    }
    // optimality certificate: items <= v is satisfiable, items <= v-1 is not
    enc::EncoderState state(quick_config(), {"pizza", "was", "eaten"});
    state.encode_sentence(sub[0]);
    auto spec = state.objective_entries();
    std::vector<sat::Lit> lits;
    for (const auto& cl : spec.lits) lits.push_back(state.grounder().cell_lit(cl.t, cl.value));
    auto outs = sat::encode_counter(state.solver(), lits);
    int v = r.objectives.at("items");
    std::vector<sat::Lit> le_v{~outs[v]};
    CHECK(state.solve(le_v) == sat::Status::Sat);  // <= v
    std::vector<sat::Lit> le_vm1{~outs[v - 1]};
    CHECK(state.solve(le_vm1) == sat::Status::Unsat);  // <= v-1
}

TEST_CASE("samples are pairwise distinct lexicons") {
    auto corpus = load_corpus();
    std::vector<AnnotatedSentence> sub{corpus[8]};
    inf::CostSpec cost;
    auto r = inf::run(sub, quick_config(), cost, 4);
    REQUIRE(r.ok);
    for (size_t i = 0; i < r.samples.size(); ++i)
        for (size_t j = i + 1; j < r.samples.size(); ++j)
            CHECK(print_lexicon_text(r.samples[i].lexicon) != print_lexicon_text(r.samples[j].lexicon));
}

TEST_CASE("inconsistent corpora name the failing sentence") {
    auto corpus = load_corpus();
    enc::Config cfg = quick_config();
    cfg.bounds.covert_budget = 0;  // nothing can complete
    inf::CostSpec cost;
    auto r = inf::run({corpus[0]}, cfg, cost, 1);
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("John has eaten pizza") != std::string::npos);
}

TEST_CASE("ablating the typing axioms can only loosen the optimum") {
    auto corpus = load_corpus();
    std::vector<AnnotatedSentence> sub{corpus[8]};
    inf::CostSpec cost;
    cost.order = {"items"};
    auto report = inf::ablate(sub, quick_config(), cost, "typing");
    REQUIRE(report.baseline_sat);
    REQUIRE(report.ablated_sat);
    CHECK(report.ablated_objectives.at("items") <= report.baseline_objectives.at("items"));
    CHECK_THROWS_AS(inf::ablate(sub, quick_config(), cost, "no-such-group"), std::invalid_argument);
}

TEST_CASE("relation ablation admits annotation-violating parses") {
    auto corpus = load_corpus();
    std::vector<AnnotatedSentence> sub{corpus[8]};
    // with relations off, fewer constraints: optimum can only drop
    inf::CostSpec cost;
    cost.order = {"items"};
    auto report = inf::ablate(sub, quick_config(), cost, "relations");
    REQUIRE(report.baseline_sat);
    REQUIRE(report.ablated_sat);
    CHECK(report.ablated_objectives.at("items") <= report.baseline_objectives.at("items"));
}

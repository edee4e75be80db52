#include <algorithm>
#include <set>

#include "enc/encoder.hpp"

namespace enc {

using cir::CardLit;
using cir::Term;

EncoderState::EncoderState(const Config& cfg, std::vector<std::string> vocab) : cfg_(cfg) {
    cfg_.check();
    solver_.set_seed(cfg_.seed);
    if (cfg_.conflict_budget >= 0) solver_.set_conflict_budget(cfg_.conflict_budget);
    grounder_ = std::make_unique<cir::Grounder>(problem_, solver_);
    lex_ = std::make_unique<LexiconModel>(problem_, cfg_, std::move(vocab));
    grounder_->ground_pending();
}

void EncoderState::encode_sentence(const mg::AnnotatedSentence& s) {
    int index = (int)instances_.size();
    instances_.push_back(
        std::make_unique<ParseInstance>(problem_, *lex_, cfg_, s, index, cfg_.disabled_groups));
    sentences_.push_back(s);
    grounder_->ground_pending();
}

sat::Status EncoderState::solve(const std::vector<sat::Lit>& assumptions) { return solver_.solve(assumptions); }

std::vector<sat::Lit> EncoderState::lexicon_assumptions(const mg::Lexicon& lex) {
    return lex_->pin(lex, *grounder_);
}

sat::Status EncoderState::assert_lexicon(const mg::Lexicon& lex) { return solve(lexicon_assumptions(lex)); }

void EncoderState::pin_lexicon_permanently(const mg::Lexicon& lex) {
    for (auto& f : lex_->pin_formulas(lex)) problem_.assert_formula("pin", std::move(f));
    grounder_->ground_pending();
}

mg::Lexicon EncoderState::decode_lexicon() { return lex_->decode(*grounder_); }

mg::DerivationTree EncoderState::decode_parse(int sentence_index) {
    return instances_.at(sentence_index)->decode(*grounder_);
}

void EncoderState::block_current_lexicon() {
    std::vector<sat::Lit> clause;
    for (int s = 0; s < lex_->slots(); ++s) {
        clause.push_back(~grounder_->cell_lit(lex_->t_defined, {s}, grounder_->read_cell(lex_->t_defined, {s})));
        clause.push_back(~grounder_->cell_lit(lex_->t_phon, {s}, grounder_->read_cell(lex_->t_phon, {s})));
        clause.push_back(~grounder_->cell_lit(lex_->t_hasc, {s}, grounder_->read_cell(lex_->t_hasc, {s})));
        for (int q = 0; q < lex_->feat_positions(); ++q) {
            clause.push_back(
                ~grounder_->cell_lit(lex_->t_kind, {s, q}, grounder_->read_cell(lex_->t_kind, {s, q})));
            clause.push_back(~grounder_->cell_lit(lex_->t_cat, {s, q}, grounder_->read_cell(lex_->t_cat, {s, q})));
        }
    }
    solver_.add_clause(clause);
}

ObjectiveSpec EncoderState::objective_entries() const {
    ObjectiveSpec o;
    o.name = "items";
    for (int s = 0; s < lex_->slots(); ++s) o.lits.push_back(CardLit::cell(Term{lex_->t_defined, {s}}, 1));
    return o;
}

ObjectiveSpec EncoderState::objective_features() const {
    ObjectiveSpec o;
    o.name = "features";
    // lexicon side: non-empty grid cells (the Complete feature not counted)
    for (int s = 0; s < lex_->slots(); ++s)
        for (int q = 0; q < lex_->feat_positions(); ++q)
            o.lits.push_back(CardLit::cell(Term{lex_->t_kind, {s, q}}, GNone, false));
    // parse side: features of the items at each leaf, plus the one Complete
    // feature each parse retains at its root
    for (const auto& inst : instances_) {
        auto lits = inst->feature_lits();
        o.lits.insert(o.lits.end(), lits.begin(), lits.end());
    }
    o.offset = (int)instances_.size();
    return o;
}

ObjectiveSpec EncoderState::objective_distinct_selectors() {
    ObjectiveSpec o;
    o.name = "distinct_selectors";
    o.maximize = true;
    if (b_cat_used_.empty()) {
        for (int c = 0; c < cfg_.categories; ++c) {
            int b = problem_.add_bool("sel_cat_used_" + std::to_string(c));
            b_cat_used_.push_back(b);
            std::vector<cir::Formula> ways;
            for (int s = 0; s < lex_->slots(); ++s)
                for (int q = 0; q < lex_->feat_positions(); ++q)
                    ways.push_back(cir::f_and(
                        {cir::f_or({cir::f_eq(Term{lex_->t_kind, {s, q}}, GSel),
                                    cir::f_eq(Term{lex_->t_kind, {s, q}}, GSelL),
                                    cir::f_eq(Term{lex_->t_kind, {s, q}}, GSelR)}),
                         cir::f_eq(Term{lex_->t_cat, {s, q}}, c)}));
            problem_.assert_formula("objective", cir::f_iff(cir::f_bool(b), cir::f_or(ways)));
        }
        grounder_->ground_pending();
    }
    for (int b : b_cat_used_) o.lits.push_back(CardLit::boolean(b));
    return o;
}

std::vector<std::string> EncoderState::groups() const {
    std::set<std::string> seen;
    for (const auto& [g, range] : grounder_->manifest()) seen.insert(g);
    return {seen.begin(), seen.end()};
}

std::vector<std::string> axiom_group_names() {
    return {"tree", "head", "lexchoice", "consume", "move", "headmove", "smc",
            "complete", "typing", "linear", "relations", "lexicon", "catsym"};
}

}  // namespace enc

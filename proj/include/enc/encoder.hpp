#pragma once

// Compiles bounded MG parse trees and a shared lexicon into the constraint
// IR: one parse instance per consumed sentence, all wired to one lexicon
// model, plus translations of the sentence annotations into axioms. Also
// decodes solver models back into Lexicon and DerivationTree values.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cir/export.hpp"
#include "cir/ground.hpp"
#include "cir/ir.hpp"
#include "mg/corpus.hpp"
#include "mg/derivation.hpp"
#include "mg/parser.hpp"
#include "sat/solver.hpp"

namespace enc {

struct Config {
    mg::Bounds bounds;
    int max_items = 24;
    int categories = 5;      // selectional inventory x0..xK-1
    int lic_categories = 2;  // licensing inventory l, r
    bool break_category_symmetry = false;
    bool universal_categories = false;  // unsupported toggle, errors when set
    std::vector<std::string> disabled_groups;
    int64_t conflict_budget = -1;
    uint64_t seed = 1;

    void check() const;  // throws on invalid bounds
};

// Grid feature kinds, the codomain of the per-slot feature tables. None is
// last so that grid vectors compare like feature sequences (shorter items
// precede longer extensions; Complete is carried by a separate flag).
enum GridKind : int { GSel = 0, GSelL = 1, GSelR = 2, GStee = 3, GLsor = 4, GLsee = 5, GNone = 6 };

int grid_kind_of(const mg::Feature& f);
mg::Feature feature_of(int grid_kind, int cat);

// The shared lexicon formula: max_items slots, each a phonetic choice, a
// feature grid of bounded length, and a Complete flag. Slots are ordered
// canonically; defined slots form a prefix.
class LexiconModel {
  public:
    LexiconModel(cir::Problem& p, const Config& cfg, std::vector<std::string> vocab);

    int phon_index(const mg::PhoneticForm& f) const;  // -1 if out of vocabulary
    mg::PhoneticForm phon_of(int index) const;

    // Assumption literals pinning the model to exactly `lex`.
    std::vector<sat::Lit> pin(const mg::Lexicon& lex, cir::Grounder& g) const;
    // The same pin as formulas, for permanent assertion.
    std::vector<cir::Formula> pin_formulas(const mg::Lexicon& lex) const;

    mg::Lexicon decode(cir::Grounder& g) const;

    int slots() const { return slots_; }
    int feat_positions() const { return feats_; }

    // tables
    int t_defined, t_phon, t_kind, t_cat, t_hasc;
    int s_slot, s_phon, s_kind, s_cat, s_bool, s_fpos;

    const std::vector<std::string>& vocab() const { return vocab_; }

  private:
    void build_axioms(cir::Problem& p, const Config& cfg);
    std::vector<std::string> vocab_;
    int slots_, feats_, cats_, lic_cats_;
};

// One sentence's parse-tree instance: tree shape, headedness, feature
// consumption, movement, head movement, linearization intervals, typing and
// relation axioms, all over the shared lexicon.
class ParseInstance {
  public:
    ParseInstance(cir::Problem& p, LexiconModel& lex, const Config& cfg, const mg::AnnotatedSentence& s,
                  int index, const std::vector<std::string>& disabled_groups);

    mg::DerivationTree decode(cir::Grounder& g) const;

    int tokens() const { return m_; }
    int leaves() const { return leaf_count_; }
    int nodes() const { return node_count_; }

    // Per-leaf-position literals "this leaf's item has a feature here", used
    // by the parse-features objective.
    std::vector<cir::CardLit> feature_lits() const;

  private:
    friend class EncoderState;
    void build(cir::Problem& p, const Config& cfg);
    bool on(const std::string& group) const;

    LexiconModel& lex_;
    mg::AnnotatedSentence sent_;
    std::vector<std::string> disabled_;
    int index_;
    int m_, leaf_count_, node_count_, F_, R_;
    int covert_leaf_;  // -1 when the covert budget is zero

    // sorts
    int s_node, s_leaf, s_fn, s_lc, s_move, s_int, s_pos;
    // tables
    int t_par, t_prj, t_head, t_slot, t_fn, t_lc, t_upq, t_sq, t_mp;
    int t_lkind, t_lcat, t_lhasc, t_nkind, t_ncat;
    int t_act, t_mov, t_att, t_mq, t_hq, t_movcat, t_fin, t_cs;
    int t_hmact, t_hmnode, t_rl;
    int t_dom;
    int t_apl, t_aph, t_hl, t_hh, t_cl, t_ch;
    std::vector<int> t_sl, t_sh;  // spec-part stages 0..R
};

struct ObjectiveSpec {
    std::string name;
    std::vector<cir::CardLit> lits;
    bool maximize = false;
    int offset = 0;  // added to the reported value
};

// The acquisition state S_i: the shared lexicon model plus one parse
// instance per consumed sentence, grounded incrementally into one solver.
class EncoderState {
  public:
    EncoderState(const Config& cfg, std::vector<std::string> vocab);

    // Q: instantiate a parse formula for the sentence and translate its
    // annotations; grounds the new axioms incrementally.
    void encode_sentence(const mg::AnnotatedSentence& s);

    sat::Status solve(const std::vector<sat::Lit>& assumptions = {});
    sat::Status assert_lexicon(const mg::Lexicon& lex);  // SAT iff lex solves the state
    std::vector<sat::Lit> lexicon_assumptions(const mg::Lexicon& lex);
    // Asserts the pin into the problem itself (visible to exports).
    void pin_lexicon_permanently(const mg::Lexicon& lex);

    mg::Lexicon decode_lexicon();
    mg::DerivationTree decode_parse(int sentence_index);

    // Blocking clause excluding the current model's lexicon.
    void block_current_lexicon();

    // Objective literal sets over the current state (entries, features,
    // distinct selector categories).
    ObjectiveSpec objective_entries() const;
    ObjectiveSpec objective_features() const;
    ObjectiveSpec objective_distinct_selectors();

    const Config& config() const { return cfg_; }
    int sentences() const { return (int)instances_.size(); }
    const mg::AnnotatedSentence& sentence(int i) const { return sentences_[i]; }
    cir::Problem& problem() { return problem_; }
    cir::Grounder& grounder() { return *grounder_; }
    sat::Solver& solver() { return solver_; }
    const LexiconModel& lexicon_model() const { return *lex_; }

    // Axiom-group names present in the manifest.
    std::vector<std::string> groups() const;

  private:
    Config cfg_;
    cir::Problem problem_;
    sat::Solver solver_;
    std::unique_ptr<cir::Grounder> grounder_;
    std::unique_ptr<LexiconModel> lex_;
    std::vector<std::unique_ptr<ParseInstance>> instances_;
    std::vector<mg::AnnotatedSentence> sentences_;
    std::vector<int> b_cat_used_;  // distinct-selector aux bools, lazily built
};

// All known axiom group base names, for ablation validation.
std::vector<std::string> axiom_group_names();

}  // namespace enc

#pragma once

// Core value types of the minimalist-grammar formalism: features, phonetic
// forms, lexical items and lexicons, plus the feature-checking rules for
// external and internal merge and the lexicon text format.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mg {

enum class FeatureKind : uint8_t { Selector, Selectee, Licensor, Licensee, Complete };

enum class HeadMove : uint8_t { None, Left, Right };

// Rendering of category indices. Selectional categories (selector/selectee)
// print as x0..xK-1; licensing categories (licensor/licensee) print as
// l, r, m2, m3, ... The two inventories are disjoint.
std::string sel_cat_name(int cat);
std::string lic_cat_name(int cat);

struct Feature {
    FeatureKind kind = FeatureKind::Complete;
    int cat = 0;                          // unused when kind == Complete
    HeadMove head_move = HeadMove::None;  // legal only when kind == Selector

    bool selectional() const { return kind == FeatureKind::Selector || kind == FeatureKind::Selectee; }
    bool licensing() const { return kind == FeatureKind::Licensor || kind == FeatureKind::Licensee; }

    static Feature selector(int cat, HeadMove hm = HeadMove::None) { return {FeatureKind::Selector, cat, hm}; }
    static Feature selectee(int cat) { return {FeatureKind::Selectee, cat, HeadMove::None}; }
    static Feature licensor(int cat) { return {FeatureKind::Licensor, cat, HeadMove::None}; }
    static Feature licensee(int cat) { return {FeatureKind::Licensee, cat, HeadMove::None}; }
    static Feature complete() { return {FeatureKind::Complete, 0, HeadMove::None}; }

    std::string str() const;

    // Canonical rank: =, <=, =>, ~, +, -, then (one past sequence end), C.
    int sort_rank() const;

    friend bool operator==(const Feature&, const Feature&) = default;
    friend bool operator<(const Feature& a, const Feature& b) {
        if (a.sort_rank() != b.sort_rank()) return a.sort_rank() < b.sort_rank();
        return a.cat < b.cat;
    }
};

// External merge consumes a selector and a selectee of the same category;
// the selector side projects.
bool check_external_merge(const Feature& a, const Feature& b);

// Internal merge consumes a licensor and a licensee of the same category;
// the licensor side projects.
bool check_internal_merge(const Feature& a, const Feature& b);

struct PhoneticForm {
    enum class Kind : uint8_t { Overt, CovertDecl, CovertIntr };
    Kind kind = Kind::Overt;
    std::string token;  // nonempty, lowercase, only for Overt

    bool overt() const { return kind == Kind::Overt; }

    static PhoneticForm overt_form(std::string tok);
    static PhoneticForm covert_decl() { return {Kind::CovertDecl, {}}; }
    static PhoneticForm covert_intr() { return {Kind::CovertIntr, {}}; }

    std::string str() const;  // overt token, or eps_decl / eps_intr

    friend bool operator==(const PhoneticForm&, const PhoneticForm&) = default;
    friend bool operator<(const PhoneticForm& a, const PhoneticForm& b) {
        if (a.kind != b.kind) return a.kind < b.kind;  // overt, then eps_decl, then eps_intr
        return a.token < b.token;
    }
};

struct LexicalItem {
    PhoneticForm phon;
    std::vector<Feature> feats;

    bool has_complete() const { return !feats.empty() && feats.back().kind == FeatureKind::Complete; }
    // Number of features excluding the Complete marker.
    int feature_count() const { return (int)feats.size() - (has_complete() ? 1 : 0); }
    int licensee_count() const;
    // Position of the selectee, or -1 for Complete-final items.
    int selectee_pos() const;

    std::string str() const;

    friend bool operator==(const LexicalItem&, const LexicalItem&) = default;
    // Canonical order: phonetic form, then features position-wise with the
    // sequence end ranking between licensees and Complete.
    friend bool operator<(const LexicalItem& a, const LexicalItem& b);
};

// Checks the canonical item shape: one or more features arranged as
// (selector|licensor)* followed by either a selectee and trailing licensees
// or by the single final Complete feature. Head-moving selectors are only
// admitted in initial (complement-selecting) position. Returns a diagnostic
// for ill-formed items.
std::optional<std::string> item_shape_error(const LexicalItem& item);

struct Lexicon {
    // Sorted, duplicate-free.
    std::vector<LexicalItem> items;

    void insert(LexicalItem item);
    bool contains(const LexicalItem& item) const;
    bool empty() const { return items.empty(); }
    size_t size() const { return items.size(); }

    friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

struct LexiconParseError : std::runtime_error {
    int line;
    LexiconParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Text format: one item per line, `phon::f1,f2,...`. Feature syntax:
// =xK selector, <=xK / =>xK left/right head-moving selector, ~xK selectee,
// +c licensor, -c licensee (c in {l, r, m2, m3, ...}), C complete.
// Covert forms are written eps_decl / eps_intr. `#` starts a comment line.
// Duplicate lines collapse (a lexicon is a set).
Lexicon parse_lexicon_text(const std::string& text);

// Canonical form: items sorted, one per line, LF endings.
std::string print_lexicon_text(const Lexicon& lex);

std::string parse_feature_list(const std::string& text, std::vector<Feature>& out);  // returns "" or error

Feature parse_feature(const std::string& text);  // throws std::invalid_argument

}  // namespace mg

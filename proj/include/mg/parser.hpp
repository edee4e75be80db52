#pragma once

// Agenda-based chart parser for minimalist grammars with phrasal movement
// and head movement, over Harkema-style items. Expressions carry a split
// (specifier, head, complement) span for the main chain so that raised
// heads and discontinuous material consolidate only when pronounced.

#include <cstdint>
#include <optional>
#include <vector>

#include "mg/core.hpp"
#include "mg/corpus.hpp"
#include "mg/derivation.hpp"

namespace mg {

struct Bounds {
    int max_feats = 3;
    int max_phrasal_moves = 3;
    int max_head_moves = 1;
    int covert_budget = 1;
    int derivation_cap = 10000;
};

struct Span {
    int8_t lo = -1, hi = -1;  // EMPTY when lo < 0; concatenates freely
    bool empty() const { return lo < 0; }
    friend auto operator<=>(const Span&, const Span&) = default;
};

std::optional<Span> span_concat(Span a, Span b);

// One chain: the remaining features of a head (item index plus consumed
// prefix length) and its split spans.
struct ChainItem {
    int16_t item = -1;
    int8_t pos = 0;
    bool headless = false;  // head raised away by head movement
    Span spec, head, comp;
    friend auto operator<=>(const ChainItem&, const ChainItem&) = default;
};

// Main chain plus pending movers, each waiting on a licensee. Movers are
// kept sorted by the category of their next licensee; the shortest-move
// constraint keeps those categories pairwise distinct.
struct Expression {
    ChainItem main;
    std::vector<ChainItem> movers;
    int8_t moves_used = 0;
    int8_t head_moves_used = 0;
    int8_t coverts_used = 0;
    friend auto operator<=>(const Expression&, const Expression&) = default;
};

struct ParseResult {
    std::vector<DerivationTree> derivations;
    bool capped = false;
};

// All complete derivations (up to the cap) whose leaves come from `lex`,
// whose overt yield equals `tokens`, whose root retains exactly the
// Complete feature, and whose covert complementizer matches `type`.
ParseResult parse(const Lexicon& lex, const std::vector<std::string>& tokens, SentenceType type,
                  const Bounds& bounds = {});

// True iff some parse extracts every annotated relation (matched as an
// unordered pair against any local merge relation) with the right sentence
// type.
bool validate(const Lexicon& lex, const AnnotatedSentence& sentence, const Bounds& bounds = {});

// True iff the derivation covers the sentence's annotations.
bool covers_annotations(const DerivationTree& d, const AnnotatedSentence& sentence);

}  // namespace mg

#pragma once

// Annotated sentences: token sequence, sentence type, and the agree/arg
// relation pairs, plus the line-delimited JSON corpus format.

#include <string>
#include <vector>

#include "mg/derivation.hpp"

namespace mg {

struct Annotation {
    Relation::Kind kind;
    int a = -1;  // token indices
    int b = -1;
    friend auto operator<=>(const Annotation&, const Annotation&) = default;
};

struct AnnotatedSentence {
    std::vector<std::string> tokens;  // lowercased, punctuation stripped
    SentenceType type = SentenceType::Decl;
    std::vector<Annotation> annotations;
    std::string text;  // original text, informational

    std::string token_string() const;
};

// Lowercases, strips sentence punctuation, splits on whitespace.
std::vector<std::string> tokenize(const std::string& text);

struct CorpusParseError : std::runtime_error {
    int line;
    CorpusParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// One JSON record per line:
//   {"text": "...", "type": "decl"|"intr",
//    "relations": [{"kind": "agree"|"arg", "a": token, "b": token}, ...]}
// Relation tokens must occur exactly once in the sentence.
std::vector<AnnotatedSentence> parse_corpus_jsonl(const std::string& text);
std::vector<AnnotatedSentence> load_corpus_file(const std::string& path);

}  // namespace mg

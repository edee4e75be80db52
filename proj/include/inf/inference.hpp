#pragma once

// The acquisition driver: consumes annotated sentences one at a time into an
// encoder state, optimizes the cost objectives lexicographically, samples
// optimal lexicons, and validates every sample with the agenda parser.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enc/encoder.hpp"

namespace inf {

// Strict lexicographic objective order; entries and features minimize,
// distinct selector categories maximizes.
struct CostSpec {
    std::vector<std::string> order{"items", "features", "distinct_selectors"};
};

struct Sample {
    mg::Lexicon lexicon;
    std::vector<mg::DerivationTree> parses;  // one per consumed sentence
    int items = 0;
    int lexicon_features = 0;   // excluding Complete
    int parse_features = 0;     // including each parse's Complete
    int distinct_selectors = 0;
    bool validated = false;     // every sentence re-validated by the parser
};

struct RunResult {
    bool ok = false;
    std::string error;
    bool optimal = false;
    std::vector<Sample> samples;
    std::map<std::string, int> objectives;  // achieved optimum per objective
    int64_t conflicts = 0;
};

RunResult run(const std::vector<mg::AnnotatedSentence>& corpus, const enc::Config& cfg, const CostSpec& cost,
              int sample_count);

// Distinct lexicons satisfying the state (under the given assumptions),
// fewer if the set is smaller. Distinctness is judged on the canonical
// printed form; each sample leaves a blocking clause behind.
std::vector<mg::Lexicon> sample_lexicons(enc::EncoderState& state, int n,
                                         const std::vector<sat::Lit>& assumptions = {});

struct AblationReport {
    std::string group;
    bool known_group = false;
    bool baseline_sat = false;
    bool ablated_sat = false;
    std::map<std::string, int> baseline_objectives;
    std::map<std::string, int> ablated_objectives;
};

AblationReport ablate(const std::vector<mg::AnnotatedSentence>& corpus, const enc::Config& cfg,
                      const CostSpec& cost, const std::string& group);

// Sample metrics, shared with reporting.
int count_lexicon_features(const mg::Lexicon& lex);
int count_parse_features(const std::vector<mg::DerivationTree>& parses);
int count_distinct_selectors(const mg::Lexicon& lex);

}  // namespace inf

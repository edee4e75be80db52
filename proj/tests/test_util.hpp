#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mg/core.hpp"
#include "mg/corpus.hpp"

inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(MGINFER_DATA_DIR) + "/" + name; }

inline mg::Lexicon load_lexicon(const std::string& name) {
    return mg::parse_lexicon_text(slurp_file(data_path(name)));
}

inline std::vector<mg::AnnotatedSentence> load_corpus() { return mg::load_corpus_file(data_path("corpus.jsonl")); }

#include "mg/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mg {

std::string AnnotatedSentence::token_string() const {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += " ";
        s += tokens[i];
    }
    return s;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        while (!tok.empty() && (tok.back() == '.' || tok.back() == '?' || tok.back() == '!' || tok.back() == ','))
            tok.pop_back();
        for (auto& c : tok) c = (char)std::tolower((unsigned char)c);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

namespace {

int resolve_token(const AnnotatedSentence& s, const std::string& name, int line) {
    std::string lowered = name;
    for (auto& c : lowered) c = (char)std::tolower((unsigned char)c);
    int found = -1;
    for (size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i] == lowered) {
            if (found >= 0) throw CorpusParseError(line, "ambiguous relation token: " + name);
            found = (int)i;
        }
    }
    if (found < 0) throw CorpusParseError(line, "relation token not in sentence: " + name);
    return found;
}

}  // namespace

std::vector<AnnotatedSentence> parse_corpus_jsonl(const std::string& text) {
    std::vector<AnnotatedSentence> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw CorpusParseError(lineno, std::string("bad JSON: ") + e.what());
        }
        AnnotatedSentence s;
        try {
            s.text = j.at("text").get<std::string>();
            std::string type = j.at("type").get<std::string>();
            if (type == "decl")
                s.type = SentenceType::Decl;
            else if (type == "intr")
                s.type = SentenceType::Intr;
            else
                throw CorpusParseError(lineno, "type must be \"decl\" or \"intr\"");
            s.tokens = tokenize(s.text);
            if (s.tokens.empty()) throw CorpusParseError(lineno, "sentence has no tokens");
            for (const auto& r : j.value("relations", nlohmann::json::array())) {
                Annotation a;
                std::string kind = r.at("kind").get<std::string>();
                if (kind == "agree")
                    a.kind = Relation::Kind::Agree;
                else if (kind == "arg")
                    a.kind = Relation::Kind::Arg;
                else
                    throw CorpusParseError(lineno, "relation kind must be \"agree\" or \"arg\"");
                a.a = resolve_token(s, r.at("a").get<std::string>(), lineno);
                a.b = resolve_token(s, r.at("b").get<std::string>(), lineno);
                s.annotations.push_back(a);
            }
        } catch (const nlohmann::json::exception& e) {
            throw CorpusParseError(lineno, std::string("bad record: ") + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<AnnotatedSentence> load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_corpus_jsonl(buf.str());
}

}  // namespace mg

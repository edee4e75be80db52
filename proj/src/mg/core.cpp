#include "mg/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mg {

std::string sel_cat_name(int cat) { return "x" + std::to_string(cat); }

std::string lic_cat_name(int cat) {
    if (cat == 0) return "l";
    if (cat == 1) return "r";
    return "m" + std::to_string(cat);
}

std::string Feature::str() const {
    switch (kind) {
        case FeatureKind::Selector: {
            std::string prefix = head_move == HeadMove::Left    ? "<="
                                 : head_move == HeadMove::Right ? "=>"
                                                                : "=";
            return prefix + sel_cat_name(cat);
        }
        case FeatureKind::Selectee: return "~" + sel_cat_name(cat);
        case FeatureKind::Licensor: return "+" + lic_cat_name(cat);
        case FeatureKind::Licensee: return "-" + lic_cat_name(cat);
        case FeatureKind::Complete: return "C";
    }
    return "?";
}

int Feature::sort_rank() const {
    switch (kind) {
        case FeatureKind::Selector:
            return head_move == HeadMove::None ? 0 : head_move == HeadMove::Left ? 1 : 2;
        case FeatureKind::Selectee: return 3;
        case FeatureKind::Licensor: return 4;
        case FeatureKind::Licensee: return 5;
        case FeatureKind::Complete: return 7;
    }
    return 7;
}

bool operator<(const LexicalItem& a, const LexicalItem& b) {
    if (a.phon != b.phon) return a.phon < b.phon;
    size_t n = std::max(a.feats.size(), b.feats.size());
    for (size_t i = 0; i < n; ++i) {
        // one past the end ranks 6, between licensees and Complete
        int ra = i < a.feats.size() ? a.feats[i].sort_rank() : 6;
        int rb = i < b.feats.size() ? b.feats[i].sort_rank() : 6;
        if (ra != rb) return ra < rb;
        int ca = i < a.feats.size() ? a.feats[i].cat : 0;
        int cb = i < b.feats.size() ? b.feats[i].cat : 0;
        if (ca != cb) return ca < cb;
    }
    return false;
}

bool check_external_merge(const Feature& a, const Feature& b) {
    return a.kind == FeatureKind::Selector && b.kind == FeatureKind::Selectee && a.cat == b.cat;
}

bool check_internal_merge(const Feature& a, const Feature& b) {
    return a.kind == FeatureKind::Licensor && b.kind == FeatureKind::Licensee && a.cat == b.cat;
}

PhoneticForm PhoneticForm::overt_form(std::string tok) {
    for (auto& c : tok) c = (char)std::tolower((unsigned char)c);
    if (tok.empty()) throw std::invalid_argument("empty overt token");
    if (tok.find("::") != std::string::npos || tok.find_first_of(" \t\n") != std::string::npos)
        throw std::invalid_argument("bad overt token: " + tok);
    return {Kind::Overt, std::move(tok)};
}

std::string PhoneticForm::str() const {
    switch (kind) {
        case Kind::Overt: return token;
        case Kind::CovertDecl: return "eps_decl";
        case Kind::CovertIntr: return "eps_intr";
    }
    return "?";
}

int LexicalItem::licensee_count() const {
    int n = 0;
    for (const auto& f : feats) n += f.kind == FeatureKind::Licensee;
    return n;
}

int LexicalItem::selectee_pos() const {
    for (size_t i = 0; i < feats.size(); ++i)
        if (feats[i].kind == FeatureKind::Selectee) return (int)i;
    return -1;
}

std::string LexicalItem::str() const {
    std::string s = phon.str() + "::";
    for (size_t i = 0; i < feats.size(); ++i) {
        if (i) s += ",";
        s += feats[i].str();
    }
    return s;
}

std::optional<std::string> item_shape_error(const LexicalItem& item) {
    const auto& fs = item.feats;
    if (fs.empty()) return "item has no features";
    size_t i = 0;
    while (i < fs.size() && (fs[i].kind == FeatureKind::Selector || fs[i].kind == FeatureKind::Licensor)) {
        if (fs[i].kind == FeatureKind::Selector && fs[i].head_move != HeadMove::None && i != 0)
            return "head-moving selector must be the first feature";
        ++i;
    }
    if (i < fs.size() && fs[i].kind == FeatureKind::Selectee) {
        ++i;
        while (i < fs.size() && fs[i].kind == FeatureKind::Licensee) ++i;
        if (i != fs.size()) return "feature after the licensee block: " + fs[i].str();
        return std::nullopt;
    }
    if (i < fs.size() && fs[i].kind == FeatureKind::Complete) {
        if (i + 1 != fs.size()) return "feature after C";
        return std::nullopt;
    }
    if (i == fs.size()) return "item lacks a selectee or a final C";
    return "misplaced feature: " + fs[i].str();
}

void Lexicon::insert(LexicalItem item) {
    auto it = std::lower_bound(items.begin(), items.end(), item);
    if (it != items.end() && *it == item) return;
    items.insert(it, std::move(item));
}

bool Lexicon::contains(const LexicalItem& item) const {
    return std::binary_search(items.begin(), items.end(), item);
}

namespace {

int parse_sel_cat(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') throw std::invalid_argument("unknown category symbol: " + s);
    for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit((unsigned char)s[i])) throw std::invalid_argument("unknown category symbol: " + s);
    int v = std::stoi(s.substr(1));
    if (v > 31) throw std::invalid_argument("category index out of range: " + s);
    return v;
}

int parse_lic_cat(const std::string& s) {
    if (s == "l") return 0;
    if (s == "r") return 1;
    if (s.size() >= 2 && s[0] == 'm') {
        for (size_t i = 1; i < s.size(); ++i)
            if (!std::isdigit((unsigned char)s[i])) throw std::invalid_argument("unknown category symbol: " + s);
        int v = std::stoi(s.substr(1));
        if (v < 2 || v > 31) throw std::invalid_argument("category index out of range: " + s);
        return v;
    }
    throw std::invalid_argument("unknown category symbol: " + s);
}

}  // namespace

Feature parse_feature(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty feature");
    if (text == "C") return Feature::complete();
    if (text.rfind("<=", 0) == 0) return Feature::selector(parse_sel_cat(text.substr(2)), HeadMove::Left);
    if (text.rfind("=>", 0) == 0) return Feature::selector(parse_sel_cat(text.substr(2)), HeadMove::Right);
    switch (text[0]) {
        case '=': return Feature::selector(parse_sel_cat(text.substr(1)));
        case '~': return Feature::selectee(parse_sel_cat(text.substr(1)));
        case '+': return Feature::licensor(parse_lic_cat(text.substr(1)));
        case '-': return Feature::licensee(parse_lic_cat(text.substr(1)));
        default: throw std::invalid_argument("unknown feature syntax: " + text);
    }
}

std::string parse_feature_list(const std::string& text, std::vector<Feature>& out) {
    out.clear();
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            out.push_back(parse_feature(part));
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return "";
}

Lexicon parse_lexicon_text(const std::string& text) {
    Lexicon lex;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        size_t last = line.find_last_not_of(" \t");
        std::string body = line.substr(first, last - first + 1);
        if (body[0] == '#') continue;

        size_t sep = body.find("::");
        if (sep == std::string::npos) throw LexiconParseError(lineno, "missing `::` separator");
        std::string phon_text = body.substr(0, sep);
        std::string feats_text = body.substr(sep + 2);
        if (phon_text.empty()) throw LexiconParseError(lineno, "empty phonetic form");
        if (feats_text.empty()) throw LexiconParseError(lineno, "empty feature list");

        LexicalItem item;
        try {
            if (phon_text == "eps_decl")
                item.phon = PhoneticForm::covert_decl();
            else if (phon_text == "eps_intr")
                item.phon = PhoneticForm::covert_intr();
            else
                item.phon = PhoneticForm::overt_form(phon_text);
        } catch (const std::invalid_argument& e) {
            throw LexiconParseError(lineno, e.what());
        }
        std::string err = parse_feature_list(feats_text, item.feats);
        if (!err.empty()) throw LexiconParseError(lineno, err);
        if (auto shape_err = item_shape_error(item)) throw LexiconParseError(lineno, *shape_err);
        lex.insert(std::move(item));
    }
    return lex;
}

std::string print_lexicon_text(const Lexicon& lex) {
    std::string out;
    for (const auto& item : lex.items) {
        out += item.str();
        out += "\n";
    }
    return out;
}

}  // namespace mg

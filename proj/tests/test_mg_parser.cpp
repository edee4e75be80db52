#include <set>

#include "doctest.h"
#include "mg/parser.hpp"
#include "test_util.hpp"

using namespace mg;

namespace {

std::vector<std::string> toks(const std::string& s) { return tokenize(s); }

bool yields_match(const DerivationTree& d, const std::vector<std::string>& tokens) {
    return overt_yield(d) == tokens;
}

// Compact event signature: E proj arg / I host mover / H marks head movement.
std::string event_sig(const DerivationTree& d) {
    std::string out;
    for (const auto& e : merge_events(d)) {
        auto name = [&](int leaf) { return d.nodes[leaf].item.phon.str(); };
        if (e.kind == MergeEvent::Kind::Internal)
            out += "I(" + name(e.arg_head) + "," + name(e.proj_head) + ");";
        else if (e.head_moved)
            out += "EH(" + name(e.proj_head) + "," + name(e.arg_head) + "," + name(e.raised_leaf) + ");";
        else
            out += "E(" + name(e.proj_head) + "," + name(e.arg_head) + ");";
    }
    return out;
}

}  // namespace

TEST_CASE("lexicon C parses the declarative I1") {
    auto lexC = load_lexicon("lexC.mg");
    auto r = parse(lexC, toks("John has eaten pizza."), SentenceType::Decl);
    CHECK(!r.derivations.empty());
    for (const auto& d : r.derivations) {
        CHECK(yields_match(d, toks("john has eaten pizza")));
        CHECK_FALSE(tree_invariant_error(d));
        CHECK(d.sentence_type() == SentenceType::Decl);
    }
}

TEST_CASE("lexicon C reproduces the standard wh-question derivation for I7") {
    auto lexC = load_lexicon("lexC.mg");
    auto r = parse(lexC, toks("What was Sally eating?"), SentenceType::Intr);
    REQUIRE(!r.derivations.empty());
    // external: eating+what, eating+sally, was+VP; internal: sally->was;
    // head movement of was onto eps_intr; internal: what->eps_intr.
    std::string expected =
        "E(eating,what);E(eating,sally);E(was,eating);I(sally,was);"
        "EH(eps_intr,was,was);I(what,eps_intr);";
    bool found = false;
    for (const auto& d : r.derivations) found = found || event_sig(d) == expected;
    CHECK(found);
}

TEST_CASE("empty lexicon parses nothing") {
    auto r = parse(Lexicon{}, toks("john has eaten pizza"), SentenceType::Decl);
    CHECK(r.derivations.empty());
}

TEST_CASE("relations extracted from the I7 derivation") {
    auto lexC = load_lexicon("lexC.mg");
    auto corpus = load_corpus();
    const auto& i7 = corpus[6];
    auto r = parse(lexC, i7.tokens, SentenceType::Intr);
    REQUIRE(!r.derivations.empty());
    bool found = false;
    for (const auto& d : r.derivations) {
        auto rs = extract_relations(d);
        // what=0 was=1 sally=2 eating=3
        bool has = rs.has_pair(0, 3) && rs.has_pair(2, 3) && rs.has_pair(2, 1);
        // the documented orientation: arg(what,eating), arg(sally,eating), agree(sally,was)
        bool oriented = false;
        for (const auto& rel : rs.args()) oriented |= (rel.a == 0 && rel.b == 3);
        bool agree_sally_was = false;
        for (const auto& rel : rs.agrees()) agree_sally_was |= (rel.a == 2 && rel.b == 1);
        found = found || (has && oriented && agree_sally_was);
    }
    CHECK(found);
}

TEST_CASE("relations for the passive I9") {
    auto lexC = load_lexicon("lexC.mg");
    auto corpus = load_corpus();
    const auto& i9 = corpus[8];  // pizza was eaten
    CHECK(validate(lexC, i9));
    auto r = parse(lexC, i9.tokens, SentenceType::Decl);
    REQUIRE(!r.derivations.empty());
    bool found = false;
    for (const auto& d : r.derivations) {
        auto rs = extract_relations(d);
        found = found || (rs.has_pair(0, 2) && rs.has_pair(0, 1));  // arg(pizza,eaten), agree(pizza,was)
    }
    CHECK(found);
}

TEST_CASE("single-leaf degenerate tree has no relations") {
    DerivationTree d;
    DerivNode leaf;
    leaf.item = LexicalItem{PhoneticForm::overt_form("pizza"), {Feature::complete()}};
    leaf.token = 0;
    d.nodes.push_back(leaf);
    auto rs = extract_relations(d);
    CHECK(rs.relations.empty());
    CHECK_FALSE(rs.type.has_value());
}

TEST_CASE("complement linearizes to the head's right") {
    DerivationTree d;
    DerivNode eaten;
    eaten.item = parse_lexicon_text("eaten::=x0,C\n").items[0];
    eaten.token = 0;
    DerivNode pizza;
    pizza.item = parse_lexicon_text("pizza::~x0\n").items[0];
    pizza.token = 1;
    d.nodes.push_back(eaten);
    d.nodes.push_back(pizza);
    DerivNode merge;
    merge.proj = 0;
    merge.arg = 1;
    merge.complement = true;
    d.nodes.push_back(merge);
    auto y = overt_yield(d);
    REQUIRE(y.size() == 2);
    CHECK(y[0] == "eaten");
    CHECK(y[1] == "pizza");
}

TEST_CASE("lexicon B and C validate the whole corpus") {
    auto corpus = load_corpus();
    auto lexB = load_lexicon("lexB.mg");
    auto lexC = load_lexicon("lexC.mg");
    for (const auto& s : corpus) {
        CAPTURE(s.text);
        CHECK(validate(lexB, s));
        CHECK(validate(lexC, s));
    }
}

TEST_CASE("empty lexicon validates nothing") {
    auto corpus = load_corpus();
    CHECK_FALSE(validate(Lexicon{}, corpus[0]));
}

TEST_CASE("lexicon B derives I7 without merging was with eating") {
    auto lexB = load_lexicon("lexB.mg");
    auto corpus = load_corpus();
    const auto& i7 = corpus[6];
    auto r = parse(lexB, i7.tokens, SentenceType::Intr);
    REQUIRE(!r.derivations.empty());
    int was_tok = 1, eating_tok = 3;
    bool some_without = false;
    for (const auto& d : r.derivations) {
        if (!covers_annotations(d, i7)) continue;
        bool related = false;
        for (size_t x = 0; x < d.nodes.size(); ++x) {
            const auto& n = d.nodes[x];
            if (n.leaf()) continue;
            int hp = d.head_of(n.proj), ha = d.head_of(n.arg);
            std::set<int> pair{d.nodes[hp].token, d.nodes[ha].token};
            if (pair == std::set<int>{was_tok, eating_tok}) related = true;
        }
        some_without = some_without || !related;
    }
    CHECK(some_without);
}

TEST_CASE("parser soundness across both lexicons and the corpus") {
    auto corpus = load_corpus();
    for (const auto& name : {"lexB.mg", "lexC.mg"}) {
        auto lex = load_lexicon(name);
        for (const auto& s : corpus) {
            auto r = parse(lex, s.tokens, s.type);
            CHECK(!r.capped);
            for (const auto& d : r.derivations) {
                CAPTURE(name);
                CAPTURE(s.text);
                auto err = tree_invariant_error(d);
                if (err) FAIL_CHECK(*err);
                CHECK(yields_match(d, s.tokens));
                for (size_t i = 0; i < d.nodes.size(); ++i)
                    if (d.nodes[i].leaf() && d.nodes[i].item.phon.overt())
                        CHECK(d.nodes[i].item.phon.token == s.tokens[d.nodes[i].token]);
            }
        }
    }
}

TEST_CASE("shortest move blocks same-category mover pairs") {
    // p selects two phrases that would both carry a pending -l.
    auto clash = parse_lexicon_text(
        "a::~x0,-l\n"
        "b::~x1,-l\n"
        "p::=x0,=x1,+l,+l,~x2\n"
        "eps_decl::=x2,C\n");
    auto ok = parse_lexicon_text(
        "a::~x0,-l\n"
        "b::~x1,-r\n"
        "p::=x0,=x1,+r,+l,~x2\n"
        "eps_decl::=x2,C\n");
    Bounds relax;
    relax.max_feats = 5;
    for (auto tokens : {std::vector<std::string>{"a", "b", "p"}, std::vector<std::string>{"b", "a", "p"}}) {
        auto r1 = parse(clash, tokens, SentenceType::Decl, relax);
        CHECK(r1.derivations.empty());
    }
    auto r2 = parse(ok, {"a", "b", "p"}, SentenceType::Decl, relax);
    CHECK(!r2.derivations.empty());
}

TEST_CASE("parse results are deterministic and order-independent") {
    auto lexC = load_lexicon("lexC.mg");
    auto corpus = load_corpus();
    auto r1 = parse(lexC, corpus[2].tokens, corpus[2].type);
    auto r2 = parse(lexC, corpus[2].tokens, corpus[2].type);
    REQUIRE(r1.derivations.size() == r2.derivations.size());
    for (size_t i = 0; i < r1.derivations.size(); ++i)
        CHECK(render_tree_text(r1.derivations[i]) == render_tree_text(r2.derivations[i]));
}

TEST_CASE("derivation cap flags truncation") {
    auto lexA = load_lexicon("lexA.mg");
    Bounds tight;
    tight.derivation_cap = 1;
    auto corpus = load_corpus();
    auto r = parse(lexA, corpus[0].tokens, corpus[0].type, tight);
    CHECK(r.derivations.size() <= 1);
}

TEST_CASE("tree render shows the consumed-feature asterisk") {
    auto lexC = load_lexicon("lexC.mg");
    auto corpus = load_corpus();
    auto r = parse(lexC, corpus[8].tokens, corpus[8].type);
    REQUIRE(!r.derivations.empty());
    auto text = render_tree_text(r.derivations[0]);
    CHECK(text.find('*') != std::string::npos);
    auto dot = render_tree_dot(r.derivations[0]);
    CHECK(dot.find("digraph") == 0);
}

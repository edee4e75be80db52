#include "doctest.h"
#include "enc/encoder.hpp"
#include "inf/inference.hpp"
#include "test_util.hpp"

using namespace mg;

namespace {

std::vector<std::string> vocab_of(const std::vector<AnnotatedSentence>& corpus) {
    std::vector<std::string> v;
    for (const auto& s : corpus)
        for (const auto& t : s.tokens) v.push_back(t);
    return v;
}

enc::Config small_config() {
    enc::Config cfg;
    cfg.max_items = 8;
    return cfg;
}

}  // namespace

TEST_CASE("single passive sentence round-trips through the solver and parser") {
    auto corpus = load_corpus();
    const auto& i9 = corpus[8];  // pizza was eaten
    enc::EncoderState state(small_config(), vocab_of({i9}));
    state.encode_sentence(i9);
    REQUIRE(state.solve() == sat::Status::Sat);
    CHECK(state.solver().verify_model());

    auto lex = state.decode_lexicon();
    CHECK(!lex.empty());
    auto tree = state.decode_parse(0);
    auto err = tree_invariant_error(tree);
    if (err) FAIL_CHECK(*err);
    CHECK(overt_yield(tree) == i9.tokens);
    CHECK(covers_annotations(tree, i9));
    // the independent agenda parser agrees
    CHECK(validate(lex, i9));
}

TEST_CASE("pinning lexicon C solves the first sentence and reproduces a valid parse") {
    auto corpus = load_corpus();
    auto lexC = load_lexicon("lexC.mg");
    enc::Config cfg;
    cfg.max_items = 16;
    enc::EncoderState state(cfg, vocab_of(corpus));
    state.encode_sentence(corpus[0]);  // john has eaten pizza
    REQUIRE(state.assert_lexicon(lexC) == sat::Status::Sat);
    auto tree = state.decode_parse(0);
    auto err = tree_invariant_error(tree);
    if (err) FAIL_CHECK(*err);
    CHECK(overt_yield(tree) == corpus[0].tokens);
    CHECK(covers_annotations(tree, corpus[0]));
    auto lex = state.decode_lexicon();
    CHECK(lex == lexC);
}

TEST_CASE("pinned lexicon C reproduces the fig-2 derivation events on I7") {
    auto corpus = load_corpus();
    auto lexC = load_lexicon("lexC.mg");
    enc::Config cfg;
    cfg.max_items = 16;
    enc::EncoderState state(cfg, vocab_of(corpus));
    state.encode_sentence(corpus[6]);  // what was sally eating
    REQUIRE(state.assert_lexicon(lexC) == sat::Status::Sat);
    auto tree = state.decode_parse(0);
    auto err = tree_invariant_error(tree);
    if (err) FAIL_CHECK(*err);
    CHECK(overt_yield(tree) == corpus[6].tokens);
    auto events = merge_events(tree);
    REQUIRE(events.size() == 6);
    auto phon = [&](int leaf) { return tree.nodes[leaf].item.phon.str(); };
    CHECK(phon(events[0].proj_head) == "eating");
    CHECK(phon(events[0].arg_head) == "what");
    CHECK(phon(events[1].proj_head) == "eating");
    CHECK(phon(events[1].arg_head) == "sally");
    CHECK(phon(events[2].proj_head) == "was");
    CHECK(events[3].kind == MergeEvent::Kind::Internal);
    CHECK(phon(events[3].arg_head) == "sally");
    CHECK(phon(events[3].proj_head) == "was");
    CHECK(events[4].head_moved);
    CHECK(phon(events[4].raised_leaf) == "was");
    CHECK(phon(events[4].proj_head) == "eps_intr");
    CHECK(events[5].kind == MergeEvent::Kind::Internal);
    CHECK(phon(events[5].arg_head) == "what");
    CHECK(phon(events[5].proj_head) == "eps_intr");
}

TEST_CASE("a lexicon that cannot derive the sentence is rejected") {
    auto corpus = load_corpus();
    enc::EncoderState state(small_config(), vocab_of(corpus));
    state.encode_sentence(corpus[0]);
    auto tiny = parse_lexicon_text("pizza::~x0\n");
    CHECK(state.assert_lexicon(tiny) == sat::Status::Unsat);
}

TEST_CASE("typed sentence with no covert budget is unsatisfiable") {
    auto corpus = load_corpus();
    enc::Config cfg = small_config();
    cfg.bounds.covert_budget = 0;
    enc::EncoderState state(cfg, vocab_of(corpus));
    state.encode_sentence(corpus[8]);
    CHECK(state.solve() == sat::Status::Unsat);
}

TEST_CASE("annotation token errors are rejected") {
    auto corpus = load_corpus();
    auto bad = corpus[8];
    bad.annotations.push_back({Relation::Kind::Arg, 7, 0});
    enc::EncoderState state(small_config(), vocab_of(corpus));
    CHECK_THROWS_AS(state.encode_sentence(bad), std::invalid_argument);
}

TEST_CASE("decoded lexicons from an unpinned state validate via the parser") {
    auto corpus = load_corpus();
    const auto& i5 = corpus[4];  // sally was eating pizza
    enc::EncoderState state(small_config(), vocab_of({i5}));
    state.encode_sentence(i5);
    auto lexicons = inf::sample_lexicons(state, 5);
    REQUIRE(!lexicons.empty());
    for (const auto& lex : lexicons) {
        CAPTURE(print_lexicon_text(lex));
        CHECK(validate(lex, i5));
    }
}

TEST_CASE("category permutations of a satisfying lexicon still satisfy the state") {
    auto corpus = load_corpus();
    auto lexC = load_lexicon("lexC.mg");
    enc::Config cfg;
    cfg.max_items = 16;
    enc::EncoderState state(cfg, vocab_of(corpus));
    state.encode_sentence(corpus[8]);
    state.encode_sentence(corpus[0]);
    REQUIRE(state.assert_lexicon(lexC) == sat::Status::Sat);
    // permute selectional categories: x -> (x + 1) mod 5
    Lexicon permuted;
    for (auto item : lexC.items) {
        for (auto& f : item.feats)
            if (f.selectional()) f.cat = (f.cat + 1) % 5;
        permuted.insert(std::move(item));
    }
    CHECK(state.assert_lexicon(permuted) == sat::Status::Sat);
}

TEST_CASE("monotonicity: later states only shrink the solution set") {
    auto corpus = load_corpus();
    enc::Config cfg = small_config();
    cfg.max_items = 10;
    enc::EncoderState s2(cfg, vocab_of(corpus));
    s2.encode_sentence(corpus[8]);   // pizza was eaten
    s2.encode_sentence(corpus[10]);  // what was eaten
    auto lexicons = inf::sample_lexicons(s2, 3);
    REQUIRE(!lexicons.empty());
    enc::EncoderState s1(cfg, vocab_of(corpus));
    s1.encode_sentence(corpus[8]);
    for (const auto& lex : lexicons) CHECK(s1.assert_lexicon(lex) == sat::Status::Sat);
}

TEST_CASE("universal-category toggle is a stub") {
    enc::Config cfg;
    cfg.universal_categories = true;
    CHECK_THROWS_AS(cfg.check(), std::runtime_error);
}

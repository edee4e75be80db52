#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mg/core.hpp"

using namespace mg;

static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static std::string data(const std::string& name) { return std::string(MGINFER_DATA_DIR) + "/" + name; }

TEST_CASE("merge feature checks") {
    // (=x0, ~x0) selector/selectee pair
    CHECK(check_external_merge(Feature::selector(0), Feature::selectee(0)));
    CHECK_FALSE(check_external_merge(Feature::selector(0), Feature::selectee(1)));
    CHECK_FALSE(check_external_merge(Feature::selectee(0), Feature::selector(0)));

    // (+l, -l)
    CHECK(check_internal_merge(Feature::licensor(0), Feature::licensee(0)));
    CHECK_FALSE(check_internal_merge(Feature::licensor(0), Feature::licensee(1)));
    CHECK_FALSE(check_internal_merge(Feature::licensor(0), Feature::selectee(0)));
}

TEST_CASE("merge duality: no pair checks both ways") {
    std::vector<Feature> all;
    for (int c = 0; c < 3; ++c) {
        all.push_back(Feature::selector(c));
        all.push_back(Feature::selector(c, HeadMove::Left));
        all.push_back(Feature::selectee(c));
        all.push_back(Feature::licensor(c));
        all.push_back(Feature::licensee(c));
    }
    all.push_back(Feature::complete());
    for (const auto& a : all)
        for (const auto& b : all) {
            bool both = check_external_merge(a, b) && check_internal_merge(a, b);
            CHECK_FALSE(both);
        }
}

TEST_CASE("feature parsing and printing") {
    CHECK(parse_feature("=x1") == Feature::selector(1));
    CHECK(parse_feature("<=x2") == Feature::selector(2, HeadMove::Left));
    CHECK(parse_feature("=>x0") == Feature::selector(0, HeadMove::Right));
    CHECK(parse_feature("~x4") == Feature::selectee(4));
    CHECK(parse_feature("+l") == Feature::licensor(0));
    CHECK(parse_feature("-r") == Feature::licensee(1));
    CHECK(parse_feature("C") == Feature::complete());
    CHECK(parse_feature("<=x2").str() == "<=x2");
    CHECK(parse_feature("+l").str() == "+l");
    CHECK_THROWS_AS(parse_feature("=y1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_feature("*x1"), std::invalid_argument);
}

TEST_CASE("lexicon line parsing") {
    auto lex = parse_lexicon_text("has::=x1,+l,~x2\n");
    REQUIRE(lex.size() == 1);
    const auto& item = lex.items[0];
    CHECK(item.phon.token == "has");
    REQUIRE(item.feats.size() == 3);
    CHECK(item.feats[0] == Feature::selector(1));
    CHECK(item.feats[1] == Feature::licensor(0));
    CHECK(item.feats[2] == Feature::selectee(2));

    auto covert = parse_lexicon_text("eps_intr::<=x2,C\n");
    REQUIRE(covert.size() == 1);
    CHECK(covert.items[0].phon.kind == PhoneticForm::Kind::CovertIntr);
    CHECK(covert.items[0].feats[0] == Feature::selector(2, HeadMove::Left));
    CHECK(covert.items[0].feats[1] == Feature::complete());
}

TEST_CASE("lexicon parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_lexicon_text("pizza::~x0\nbroken-line\n"), doctest::Contains("line 2"),
                         LexiconParseError);
    // feature after C
    CHECK_THROWS_AS(parse_lexicon_text("eps_decl::C,~x0\n"), LexiconParseError);
    // no selectee and no C
    CHECK_THROWS_AS(parse_lexicon_text("who::-l,-r\n"), LexiconParseError);
    // unknown category symbol
    CHECK_THROWS_AS(parse_lexicon_text("who::~z0\n"), LexiconParseError);
}

TEST_CASE("canonical item shape") {
    LexicalItem ok{PhoneticForm::overt_form("who"), {Feature::selectee(0), Feature::licensee(0), Feature::licensee(1)}};
    CHECK_FALSE(item_shape_error(ok));
    LexicalItem two_selectees{PhoneticForm::overt_form("x"), {Feature::selectee(0), Feature::selectee(1)}};
    CHECK(item_shape_error(two_selectees));
    LexicalItem sel_after_licee{PhoneticForm::overt_form("x"), {Feature::selectee(0), Feature::licensee(0), Feature::selector(1)}};
    CHECK(item_shape_error(sel_after_licee));
    LexicalItem hm_not_first{PhoneticForm::overt_form("x"),
                             {Feature::selector(0), Feature::selector(1, HeadMove::Left), Feature::selectee(2)}};
    CHECK(item_shape_error(hm_not_first));
    LexicalItem empty{PhoneticForm::overt_form("x"), {}};
    CHECK(item_shape_error(empty));
}

TEST_CASE("fig-1 lexicons parse as a golden corpus") {
    auto a = parse_lexicon_text(slurp(data("lexA.mg")));
    auto b = parse_lexicon_text(slurp(data("lexB.mg")));
    auto c = parse_lexicon_text(slurp(data("lexC.mg")));
    CHECK(a.size() == 21);
    CHECK(b.size() == 15);
    CHECK(c.size() == 15);
    for (const auto* lex : {&a, &b, &c})
        for (const auto& item : lex->items) {
            CHECK_FALSE(item_shape_error(item));
            CHECK(item.feature_count() >= 1);
            CHECK(item.feature_count() <= 3);
        }
    // the C feature appears exactly on the covert complementizers
    for (const auto& item : c.items)
        CHECK(item.has_complete() == !item.phon.overt());
    // Total non-C features of Lexicon-C is the paper-reported lexicon size.
    int total = 0;
    for (const auto& item : c.items) total += item.feature_count();
    CHECK(total == 33);
}

TEST_CASE("print/parse round trip") {
    auto a = parse_lexicon_text(slurp(data("lexA.mg")));
    auto printed = print_lexicon_text(a);
    auto reparsed = parse_lexicon_text(printed);
    CHECK(a == reparsed);
    CHECK(print_lexicon_text(reparsed) == printed);
    CHECK(print_lexicon_text(Lexicon{}) == "");
}

TEST_CASE("duplicate lines collapse") {
    auto lex = parse_lexicon_text("pizza::~x0\npizza::~x0\n");
    CHECK(lex.size() == 1);
}

TEST_CASE("random lexicon round trip") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        Lexicon lex;
        int n = 1 + (int)(rng() % 6);
        for (int i = 0; i < n; ++i) {
            LexicalItem item;
            item.phon = rng() % 5 == 0
                            ? (rng() % 2 ? PhoneticForm::covert_decl() : PhoneticForm::covert_intr())
                            : PhoneticForm::overt_form(std::string(1, 'a' + (char)(rng() % 6)));
            int pre = (int)(rng() % 3);
            for (int k = 0; k < pre; ++k) {
                if (rng() % 3 == 0)
                    item.feats.push_back(Feature::licensor((int)(rng() % 2)));
                else
                    item.feats.push_back(Feature::selector(
                        (int)(rng() % 5), k == 0 && rng() % 4 == 0
                                              ? (rng() % 2 ? HeadMove::Left : HeadMove::Right)
                                              : HeadMove::None));
            }
            if (rng() % 4 == 0) {
                item.feats.push_back(Feature::complete());
            } else {
                item.feats.push_back(Feature::selectee((int)(rng() % 5)));
                int post = (int)(rng() % 3);
                for (int k = 0; k < post && (int)item.feats.size() < 4; ++k)
                    item.feats.push_back(Feature::licensee((int)(rng() % 2)));
            }
            if (item_shape_error(item)) continue;
            lex.insert(item);
        }
        auto reparsed = parse_lexicon_text(print_lexicon_text(lex));
        CHECK(lex == reparsed);
    }
}

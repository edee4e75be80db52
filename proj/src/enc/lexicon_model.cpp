#include <algorithm>
#include <stdexcept>

#include "enc/encoder.hpp"

namespace enc {

using cir::f_and;
using cir::f_eq;
using cir::f_iff;
using cir::f_implies;
using cir::f_ne;
using cir::f_not;
using cir::f_or;
using cir::Formula;
using cir::Term;

void Config::check() const {
    if (bounds.max_feats < 1 || bounds.max_phrasal_moves < 0 || bounds.max_head_moves < 0)
        throw std::invalid_argument("bounds must be positive");
    if (bounds.covert_budget < 0 || bounds.covert_budget > 1)
        throw std::invalid_argument("covert budget must be 0 or 1");
    if (max_items < 1 || categories < 1 || lic_categories < 1)
        throw std::invalid_argument("inventory sizes must be positive");
    if (universal_categories)
        throw std::runtime_error("the universal-category axiom pack is not implemented in this build");
}

int grid_kind_of(const mg::Feature& f) {
    switch (f.kind) {
        case mg::FeatureKind::Selector:
            return f.head_move == mg::HeadMove::None ? GSel : f.head_move == mg::HeadMove::Left ? GSelL : GSelR;
        case mg::FeatureKind::Selectee: return GStee;
        case mg::FeatureKind::Licensor: return GLsor;
        case mg::FeatureKind::Licensee: return GLsee;
        case mg::FeatureKind::Complete: return GNone;
    }
    return GNone;
}

mg::Feature feature_of(int gk, int cat) {
    switch (gk) {
        case GSel: return mg::Feature::selector(cat);
        case GSelL: return mg::Feature::selector(cat, mg::HeadMove::Left);
        case GSelR: return mg::Feature::selector(cat, mg::HeadMove::Right);
        case GStee: return mg::Feature::selectee(cat);
        case GLsor: return mg::Feature::licensor(cat);
        case GLsee: return mg::Feature::licensee(cat);
        default: throw std::invalid_argument("no feature for an empty grid cell");
    }
}

LexiconModel::LexiconModel(cir::Problem& p, const Config& cfg, std::vector<std::string> vocab)
    : vocab_(std::move(vocab)),
      slots_(cfg.max_items),
      feats_(cfg.bounds.max_feats),
      cats_(cfg.categories),
      lic_cats_(cfg.lic_categories) {
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());

    s_slot = p.add_sort("slot", slots_);
    s_phon = p.add_sort("phon", (int)vocab_.size() + 2);
    s_kind = p.add_sort("gkind", 7);
    s_cat = p.add_sort("cat", std::max(cats_, lic_cats_));
    s_bool = p.add_sort("flag", 2);
    s_fpos = p.add_sort("fpos", feats_);

    t_defined = p.add_table("defined", {s_slot}, s_bool);
    t_phon = p.add_table("phon", {s_slot}, s_phon);
    t_kind = p.add_table("feat_kind", {s_slot, s_fpos}, s_kind);
    t_cat = p.add_table("feat_cat", {s_slot, s_fpos}, s_cat);
    t_hasc = p.add_table("has_c", {s_slot}, s_bool);

    build_axioms(p, cfg);
}

int LexiconModel::phon_index(const mg::PhoneticForm& f) const {
    if (f.kind == mg::PhoneticForm::Kind::CovertDecl) return (int)vocab_.size();
    if (f.kind == mg::PhoneticForm::Kind::CovertIntr) return (int)vocab_.size() + 1;
    auto it = std::lower_bound(vocab_.begin(), vocab_.end(), f.token);
    if (it == vocab_.end() || *it != f.token) return -1;
    return (int)(it - vocab_.begin());
}

mg::PhoneticForm LexiconModel::phon_of(int index) const {
    if (index == (int)vocab_.size()) return mg::PhoneticForm::covert_decl();
    if (index == (int)vocab_.size() + 1) return mg::PhoneticForm::covert_intr();
    return mg::PhoneticForm::overt_form(vocab_[index]);
}

void LexiconModel::build_axioms(cir::Problem& p, const Config& cfg) {
    const std::string g = "lexicon";
    auto kind = [&](int s, int q) { return Term{t_kind, {s, q}}; };
    auto cat = [&](int s, int q) { return Term{t_cat, {s, q}}; };

    for (int s = 0; s < slots_; ++s) {
        Formula defined = f_eq(Term{t_defined, {s}}, 1);
        if (s + 1 < slots_) p.assert_formula(g, f_implies(f_eq(Term{t_defined, {s + 1}}, 1), defined));
        // undefined slots are fully pinned
        std::vector<Formula> pinned{f_eq(Term{t_phon, {s}}, 0), f_eq(Term{t_hasc, {s}}, 0)};
        for (int q = 0; q < feats_; ++q) {
            pinned.push_back(f_eq(kind(s, q), GNone));
            pinned.push_back(f_eq(cat(s, q), 0));
        }
        p.assert_formula(g, f_implies(f_not(defined), f_and(pinned)));
        p.assert_formula(g, f_implies(defined, f_ne(kind(s, 0), GNone)));

        for (int q = 0; q < feats_; ++q) {
            p.assert_formula(g, f_implies(f_eq(kind(s, q), GNone), f_eq(cat(s, q), 0)));
            for (int c = cats_; c < std::max(cats_, lic_cats_); ++c)
                for (int k : {GSel, GSelL, GSelR, GStee})
                    p.assert_formula(g, f_implies(f_eq(kind(s, q), k), f_ne(cat(s, q), c)));
            for (int c = lic_cats_; c < std::max(cats_, lic_cats_); ++c)
                for (int k : {GLsor, GLsee})
                    p.assert_formula(g, f_implies(f_eq(kind(s, q), k), f_ne(cat(s, q), c)));
            if (q > 0) {
                p.assert_formula(g, f_ne(kind(s, q), GSelL));
                p.assert_formula(g, f_ne(kind(s, q), GSelR));
            }
            for (int q2 = 0; q2 < q; ++q2) {
                p.assert_formula(
                    g, f_implies(f_eq(kind(s, q), GStee),
                                 f_or({f_eq(kind(s, q2), GSel), f_eq(kind(s, q2), GSelL), f_eq(kind(s, q2), GSelR),
                                       f_eq(kind(s, q2), GLsor)})));
                p.assert_formula(g, f_not(f_and({f_eq(kind(s, q), GStee), f_eq(kind(s, q2), GStee)})));
            }
            if (q == 0)
                p.assert_formula(g, f_ne(kind(s, 0), GLsee));
            else
                p.assert_formula(g, f_implies(f_eq(kind(s, q), GLsee),
                                              f_or({f_eq(kind(s, q - 1), GStee), f_eq(kind(s, q - 1), GLsee)})));
            // selectors/licensors form the prefix: none may follow a selectee
            if (q > 0)
                for (int k : {GSel, GLsor})
                    p.assert_formula(
                        g, f_implies(f_eq(kind(s, q), k),
                                     f_or({f_eq(kind(s, q - 1), GSel), f_eq(kind(s, q - 1), GSelL),
                                           f_eq(kind(s, q - 1), GSelR), f_eq(kind(s, q - 1), GLsor)})));
            if (q + 1 < feats_)
                p.assert_formula(g, f_implies(f_eq(kind(s, q), GNone), f_eq(kind(s, q + 1), GNone)));
        }
        // hasC <-> no selectee (for defined slots); covert forms <-> hasC
        std::vector<Formula> stees;
        for (int q = 0; q < feats_; ++q) stees.push_back(f_eq(kind(s, q), GStee));
        p.assert_formula(g, f_implies(f_eq(Term{t_hasc, {s}}, 1), f_not(f_or(stees))));
        std::vector<Formula> stees2;
        for (int q = 0; q < feats_; ++q) stees2.push_back(f_eq(kind(s, q), GStee));
        p.assert_formula(g, f_implies(f_and({defined, f_eq(Term{t_hasc, {s}}, 0)}), f_or(stees2)));
        Formula covert = f_or({f_eq(Term{t_phon, {s}}, (int)vocab_.size()),
                               f_eq(Term{t_phon, {s}}, (int)vocab_.size() + 1)});
        p.assert_formula(g, f_implies(defined, f_iff(covert, f_eq(Term{t_hasc, {s}}, 1))));
    }

    // Canonical slot ordering: consecutive defined slots strictly increase in
    // (phon, grid, hasC); this also rules out duplicate items.
    for (int s = 0; s + 1 < slots_; ++s) {
        struct Field {
            Term a, b;
            int width;
        };
        std::vector<Field> fields{{Term{t_phon, {s}}, Term{t_phon, {s + 1}}, (int)vocab_.size() + 2}};
        for (int q = 0; q < feats_; ++q) {
            fields.push_back({Term{t_kind, {s, q}}, Term{t_kind, {s + 1, q}}, 7});
            fields.push_back({Term{t_cat, {s, q}}, Term{t_cat, {s + 1, q}}, std::max(cats_, lic_cats_)});
        }
        fields.push_back({Term{t_hasc, {s}}, Term{t_hasc, {s + 1}}, 2});

        std::vector<Formula> alts;
        std::vector<Formula> eq_prefix;
        for (const auto& fl : fields) {
            std::vector<Formula> less_pairs;
            for (int v = 0; v < fl.width; ++v)
                for (int w = v + 1; w < fl.width; ++w) less_pairs.push_back(f_and({f_eq(fl.a, v), f_eq(fl.b, w)}));
            std::vector<Formula> conj = eq_prefix;
            conj.push_back(f_or(less_pairs));
            alts.push_back(f_and(conj));
            eq_prefix.push_back(cir::f_eq2(fl.a, fl.b));
        }
        p.assert_formula(g, f_implies(f_eq(Term{t_defined, {s + 1}}, 1), f_or(alts)));
    }

    // Optional category-permutation symmetry breaking: scanning grid cells in
    // slot-major order, selectional category c may first occur only after
    // c-1 has occurred.
    if (cfg.break_category_symmetry && cats_ > 1) {
        const std::string gs = "catsym";
        std::vector<std::pair<int, int>> cells;
        for (int s = 0; s < slots_; ++s)
            for (int q = 0; q < feats_; ++q) cells.push_back({s, q});
        auto sel_occ = [&](int s, int q, int c) {
            return f_and({f_or({f_eq(kind(s, q), GSel), f_eq(kind(s, q), GSelL), f_eq(kind(s, q), GSelR),
                                f_eq(kind(s, q), GStee)}),
                          f_eq(cat(s, q), c)});
        };
        for (int c = 1; c < cats_; ++c) {
            for (size_t i = 0; i < cells.size(); ++i) {
                std::vector<Formula> earlier;
                for (size_t j = 0; j < i; ++j) earlier.push_back(sel_occ(cells[j].first, cells[j].second, c - 1));
                p.assert_formula(gs, f_implies(sel_occ(cells[i].first, cells[i].second, c), f_or(earlier)));
            }
        }
    }
}

std::vector<sat::Lit> LexiconModel::pin(const mg::Lexicon& lex, cir::Grounder& g) const {
    if ((int)lex.size() > slots_) throw std::invalid_argument("lexicon exceeds the slot bound");
    std::vector<sat::Lit> out;
    for (int s = 0; s < slots_; ++s) {
        bool defined = s < (int)lex.size();
        out.push_back(g.cell_lit(t_defined, {s}, defined ? 1 : 0));
        if (!defined) continue;
        const auto& item = lex.items[s];
        if (item.feature_count() > feats_)
            throw std::invalid_argument("item exceeds the feature bound: " + item.str());
        int ph = phon_index(item.phon);
        if (ph < 0) throw std::invalid_argument("item phon outside the corpus vocabulary: " + item.str());
        out.push_back(g.cell_lit(t_phon, {s}, ph));
        out.push_back(g.cell_lit(t_hasc, {s}, item.has_complete() ? 1 : 0));
        int q = 0;
        for (const auto& f : item.feats) {
            if (f.kind == mg::FeatureKind::Complete) continue;
            if (f.selectional() && f.cat >= cats_)
                throw std::invalid_argument("category outside the inventory: " + item.str());
            if (f.licensing() && f.cat >= lic_cats_)
                throw std::invalid_argument("licensing category outside the inventory: " + item.str());
            out.push_back(g.cell_lit(t_kind, {s, q}, grid_kind_of(f)));
            out.push_back(g.cell_lit(t_cat, {s, q}, f.cat));
            ++q;
        }
        for (; q < feats_; ++q) {
            out.push_back(g.cell_lit(t_kind, {s, q}, GNone));
            out.push_back(g.cell_lit(t_cat, {s, q}, 0));
        }
    }
    return out;
}

std::vector<cir::Formula> LexiconModel::pin_formulas(const mg::Lexicon& lex) const {
    if ((int)lex.size() > slots_) throw std::invalid_argument("lexicon exceeds the slot bound");
    std::vector<cir::Formula> out;
    for (int s = 0; s < slots_; ++s) {
        bool defined = s < (int)lex.size();
        out.push_back(f_eq(Term{t_defined, {s}}, defined ? 1 : 0));
        if (!defined) continue;
        const auto& item = lex.items[s];
        int ph = phon_index(item.phon);
        if (ph < 0 || item.feature_count() > feats_)
            throw std::invalid_argument("item outside the model bounds: " + item.str());
        out.push_back(f_eq(Term{t_phon, {s}}, ph));
        out.push_back(f_eq(Term{t_hasc, {s}}, item.has_complete() ? 1 : 0));
        int q = 0;
        for (const auto& f : item.feats) {
            if (f.kind == mg::FeatureKind::Complete) continue;
            out.push_back(f_eq(Term{t_kind, {s, q}}, grid_kind_of(f)));
            out.push_back(f_eq(Term{t_cat, {s, q}}, f.cat));
            ++q;
        }
        for (; q < feats_; ++q) out.push_back(f_eq(Term{t_kind, {s, q}}, GNone));
    }
    return out;
}

mg::Lexicon LexiconModel::decode(cir::Grounder& g) const {
    mg::Lexicon lex;
    for (int s = 0; s < slots_; ++s) {
        if (g.read_cell(t_defined, {s}) != 1) break;
        mg::LexicalItem item;
        item.phon = phon_of(g.read_cell(t_phon, {s}));
        for (int q = 0; q < feats_; ++q) {
            int k = g.read_cell(t_kind, {s, q});
            if (k == GNone) break;
            item.feats.push_back(feature_of(k, g.read_cell(t_cat, {s, q})));
        }
        if (g.read_cell(t_hasc, {s}) == 1) item.feats.push_back(mg::Feature::complete());
        lex.insert(std::move(item));
    }
    return lex;
}

}  // namespace enc

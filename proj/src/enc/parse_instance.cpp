#include <algorithm>
#include <stdexcept>

#include "enc/encoder.hpp"

namespace enc {

using cir::CardLit;
using cir::f_and;
using cir::f_bool;
using cir::f_eq;
using cir::f_eq2;
using cir::f_iff;
using cir::f_implies;
using cir::f_ne;
using cir::f_not;
using cir::f_or;
using cir::f_true;
using cir::Formula;
using cir::Term;

namespace {
// implication with a flat antecedent conjunction, kept clause-shaped
Formula imp(std::vector<Formula> ante, Formula cons) {
    std::vector<Formula> lits;
    for (auto& a : ante) lits.push_back(f_not(std::move(a)));
    lits.push_back(std::move(cons));
    return f_or(std::move(lits));
}
}  // namespace

ParseInstance::ParseInstance(cir::Problem& p, LexiconModel& lex, const Config& cfg,
                             const mg::AnnotatedSentence& s, int index,
                             const std::vector<std::string>& disabled_groups)
    : lex_(lex), sent_(s), disabled_(disabled_groups), index_(index) {
    m_ = (int)s.tokens.size();
    F_ = cfg.bounds.max_feats;
    R_ = cfg.bounds.max_phrasal_moves;
    covert_leaf_ = cfg.bounds.covert_budget >= 1 ? m_ : -1;
    leaf_count_ = m_ + (covert_leaf_ >= 0 ? 1 : 0);
    node_count_ = 2 * leaf_count_ - 1;
    if (leaf_count_ + 0 > 30) throw std::invalid_argument("sentence too long for the leaf budget");
    for (const auto& a : s.annotations)
        if (a.a < 0 || a.a >= m_ || a.b < 0 || a.b >= m_)
            throw std::invalid_argument("annotation token outside the sentence");
    build(p, cfg);
}

bool ParseInstance::on(const std::string& group) const {
    for (const auto& d : disabled_)
        if (d == group || d == group + ":" + std::to_string(index_)) return false;
    return true;
}

void ParseInstance::build(cir::Problem& p, const Config& cfg) {
    const int L = leaf_count_, N = node_count_, F = F_, R = R_, m = m_;
    const int root = N - 1;
    const std::string sfx = "@" + std::to_string(index_);
    auto grp = [&](const char* g) { return std::string(g) + sfx; };

    s_node = p.add_sort("node" + sfx, N);
    s_leaf = p.add_sort("leaf" + sfx, L);
    s_fn = p.add_sort("cnt" + sfx, F + 1);
    s_lc = p.add_sort("lc" + sfx, R + 1);
    s_move = p.add_sort("land" + sfx, std::max(R, 1));
    s_int = p.add_sort("ipos" + sfx, m + 1);
    s_pos = lex_.s_fpos;

    const int s_bool = lex_.s_bool;
    const int s_slot = lex_.s_slot;
    const int s_cat = lex_.s_cat;
    const int s_kind = lex_.s_kind;

    t_par = p.add_table("par" + sfx, {s_node}, s_node);
    t_prj = p.add_table("prj" + sfx, {s_node}, s_bool);
    t_head = p.add_table("head" + sfx, {s_node}, s_leaf);
    t_slot = p.add_table("lslot" + sfx, {s_leaf}, s_slot);
    t_fn = p.add_table("fn" + sfx, {s_node}, s_fn);
    t_lc = p.add_table("lc" + sfx, {s_node}, s_lc);
    t_upq = p.add_table("upq" + sfx, {s_node}, s_fn);
    t_sq = p.add_table("sq" + sfx, {s_node}, s_pos);
    t_mp = p.add_table("mp" + sfx, {s_leaf}, s_node);
    t_lkind = p.add_table("lkind" + sfx, {s_leaf, s_pos}, s_kind);
    t_lcat = p.add_table("lcat" + sfx, {s_leaf, s_pos}, s_cat);
    t_lhasc = p.add_table("lhasc" + sfx, {s_leaf}, s_bool);
    t_nkind = p.add_table("nkind" + sfx, {s_node, s_pos}, s_kind);
    t_ncat = p.add_table("ncat" + sfx, {s_node, s_pos}, s_cat);
    t_act = p.add_table("act" + sfx, {s_move}, s_bool);
    t_mov = p.add_table("mov" + sfx, {s_move}, s_leaf);
    t_att = p.add_table("att" + sfx, {s_move}, s_node);
    t_mq = p.add_table("mq" + sfx, {s_move}, s_pos);
    t_hq = p.add_table("hq" + sfx, {s_move}, s_pos);
    t_movcat = p.add_table("movcat" + sfx, {s_move}, s_cat);
    t_fin = p.add_table("fin" + sfx, {s_move}, s_bool);
    t_cs = p.add_table("cs" + sfx, {s_move}, s_node);
    t_hmact = p.add_table("hmact" + sfx, {}, s_bool);
    t_hmnode = p.add_table("hmnode" + sfx, {}, s_node);
    t_rl = p.add_table("rl" + sfx, {}, s_leaf);
    t_dom = p.add_table("dom" + sfx, {s_node, s_node}, s_bool);
    t_apl = p.add_table("apl" + sfx, {s_node}, s_int);
    t_aph = p.add_table("aph" + sfx, {s_node}, s_int);
    t_hl = p.add_table("hl" + sfx, {s_node}, s_int);
    t_hh = p.add_table("hh" + sfx, {s_node}, s_int);
    t_cl = p.add_table("cl" + sfx, {s_node}, s_int);
    t_ch = p.add_table("ch" + sfx, {s_node}, s_int);
    t_sl.clear();
    t_sh.clear();
    for (int t = 0; t <= R; ++t) {
        t_sl.push_back(p.add_table("sl" + std::to_string(t) + sfx, {s_node}, s_int));
        t_sh.push_back(p.add_table("sh" + std::to_string(t) + sfx, {s_node}, s_int));
    }

    auto PAR = [&](int x) { return Term{t_par, {x}}; };
    auto PRJ = [&](int x) { return Term{t_prj, {x}}; };
    auto HEAD = [&](int x) { return Term{t_head, {x}}; };
    auto SLOT = [&](int l) { return Term{t_slot, {l}}; };
    auto FN = [&](int x) { return Term{t_fn, {x}}; };
    auto LC = [&](int x) { return Term{t_lc, {x}}; };
    auto UPQ = [&](int x) { return Term{t_upq, {x}}; };
    auto SQ = [&](int x) { return Term{t_sq, {x}}; };
    auto MP = [&](int l) { return Term{t_mp, {l}}; };
    auto LKIND = [&](int l, int q) { return Term{t_lkind, {l, q}}; };
    auto LCAT = [&](int l, int q) { return Term{t_lcat, {l, q}}; };
    auto NKIND = [&](int x, int q) { return Term{t_nkind, {x, q}}; };
    auto NCAT = [&](int x, int q) { return Term{t_ncat, {x, q}}; };
    auto ACT = [&](int r) { return Term{t_act, {r}}; };
    auto MOV = [&](int r) { return Term{t_mov, {r}}; };
    auto ATT = [&](int r) { return Term{t_att, {r}}; };
    auto MQ = [&](int r) { return Term{t_mq, {r}}; };
    auto HQ = [&](int r) { return Term{t_hq, {r}}; };
    auto MOVCAT = [&](int r) { return Term{t_movcat, {r}}; };
    auto FIN = [&](int r) { return Term{t_fin, {r}}; };
    auto CS = [&](int r) { return Term{t_cs, {r}}; };
    auto DOM = [&](int a, int b) { return Term{t_dom, {a, b}}; };
    auto HMACT = [&]() { return Term{t_hmact, {}}; };
    auto HMNODE = [&]() { return Term{t_hmnode, {}}; };
    auto RL = [&]() { return Term{t_rl, {}}; };
    auto internal = [&](int x) { return x >= L; };

    // ---- tree shape -------------------------------------------------------
    {
        auto g = grp("tree");
        p.assert_formula(g, f_eq(PAR(root), root));
        for (int x = 0; x < N - 1; ++x) {
            for (int v = 0; v < N; ++v)
                if (v <= x || v < L) p.assert_formula(g, f_ne(PAR(x), v));
        }
        p.assert_formula(g, f_eq(PRJ(root), 0));
        // exactly two children per internal node, exactly one projecting
        for (int i = L; i < N; ++i) {
            cir::Cardinality two;
            for (int x = 0; x < N - 1; ++x)
                if (x < i) two.lits.push_back(CardLit::cell(PAR(x), i));
            two.bound = 2;
            two.sense = cir::Sense::Exactly;
            p.assert_card(g, two);
        }
        // aux: child-and-projecting flags
        for (int i = L; i < N; ++i) {
            std::vector<CardLit> lits;
            for (int x = 0; x < i; ++x)
                if (x < N - 1) {
                    int b = p.add_bool("chprj" + sfx + "_" + std::to_string(i) + "_" + std::to_string(x));
                    p.assert_formula(g, f_iff(f_bool(b), f_and({f_eq(PAR(x), i), f_eq(PRJ(x), 1)})));
                    lits.push_back(CardLit::boolean(b));
                }
            cir::Cardinality one;
            one.lits = lits;
            one.bound = 1;
            one.sense = cir::Sense::Exactly;
            p.assert_card(g, one);
        }
        // dominance closure; only a > b with a internal can dominate
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (!internal(a) || a <= b) {
                    p.assert_formula(g, f_eq(DOM(a, b), 0));
                    continue;
                }
                std::vector<Formula> ways;
                ways.push_back(f_eq(PAR(b), a));
                for (int c = L; c < N - 1; ++c)
                    if (c > b && c != a && c < a) ways.push_back(f_and({f_eq(PAR(b), c), f_eq(DOM(a, c), 1)}));
                p.assert_formula(g, f_iff(f_eq(DOM(a, b), 1), f_or(ways)));
            }
    }

    // ---- headedness -------------------------------------------------------
    {
        auto g = grp("head");
        for (int l = 0; l < L; ++l) p.assert_formula(g, f_eq(HEAD(l), l));
        for (int i = L; i < N; ++i)
            for (int x = 0; x < i; ++x)
                if (x < N - 1)
                    for (int l = 0; l < L; ++l)
                        p.assert_formula(g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 1), f_eq(HEAD(x), l)},
                                                f_eq(HEAD(i), l)));
        // maximal projections: a non-projecting node headed by l fixes mp(l)
        for (int v = 0; v < N; ++v)
            for (int l = 0; l < L; ++l)
                p.assert_formula(g, imp({f_eq(HEAD(v), l), f_eq(PRJ(v), 0)}, f_eq(MP(l), v)));
    }

    // ---- lexical choice views ---------------------------------------------
    {
        auto g = grp("lexchoice");
        for (int l = 0; l < L; ++l) {
            bool overt = l < m;
            for (int s = 0; s < lex_.slots(); ++s) {
                std::vector<Formula> conseq;
                if (overt) {
                    int ph = lex_.phon_index(mg::PhoneticForm::overt_form(sent_.tokens[l]));
                    if (ph < 0) throw std::invalid_argument("token outside vocabulary: " + sent_.tokens[l]);
                    p.assert_formula(g, imp({f_eq(SLOT(l), s)}, f_eq(Term{lex_.t_phon, {s}}, ph)));
                } else {
                    int vd = lex_.phon_index(mg::PhoneticForm::covert_decl());
                    int vi = lex_.phon_index(mg::PhoneticForm::covert_intr());
                    p.assert_formula(g, imp({f_eq(SLOT(l), s)},
                                            f_or({f_eq(Term{lex_.t_phon, {s}}, vd), f_eq(Term{lex_.t_phon, {s}}, vi)})));
                }
                p.assert_formula(g, imp({f_eq(SLOT(l), s)}, f_eq(Term{lex_.t_defined, {s}}, 1)));
                p.assert_formula(g, imp({f_eq(SLOT(l), s)}, f_eq2(Term{t_lhasc, {l}}, Term{lex_.t_hasc, {s}})));
                for (int q = 0; q < F; ++q) {
                    p.assert_formula(g, imp({f_eq(SLOT(l), s)}, f_eq2(LKIND(l, q), Term{lex_.t_kind, {s, q}})));
                    p.assert_formula(g, imp({f_eq(SLOT(l), s)}, f_eq2(LCAT(l, q), Term{lex_.t_cat, {s, q}})));
                }
            }
        }
        // node-level views through the head
        for (int x = 0; x < N; ++x)
            for (int l = 0; l < L; ++l)
                for (int q = 0; q < F; ++q) {
                    p.assert_formula(g, imp({f_eq(HEAD(x), l)}, f_eq2(NKIND(x, q), LKIND(l, q))));
                    p.assert_formula(g, imp({f_eq(HEAD(x), l)}, f_eq2(NCAT(x, q), LCAT(l, q))));
                }
    }

    // ---- consumption bookkeeping ------------------------------------------
    {
        auto g = grp("consume");
        for (int l = 0; l < L; ++l) p.assert_formula(g, f_eq(FN(l), 0));
        // upq(x) = fn(x) + lc(x), within the feature budget
        for (int x = 0; x < N; ++x)
            for (int a = 0; a <= F; ++a)
                for (int b = 0; b <= R; ++b) {
                    if (a + b <= F)
                        p.assert_formula(g, imp({f_eq(FN(x), a), f_eq(LC(x), b)}, f_eq(UPQ(x), a + b)));
                    else
                        p.assert_formula(g, f_not(f_and({f_eq(FN(x), a), f_eq(LC(x), b)})));
                }
        // sq(i) = upq(proj child); proj child must not be fully consumed
        for (int i = L; i < N; ++i)
            for (int x = 0; x < i; ++x) {
                if (x >= N - 1) continue;
                p.assert_formula(g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 1)}, f_ne(UPQ(x), F)));
                for (int v = 0; v < F; ++v)
                    p.assert_formula(g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 1), f_eq(UPQ(x), v)}, f_eq(SQ(i), v)));
            }
        // fn(i) = sq(i) + 1
        for (int i = L; i < N; ++i)
            for (int v = 0; v < F; ++v)
                p.assert_formula(g, imp({f_eq(SQ(i), v)}, f_eq(FN(i), v + 1)));
        // the consumed selector is a selector
        for (int i = L; i < N; ++i)
            for (int q = 0; q < F; ++q)
                p.assert_formula(g, imp({f_eq(SQ(i), q)},
                                        f_or({f_eq(NKIND(i, q), GSel), f_eq(NKIND(i, q), GSelL),
                                              f_eq(NKIND(i, q), GSelR)})));
        // the argument side consumes its selectee with a matching category
        for (int i = L; i < N; ++i)
            for (int x = 0; x < i; ++x) {
                if (x >= N - 1) continue;
                for (int q = 0; q < F; ++q) {
                    p.assert_formula(
                        g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 0), f_eq(UPQ(x), q)}, f_eq(NKIND(x, q), GStee)));
                    for (int pq = 0; pq < F; ++pq)
                        for (int c = 0; c < cfg.categories; ++c)
                            p.assert_formula(g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 0), f_eq(UPQ(x), q),
                                                     f_eq(SQ(i), pq), f_eq(NCAT(i, pq), c)},
                                                    f_eq(NCAT(x, q), c)));
                }
                p.assert_formula(g, imp({f_eq(PAR(x), i), f_eq(PRJ(x), 0)}, f_ne(UPQ(x), F)));
            }
        // leaf consumption state pins (leaves consume nothing below themselves)
        for (int l = 0; l < L; ++l) p.assert_formula(g, f_eq(SQ(l), 0));
    }

    // ---- landing counts ----------------------------------------------------
    {
        auto g = grp("move");
        // act prefix and inactive pinning
        for (int r = 0; r + 1 < R; ++r)
            p.assert_formula(g, f_implies(f_eq(ACT(r + 1), 1), f_eq(ACT(r), 1)));
        for (int r = 0; r < R; ++r) {
            p.assert_formula(g, imp({f_eq(ACT(r), 0)}, f_and({f_eq(MOV(r), 0), f_eq(ATT(r), 0), f_eq(MQ(r), 0),
                                                              f_eq(HQ(r), 0), f_eq(MOVCAT(r), 0), f_eq(FIN(r), 0),
                                                              f_eq(CS(r), 0)})));
        }
        if (R == 0) {
            for (int x = 0; x < N; ++x) p.assert_formula(g, f_eq(LC(x), 0));
        }
        // lc(x) counts active landings attached atop x
        std::vector<std::vector<int>> att_ind(R, std::vector<int>(N, -1));
        for (int r = 0; r < R; ++r)
            for (int x = 0; x < N; ++x) {
                int b = p.add_bool("attx" + sfx + "_" + std::to_string(r) + "_" + std::to_string(x));
                att_ind[r][x] = b;
                p.assert_formula(g, f_iff(f_bool(b), f_and({f_eq(ACT(r), 1), f_eq(ATT(r), x)})));
            }
        for (int x = 0; x < N && R > 0; ++x) {
            for (int mask = 0; mask < (1 << R); ++mask) {
                std::vector<Formula> ante;
                int count = 0;
                for (int r = 0; r < R; ++r) {
                    bool set = mask & (1 << r);
                    count += set;
                    ante.push_back(set ? f_bool(att_ind[r][x]) : f_not(f_bool(att_ind[r][x])));
                }
                p.assert_formula(g, imp(std::move(ante), f_eq(LC(x), count)));
            }
        }
        // the mover comes from strictly inside the landing site
        for (int r = 0; r < R; ++r)
            for (int l = 0; l < L; ++l)
                for (int v = 0; v < N; ++v)
                    for (int x = 0; x < N; ++x)
                        p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MP(l), v), f_eq(ATT(r), x)},
                                                f_eq(DOM(x, v), 1)));

        // hq(r) = fn(att) + number of earlier landings on the same node
        for (int r = 0; r < R; ++r)
            for (int x = 0; x < N; ++x)
                for (int mask = 0; mask < (1 << r); ++mask) {
                    std::vector<Formula> ante{f_eq(ACT(r), 1), f_eq(ATT(r), x)};
                    int before = 0;
                    for (int r2 = 0; r2 < r; ++r2) {
                        bool set = mask & (1 << r2);
                        before += set;
                        ante.push_back(set ? f_bool(att_ind[r2][x]) : f_not(f_bool(att_ind[r2][x])));
                    }
                    for (int v = 0; v <= F; ++v) {
                        auto a2 = ante;
                        a2.push_back(f_eq(FN(x), v));
                        if (v + before < F)
                            p.assert_formula(g, imp(std::move(a2), f_eq(HQ(r), v + before)));
                        else
                            p.assert_formula(g, f_not(f_and(std::move(a2))));
                    }
                }

        // the landing consumes a licensor of the host and a licensee of the mover
        for (int r = 0; r < R; ++r) {
            for (int x = 0; x < N; ++x)
                for (int q = 0; q < F; ++q)
                    p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(ATT(r), x), f_eq(HQ(r), q)},
                                            f_eq(NKIND(x, q), GLsor)));
            for (int l = 0; l < L; ++l)
                for (int q = 0; q < F; ++q) {
                    p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q)},
                                            f_eq(LKIND(l, q), GLsee)));
                    p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q)},
                                            f_eq2(MOVCAT(r), LCAT(l, q))));
                }
            for (int x = 0; x < N; ++x)
                for (int q = 0; q < F; ++q)
                    p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(ATT(r), x), f_eq(HQ(r), q)},
                                            f_eq2(NCAT(x, q), MOVCAT(r))));
            // finality: the consumed licensee is the item's last feature
            for (int l = 0; l < L; ++l)
                for (int q = 0; q < F; ++q) {
                    Formula is_last = q + 1 < F ? f_eq(LKIND(l, q + 1), GNone) : cir::f_true();
                    p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q)},
                                            f_iff(f_eq(FIN(r), 1), is_last)));
                }
        }

        // every licensee of every used leaf is consumed by exactly one landing
        for (int l = 0; l < L; ++l)
            for (int q = 0; q < F; ++q) {
                std::vector<Formula> consumes;
                std::vector<int> aux;
                for (int r = 0; r < R; ++r) {
                    int b = p.add_bool("cons" + sfx + "_" + std::to_string(l) + "_" + std::to_string(q) + "_" +
                                       std::to_string(r));
                    aux.push_back(b);
                    p.assert_formula(g, f_iff(f_bool(b), f_and({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q)})));
                    consumes.push_back(f_bool(b));
                }
                p.assert_formula(g, f_implies(f_eq(LKIND(l, q), GLsee), f_or(consumes)));
                for (int r = 0; r < R; ++r)
                    p.assert_formula(g, f_implies(f_bool(aux[r]), f_eq(LKIND(l, q), GLsee)));
                for (size_t i = 0; i < aux.size(); ++i)
                    for (size_t j = i + 1; j < aux.size(); ++j)
                        p.assert_formula(g, f_not(f_and({f_bool(aux[(int)i]), f_bool(aux[(int)j])})));
            }

        // chains ascend and consume licensees in order
        for (int r = 0; r < R; ++r)
            for (int r2 = r + 1; r2 < R; ++r2)
                for (int l = 0; l < L; ++l) {
                    for (int q = 0; q < F; ++q)
                        for (int q2 = 0; q2 <= q; ++q2)
                            p.assert_formula(g, f_not(f_and({f_eq(ACT(r2), 1), f_eq(MOV(r), l), f_eq(MOV(r2), l),
                                                             f_eq(MQ(r), q), f_eq(MQ(r2), q2)})));
                    for (int x = 0; x < N; ++x)
                        for (int x2 = 0; x2 < N; ++x2)
                            if (x != x2)
                                p.assert_formula(g, imp({f_eq(ACT(r2), 1), f_eq(MOV(r), l), f_eq(MOV(r2), l),
                                                         f_eq(ATT(r), x), f_eq(ATT(r2), x2)},
                                                        f_eq(DOM(x2, x), 1)));
                }
    }

    // ---- head movement -----------------------------------------------------
    {
        auto g = grp("headmove");
        // hmAt(i): the selector consumed at i triggers head movement
        std::vector<int> hm_at(N, -1);
        for (int i = L; i < N; ++i) {
            int b = p.add_bool("hmat" + sfx + "_" + std::to_string(i));
            hm_at[i] = b;
            std::vector<Formula> ways;
            for (int q = 0; q < F; ++q)
                ways.push_back(f_and({f_eq(SQ(i), q),
                                      f_or({f_eq(NKIND(i, q), GSelL), f_eq(NKIND(i, q), GSelR)})}));
            p.assert_formula(g, f_iff(f_bool(b), f_or(ways)));
            p.assert_formula(g, f_implies(f_bool(b), f_and({f_eq(HMACT(), 1), f_eq(HMNODE(), i)})));
            p.assert_formula(g, imp({f_eq(HMNODE(), i), f_eq(HMACT(), 1)}, f_bool(b)));
        }
        std::vector<Formula> any;
        for (int i = L; i < N; ++i) any.push_back(f_bool(hm_at[i]));
        p.assert_formula(g, f_implies(f_eq(HMACT(), 1), f_or(any)));
        p.assert_formula(g, imp({f_eq(HMACT(), 0)}, f_and({f_eq(HMNODE(), 0), f_eq(RL(), 0)})));
        if (cfg.bounds.max_head_moves < 1) p.assert_formula(g, f_eq(HMACT(), 0));
        // the raised head is the complement's head
        for (int i = L; i < N; ++i)
            for (int x = 0; x < i; ++x) {
                if (x >= N - 1) continue;
                for (int l = 0; l < L; ++l)
                    p.assert_formula(g, imp({f_eq(HMACT(), 1), f_eq(HMNODE(), i), f_eq(PAR(x), i), f_eq(PRJ(x), 0),
                                             f_eq(HEAD(x), l)},
                                            f_eq(RL(), l)));
            }
    }

    // ---- shortest move ------------------------------------------------------
    if (on("smc")) {
        auto g = grp("smc");
        // chain starts: first landing starts at the parent of the mover's
        // base phrase, later landings at the previous landing site
        for (int r = 0; r < R; ++r)
            for (int l = 0; l < L; ++l)
                for (int q = 0; q < F; ++q) {
                    Formula first = q > 0 ? f_eq(LKIND(l, q - 1), GStee) : cir::f_true();
                    for (int v = 0; v < N - 1; ++v)
                        for (int i = L; i < N; ++i)
                            p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q), first,
                                                     f_eq(MP(l), v), f_eq(PAR(v), i)},
                                                    f_eq(CS(r), i)));
                    if (q > 0) {
                        Formula later = f_eq(LKIND(l, q - 1), GLsee);
                        // the previous landing of the same mover
                        for (int r2 = 0; r2 < r; ++r2) {
                            std::vector<Formula> is_prev{f_eq(ACT(r), 1), f_eq(MOV(r), l), f_eq(MQ(r), q), later,
                                                         f_eq(MOV(r2), l)};
                            for (int r3 = r2 + 1; r3 < r; ++r3) is_prev.push_back(f_ne(MOV(r3), l));
                            for (int x = 0; x < N; ++x) {
                                auto a2 = is_prev;
                                a2.push_back(f_eq(ATT(r2), x));
                                p.assert_formula(g, imp(std::move(a2), f_eq(CS(r), x)));
                            }
                        }
                    }
                }
        // pending(r, w): the mover of r sits in the store of every expression
        // from its chain start up to its landing site
        std::vector<std::vector<int>> pend(R, std::vector<int>(N, -1));
        auto domeq = [&](int a, Term b) {
            std::vector<Formula> ways;
            for (int u = 0; u < N; ++u) {
                if (u == a)
                    ways.push_back(f_eq(b, u));
                else
                    ways.push_back(f_and({f_eq(b, u), f_eq(DOM(a, u), 1)}));
            }
            return f_or(ways);
        };
        auto domeq_rev = [&](Term a, int w) {
            std::vector<Formula> ways;
            for (int u = 0; u < N; ++u) {
                if (u == w)
                    ways.push_back(f_eq(a, u));
                else if (u > w)
                    ways.push_back(f_and({f_eq(a, u), f_eq(DOM(u, w), 1)}));
            }
            return f_or(ways);
        };
        for (int r = 0; r < R; ++r)
            for (int w = 0; w < N; ++w) {
                int b = p.add_bool("pend" + sfx + "_" + std::to_string(r) + "_" + std::to_string(w));
                pend[r][w] = b;
                p.assert_formula(
                    g, f_iff(f_bool(b), f_and({f_eq(ACT(r), 1), domeq(w, CS(r)), domeq_rev(ATT(r), w)})));
            }
        // distinct movers pending at the same point must differ in category
        for (int r = 0; r < R; ++r)
            for (int r2 = r + 1; r2 < R; ++r2) {
                int beq = p.add_bool("moveq" + sfx + "_" + std::to_string(r) + "_" + std::to_string(r2));
                p.assert_formula(g, f_iff(f_bool(beq), f_eq2(MOV(r), MOV(r2))));
                for (int w = 0; w < N; ++w)
                    for (int c = 0; c < cfg.lic_categories; ++c)
                        p.assert_formula(g, f_or({f_not(f_bool(pend[r][w])), f_not(f_bool(pend[r2][w])),
                                                  f_ne(MOVCAT(r), c), f_ne(MOVCAT(r2), c), f_bool(beq)}));
            }
    }

    // ---- completion ---------------------------------------------------------
    {
        auto g = grp("complete");
        for (int l = 0; l < L; ++l) {
            // root head: fully consumed and Complete-final
            for (int v = 0; v <= F; ++v) {
                std::vector<Formula> ante{f_eq(HEAD(root), l), f_eq(UPQ(root), v)};
                std::vector<Formula> cons;
                if (v < F) cons.push_back(f_eq(LKIND(l, v), GNone));
                if (v > 0) cons.push_back(f_ne(LKIND(l, v - 1), GNone));
                if (v == 0 && F > 0) cons.push_back(f_eq(LKIND(l, 0), GNone));
                p.assert_formula(g, imp(std::move(ante), f_and(std::move(cons))));
            }
            p.assert_formula(g, imp({f_eq(HEAD(root), l)}, f_eq(Term{t_lhasc, {l}}, 1)));
        }
    }

    // ---- sentence typing ----------------------------------------------------
    if (covert_leaf_ >= 0 && on("typing")) {
        auto g = grp("typing");
        int want = lex_.phon_index(sent_.type == mg::SentenceType::Decl ? mg::PhoneticForm::covert_decl()
                                                                        : mg::PhoneticForm::covert_intr());
        for (int s = 0; s < lex_.slots(); ++s)
            p.assert_formula(g, imp({f_eq(SLOT(covert_leaf_), s)}, f_eq(Term{lex_.t_phon, {s}}, want)));
    }
    if (covert_leaf_ < 0) {
        // no covert leaf: the root head must still be Complete-final, which
        // only covert items carry; the state is unsatisfiable by design
    }

    // ---- linearization ------------------------------------------------------
    if (on("linear")) {
        auto g = grp("linear");
        auto SL = [&](int t, int x) { return Term{t_sl[t], {x}}; };
        auto SH = [&](int t, int x) { return Term{t_sh[t], {x}}; };
        auto HL = [&](int x) { return Term{t_hl, {x}}; };
        auto HH = [&](int x) { return Term{t_hh, {x}}; };
        auto CL = [&](int x) { return Term{t_cl, {x}}; };
        auto CH = [&](int x) { return Term{t_ch, {x}}; };
        auto APL = [&](int x) { return Term{t_apl, {x}}; };
        auto APH = [&](int x) { return Term{t_aph, {x}}; };

        // leaves: spec and comp parts empty; head part the token interval
        for (int l = 0; l < L; ++l) {
            p.assert_formula(g, f_eq2(SL(0, l), SH(0, l)));
            p.assert_formula(g, f_eq2(CL(l), CH(l)));
            if (l < m) {
                p.assert_formula(g, f_eq(HL(l), l));
                p.assert_formula(g, f_eq(HH(l), l + 1));
            } else {
                p.assert_formula(g, f_eq2(HL(l), HH(l)));
            }
            p.assert_formula(g, f_eq(APL(l), 0));
            p.assert_formula(g, f_eq(APH(l), 0));
        }

        // mover-phrase and extracted-head flags per node
        std::vector<int> b_mover(N, -1), b_hex(N, -1);
        for (int x = 0; x < N; ++x) {
            b_mover[x] = p.add_bool("ismov" + sfx + "_" + std::to_string(x));
            // a licensee right after the consumption point makes x a mover
            std::vector<Formula> lic;
            for (int q = 0; q + 1 < F; ++q)
                lic.push_back(f_and({f_eq(UPQ(x), q), f_eq(NKIND(x, q + 1), GLsee)}));
            p.assert_formula(g, f_iff(f_bool(b_mover[x]), f_and({f_eq(PRJ(x), 0), f_or(lic)})));
            b_hex[x] = p.add_bool("hex" + sfx + "_" + std::to_string(x));
            if (x == N - 1) {
                p.assert_formula(g, f_not(f_bool(b_hex[x])));
            } else {
                std::vector<Formula> ways;
                for (int i = L; i < N; ++i)
                    if (i > x)
                        ways.push_back(f_and({f_eq(HMACT(), 1), f_eq(HMNODE(), i), f_eq(PAR(x), i), f_eq(PRJ(x), 0)}));
                p.assert_formula(g, f_iff(f_bool(b_hex[x]), f_or(ways)));
            }
        }

        // argument part of each internal node
        for (int i = L; i < N; ++i)
            for (int x = 0; x < i; ++x) {
                if (x >= N - 1) continue;
                std::vector<Formula> arg{f_eq(PAR(x), i), f_eq(PRJ(x), 0)};
                // mover: contributes nothing at the base
                {
                    auto a2 = arg;
                    a2.push_back(f_bool(b_mover[x]));
                    p.assert_formula(g, imp(std::move(a2), f_eq2(APL(i), APH(i))));
                }
                // consolidated: spec..head..comp, or spec..comp when the head
                // was raised away
                {
                    auto a2 = arg;
                    a2.push_back(f_not(f_bool(b_mover[x])));
                    a2.push_back(f_not(f_bool(b_hex[x])));
                    p.assert_formula(g, imp(a2, f_eq2(SH(R, x), HL(x))));
                    p.assert_formula(g, imp(a2, f_eq2(HH(x), CL(x))));
                    p.assert_formula(g, imp(a2, f_eq2(APL(i), SL(R, x))));
                    p.assert_formula(g, imp(std::move(a2), f_eq2(APH(i), CH(x))));
                }
                {
                    auto a2 = arg;
                    a2.push_back(f_not(f_bool(b_mover[x])));
                    a2.push_back(f_bool(b_hex[x]));
                    p.assert_formula(g, imp(a2, f_eq2(SH(R, x), CL(x))));
                    p.assert_formula(g, imp(a2, f_eq2(APL(i), SL(R, x))));
                    p.assert_formula(g, imp(std::move(a2), f_eq2(APH(i), CH(x))));
                }
            }

        // core composition at internal nodes
        for (int i = L; i < N; ++i)
            for (int px = 0; px < i; ++px) {
                if (px >= N - 1) continue;
                std::vector<Formula> proj{f_eq(PAR(px), i), f_eq(PRJ(px), 1)};
                // head part, with or without a raised head
                {
                    auto a2 = proj;
                    a2.push_back(f_not(f_and({f_eq(HMACT(), 1), f_eq(HMNODE(), i)})));
                    p.assert_formula(g, imp(a2, f_eq2(HL(i), HL(px))));
                    p.assert_formula(g, imp(std::move(a2), f_eq2(HH(i), HH(px))));
                }
                for (int ax = 0; ax < i; ++ax) {
                    if (ax >= N - 1 || ax == px) continue;
                    std::vector<Formula> both{f_eq(PAR(px), i), f_eq(PRJ(px), 1), f_eq(PAR(ax), i), f_eq(PRJ(ax), 0),
                                              f_eq(HMACT(), 1), f_eq(HMNODE(), i)};
                    for (int q = 0; q < F; ++q) {
                        auto left = both;
                        left.push_back(f_eq(SQ(i), q));
                        left.push_back(f_eq(NKIND(i, q), GSelL));
                        p.assert_formula(g, imp(left, f_and({f_eq2(HL(i), HL(ax)), f_eq2(HH(ax), HL(px)),
                                                             f_eq2(HH(i), HH(px))})));
                        auto right = both;
                        right.push_back(f_eq(SQ(i), q));
                        right.push_back(f_eq(NKIND(i, q), GSelR));
                        p.assert_formula(g, imp(right, f_and({f_eq2(HL(i), HL(px)), f_eq2(HH(px), HL(ax)),
                                                              f_eq2(HH(i), HH(ax))})));
                    }
                }
                // spec/comp per complement-vs-specifier merge
                {
                    auto a2 = proj;
                    a2.push_back(f_eq(SQ(i), 0));
                    p.assert_formula(g, imp(a2, f_and({f_eq2(SL(0, i), SL(R, px)), f_eq2(SH(0, i), SH(R, px)),
                                                       f_eq2(CL(i), APL(i)), f_eq2(CH(i), APH(i))})));
                }
                {
                    auto a2 = proj;
                    a2.push_back(f_ne(SQ(i), 0));
                    p.assert_formula(g, imp(a2, f_and({f_eq2(SL(0, i), APL(i)), f_eq2(APH(i), SL(R, px)),
                                                       f_eq2(SH(0, i), SH(R, px)), f_eq2(CL(i), CL(px)),
                                                       f_eq2(CH(i), CH(px))})));
                }
            }

        // landing part intervals and spec-part stage threading
        int t_pl = p.add_table("pl" + sfx, {s_move}, s_int);
        int t_ph = p.add_table("ph" + sfx, {s_move}, s_int);
        auto PL = [&](int r) { return Term{t_pl, {r}}; };
        auto PH = [&](int r) { return Term{t_ph, {r}}; };
        for (int t = 1; t <= R; ++t) {
            int r = t - 1;
            for (int x = 0; x < N; ++x) {
                std::vector<Formula> here{f_eq(ACT(r), 1), f_eq(ATT(r), x)};
                {
                    auto a2 = here;
                    p.assert_formula(g, imp(a2, f_eq2(PH(r), SL(t - 1, x))));
                }
                {
                    auto a2 = here;
                    p.assert_formula(g, imp(a2, f_eq2(SL(t, x), PL(r))));
                }
                {
                    auto a2 = here;
                    p.assert_formula(g, imp(a2, f_eq2(SH(t, x), SH(t - 1, x))));
                }
                // elsewhere: copy
                std::vector<Formula> off{f_eq(ACT(r), 0)};
                p.assert_formula(g, imp({f_eq(ACT(r), 0)}, f_and({f_eq2(SL(t, x), SL(t - 1, x)),
                                                                  f_eq2(SH(t, x), SH(t - 1, x))})));
                for (int y = 0; y < N; ++y)
                    if (y != x)
                        p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(ATT(r), y)},
                                                f_and({f_eq2(SL(t, x), SL(t - 1, x)),
                                                       f_eq2(SH(t, x), SH(t - 1, x))})));
            }
            // non-final landings contribute nothing
            p.assert_formula(g, imp({f_eq(ACT(r), 1), f_eq(FIN(r), 0)}, f_eq2(PL(r), PH(r))));
            p.assert_formula(g, imp({f_eq(ACT(r), 0)}, f_eq2(PL(r), PH(r))));
            // final landings consolidate the mover's phrase
            for (int l = 0; l < L; ++l)
                for (int v = 0; v < N; ++v) {
                    std::vector<Formula> fin{f_eq(ACT(r), 1), f_eq(FIN(r), 1), f_eq(MOV(r), l), f_eq(MP(l), v)};
                    {
                        auto a2 = fin;
                        a2.push_back(f_not(f_bool(b_hex[v])));
                        p.assert_formula(g, imp(a2, f_and({f_eq2(SH(R, v), HL(v)), f_eq2(HH(v), CL(v)),
                                                           f_eq2(PL(r), SL(R, v)), f_eq2(PH(r), CH(v))})));
                    }
                    {
                        auto a2 = fin;
                        a2.push_back(f_bool(b_hex[v]));
                        p.assert_formula(g, imp(a2, f_and({f_eq2(SH(R, v), CL(v)), f_eq2(PL(r), SL(R, v)),
                                                           f_eq2(PH(r), CH(v))})));
                    }
                }
        }

        // root consolidation spans the whole sentence
        p.assert_formula(g, f_eq(Term{t_sl[R], {root}}, 0));
        p.assert_formula(g, f_eq2(Term{t_sh[R], {root}}, HL(root)));
        p.assert_formula(g, f_eq2(HH(root), CL(root)));
        p.assert_formula(g, f_eq(CH(root), m));
    }

    // ---- relation axioms ----------------------------------------------------
    if (on("relations")) {
        auto g = grp("relations");
        for (const auto& ann : sent_.annotations) {
            std::vector<Formula> ways;
            for (int i = L; i < N; ++i)
                for (int x = 0; x < i; ++x) {
                    if (x >= N - 1) continue;
                    for (auto [a, b] : {std::pair{ann.a, ann.b}, std::pair{ann.b, ann.a}})
                        ways.push_back(f_and({f_eq(PAR(x), i), f_eq(PRJ(x), 0), f_eq(HEAD(x), a), f_eq(HEAD(i), b)}));
                }
            for (int r = 0; r < R; ++r)
                for (int x = 0; x < N; ++x)
                    for (auto [a, b] : {std::pair{ann.a, ann.b}, std::pair{ann.b, ann.a}})
                        ways.push_back(f_and({f_eq(ACT(r), 1), f_eq(MOV(r), a), f_eq(ATT(r), x), f_eq(HEAD(x), b)}));
            p.assert_formula(g, f_or(std::move(ways)));
        }
    }
}

mg::DerivationTree ParseInstance::decode(cir::Grounder& g) const {
    const int L = leaf_count_, N = node_count_;
    mg::DerivationTree d;
    d.nodes.resize(N);
    mg::Lexicon lex = lex_.decode(g);
    for (int l = 0; l < L; ++l) {
        int s = g.read_cell(t_slot, {l});
        mg::LexicalItem item;
        item.phon = lex_.phon_of(g.read_cell(lex_.t_phon, {s}));
        for (int q = 0; q < F_; ++q) {
            int k = g.read_cell(lex_.t_kind, {s, q});
            if (k == GNone) break;
            item.feats.push_back(feature_of(k, g.read_cell(lex_.t_cat, {s, q})));
        }
        if (g.read_cell(lex_.t_hasc, {s}) == 1) item.feats.push_back(mg::Feature::complete());
        d.nodes[l].item = std::move(item);
        d.nodes[l].token = l < m_ ? l : -1;
    }
    for (int x = 0; x < N - 1; ++x) {
        int par = g.read_cell(t_par, {x});
        bool prj = g.read_cell(t_prj, {x}) == 1;
        if (prj)
            d.nodes[par].proj = x;
        else
            d.nodes[par].arg = x;
    }
    for (int i = L; i < N; ++i) d.nodes[i].complement = g.read_cell(t_sq, {i}) == 0;
    if (g.read_cell(t_hmact, {}) == 1) {
        mg::HeadMoveRec hm;
        hm.node = g.read_cell(t_hmnode, {});
        hm.raised_leaf = g.read_cell(t_rl, {});
        int q = g.read_cell(t_sq, {hm.node});
        int k = g.read_cell(t_nkind, {hm.node, q});
        hm.dir = k == GSelL ? mg::HeadMove::Left : mg::HeadMove::Right;
        d.head_move = hm;
    }
    for (int r = 0; r < R_; ++r) {
        if (g.read_cell(t_act, {r}) != 1) break;
        mg::MoveLink link;
        link.attach = g.read_cell(t_att, {r});
        int mover_leaf = g.read_cell(t_mov, {r});
        link.mover = g.read_cell(t_mp, {mover_leaf});
        link.licensee_pos = g.read_cell(t_mq, {r});
        d.moves.push_back(link);
    }
    return d;
}

std::vector<cir::CardLit> ParseInstance::feature_lits() const {
    std::vector<cir::CardLit> out;
    for (int l = 0; l < leaf_count_; ++l)
        for (int q = 0; q < F_; ++q) out.push_back(cir::CardLit::cell(Term{t_lkind, {l, q}}, GNone, false));
    return out;
}

}  // namespace enc

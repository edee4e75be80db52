#include "mg/parser.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace mg {

std::optional<Span> span_concat(Span a, Span b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.hi != b.lo) return std::nullopt;
    return Span{a.lo, b.hi};
}

namespace {

struct Chart;

struct Prod {
    enum class Op : uint8_t { Lex, Merge, Move };
    Op op = Op::Lex;
    int a = -1, b = -1;      // premise key ids
    int16_t item = -1;       // Lex: lexicon item
    int8_t token = -1;       // Lex: surface position, -1 covert
    bool head_moved = false; // Merge
    ChainItem mover_pre;     // Move: the mover before this landing
    bool mover_final = false;
};

struct KeyHash {
    size_t operator()(const Expression& e) const {
        auto mix = [](size_t h, size_t v) { return h * 1000003u ^ v; };
        auto chain = [&](size_t h, const ChainItem& c) {
            h = mix(h, (size_t)(uint16_t)c.item);
            h = mix(h, (size_t)(uint8_t)c.pos * 2 + c.headless);
            for (Span s : {c.spec, c.head, c.comp}) h = mix(h, (size_t)(uint8_t)(s.lo + 1) * 64 + (uint8_t)(s.hi + 1));
            return h;
        };
        size_t h = chain(14695981039346656037ull, e.main);
        for (const auto& m : e.movers) h = chain(h, m);
        h = mix(h, (size_t)e.moves_used * 16 + e.head_moves_used * 4 + e.coverts_used);
        return h;
    }
};

struct Chart {
    const Lexicon& lex;
    const std::vector<std::string>& tokens;
    SentenceType type;
    Bounds bounds;

    std::vector<Expression> keys;
    std::vector<std::vector<Prod>> prods;
    std::unordered_map<Expression, int, KeyHash> index;
    std::deque<int> agenda;
    std::vector<int> done;

    Chart(const Lexicon& l, const std::vector<std::string>& t, SentenceType ty, const Bounds& b)
        : lex(l), tokens(t), type(ty), bounds(b) {}

    const Feature* next_feat(const ChainItem& c) const {
        const auto& feats = lex.items[c.item].feats;
        if (c.pos >= (int)feats.size()) return nullptr;
        return &feats[c.pos];
    }

    int intern(const Expression& e, const Prod& p) {
        auto [it, inserted] = index.try_emplace(e, (int)keys.size());
        if (inserted) {
            keys.push_back(e);
            prods.emplace_back();
            agenda.push_back(it->second);
        }
        prods[it->second].push_back(p);
        return it->second;
    }

    // Insert a mover keeping the store sorted by next-licensee category;
    // fails on a shortest-move clash.
    static bool insert_mover(std::vector<ChainItem>& movers, const ChainItem& m, const Lexicon& lex) {
        int cat = lex.items[m.item].feats[m.pos].cat;
        auto at = std::find_if(movers.begin(), movers.end(), [&](const ChainItem& o) {
            return lex.items[o.item].feats[o.pos].cat >= cat;
        });
        if (at != movers.end() && lex.items[at->item].feats[at->pos].cat == cat) return false;
        movers.insert(at, m);
        return true;
    }

    void axioms() {
        for (size_t li = 0; li < lex.items.size(); ++li) {
            const auto& item = lex.items[li];
            if (item.feature_count() > bounds.max_feats) continue;
            if (item.phon.overt()) {
                for (size_t i = 0; i < tokens.size(); ++i) {
                    if (item.phon.token != tokens[i]) continue;
                    Expression e;
                    e.main = {(int16_t)li, 0, false, Span{}, Span{(int8_t)i, (int8_t)(i + 1)}, Span{}};
                    Prod p;
                    p.item = (int16_t)li;
                    p.token = (int8_t)i;
                    intern(e, p);
                }
            } else {
                bool matches = (item.phon.kind == PhoneticForm::Kind::CovertDecl) == (type == SentenceType::Decl);
                if (!matches || bounds.covert_budget < 1) continue;
                Expression e;
                e.main = {(int16_t)li, 0, false, Span{}, Span{}, Span{}};
                e.coverts_used = 1;
                Prod p;
                p.item = (int16_t)li;
                p.token = -1;
                intern(e, p);
            }
        }
    }

    void try_merge(int ia, int ib) {
        const Expression a = keys[ia];
        const Expression b = keys[ib];
        const Feature* fa = next_feat(a.main);
        const Feature* fb = next_feat(b.main);
        if (!fa || !fb || !check_external_merge(*fa, *fb)) return;
        bool hm = fa->head_move != HeadMove::None;
        if (hm && a.main.pos != 0) return;

        Expression r;
        r.moves_used = a.moves_used + b.moves_used;
        r.head_moves_used = a.head_moves_used + b.head_moves_used + (hm ? 1 : 0);
        r.coverts_used = a.coverts_used + b.coverts_used;
        if (r.moves_used > bounds.max_phrasal_moves) return;
        if (r.head_moves_used > bounds.max_head_moves) return;
        if (r.coverts_used > bounds.covert_budget) return;

        r.movers = a.movers;
        for (const auto& m : b.movers)
            if (!insert_mover(r.movers, m, lex)) return;

        const auto& bitem = lex.items[b.main.item];
        bool b_moves = b.main.pos + 1 < (int)bitem.feats.size() &&
                       bitem.feats[b.main.pos + 1].kind == FeatureKind::Licensee;

        ChainItem main = a.main;
        main.pos++;
        Span arg;  // the argument's contribution to the derived string
        if (hm) {
            auto remnant = span_concat(b.main.spec, b.main.comp);
            if (!remnant) return;
            auto head = fa->head_move == HeadMove::Left ? span_concat(b.main.head, a.main.head)
                                                        : span_concat(a.main.head, b.main.head);
            if (!head) return;
            main.head = *head;
            arg = *remnant;
        } else {
            auto flatsh = span_concat(b.main.spec, b.main.head);
            if (!flatsh) return;
            auto flat = span_concat(*flatsh, b.main.comp);
            if (!flat) return;
            arg = *flat;
        }
        if (b_moves) {
            ChainItem m = b.main;
            m.pos++;
            if (hm) {
                m.head = Span{};
                m.headless = true;
            }
            if (!insert_mover(r.movers, m, lex)) return;
        } else {
            if (a.main.pos == 0) {
                auto c = span_concat(main.comp, arg);
                if (!c) return;
                main.comp = *c;
            } else {
                auto s = span_concat(arg, main.spec);
                if (!s) return;
                main.spec = *s;
            }
        }
        r.main = main;
        Prod p;
        p.op = Prod::Op::Merge;
        p.a = ia;
        p.b = ib;
        p.head_moved = hm;
        intern(r, p);
    }

    void try_move(int ia) {
        const Expression a = keys[ia];
        const Feature* fa = next_feat(a.main);
        if (!fa || fa->kind != FeatureKind::Licensor) return;
        for (size_t mi = 0; mi < a.movers.size(); ++mi) {
            const ChainItem m = a.movers[mi];
            const Feature& fm = lex.items[m.item].feats[m.pos];
            if (!check_internal_merge(*fa, fm)) continue;
            Expression r = a;
            r.moves_used++;
            if (r.moves_used > bounds.max_phrasal_moves) return;
            r.main.pos++;
            r.movers.erase(r.movers.begin() + mi);
            const auto& mitem = lex.items[m.item];
            bool final = m.pos + 1 >= (int)mitem.feats.size();
            if (!final) {
                ChainItem m2 = m;
                m2.pos++;
                if (!insert_mover(r.movers, m2, lex)) continue;
            } else {
                auto flatsh = m.headless ? std::optional<Span>(m.spec) : span_concat(m.spec, m.head);
                if (!flatsh) continue;
                auto flat = span_concat(*flatsh, m.comp);
                if (!flat) continue;
                auto s = span_concat(*flat, r.main.spec);
                if (!s) continue;
                r.main.spec = *s;
            }
            Prod p;
            p.op = Prod::Op::Move;
            p.a = ia;
            p.mover_pre = m;
            p.mover_final = final;
            intern(r, p);
        }
    }

    bool complete(const Expression& e) const {
        if (!e.movers.empty()) return false;
        const auto& item = lex.items[e.main.item];
        if (e.main.pos + 1 != (int)item.feats.size()) return false;
        if (item.feats[e.main.pos].kind != FeatureKind::Complete) return false;
        if (e.coverts_used != 1) return false;
        auto flatsh = e.main.headless ? std::optional<Span>(e.main.spec) : span_concat(e.main.spec, e.main.head);
        if (!flatsh) return false;
        auto flat = span_concat(*flatsh, e.main.comp);
        if (!flat) return false;
        return flat->lo == 0 && flat->hi == (int)tokens.size();
    }

    void saturate() {
        axioms();
        while (!agenda.empty()) {
            int k = agenda.front();
            agenda.pop_front();
            try_move(k);
            try_merge(k, k);
            for (int d : done) {
                try_merge(k, d);
                try_merge(d, k);
            }
            done.push_back(k);
        }
    }
};

// A partially assembled derivation for one chart key.
struct Frag {
    DerivationTree tree;
    int top = -1;
    std::vector<std::pair<ChainItem, int>> mover_mp;  // mover identity -> base phrase node

    int find_mover(const ChainItem& c) const {
        for (const auto& [k, v] : mover_mp)
            if (k == c) return v;
        return -1;
    }
};

struct Enumerator {
    const Chart& chart;
    int cap;
    bool capped = false;
    std::map<int, std::vector<Frag>> memo;

    const std::vector<Frag>& enumerate(int key) {
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<Frag> out;
        for (const auto& p : chart.prods[key]) {
            if ((int)out.size() >= cap) {
                capped = true;
                break;
            }
            switch (p.op) {
                case Prod::Op::Lex: {
                    Frag f;
                    DerivNode n;
                    n.item = chart.lex.items[p.item];
                    n.token = p.token;
                    f.tree.nodes.push_back(n);
                    f.top = 0;
                    out.push_back(std::move(f));
                    break;
                }
                case Prod::Op::Merge: {
                    auto as = enumerate(p.a);  // copies below; reference invalidation guarded by map
                    auto bs = enumerate(p.b);
                    for (const auto& fa : memo[p.a]) {
                        for (const auto& fb : memo[p.b]) {
                            if ((int)out.size() >= cap) {
                                capped = true;
                                break;
                            }
                            Frag f = fa;
                            int off = (int)f.tree.nodes.size();
                            for (auto n : fb.tree.nodes) {
                                if (!n.leaf()) {
                                    n.proj += off;
                                    n.arg += off;
                                }
                                f.tree.nodes.push_back(n);
                            }
                            for (auto m : fb.tree.moves) {
                                m.attach += off;
                                m.mover += off;
                                f.tree.moves.push_back(m);
                            }
                            if (fb.tree.head_move) {
                                auto hmr = *fb.tree.head_move;
                                hmr.node += off;
                                hmr.raised_leaf += off;
                                f.tree.head_move = hmr;
                            }
                            for (const auto& [k, v] : fb.mover_mp) f.mover_mp.push_back({k, v + off});
                            int btop = fb.top + off;
                            DerivNode n;
                            n.proj = f.top;
                            n.arg = btop;
                            n.complement = chart.keys[p.a].main.pos == 0;
                            int node = (int)f.tree.nodes.size();
                            f.tree.nodes.push_back(n);
                            if (p.head_moved) {
                                HeadMoveRec hmr;
                                hmr.node = node;
                                hmr.raised_leaf = f.tree.head_of(btop);
                                const auto& sel = chart.lex.items[chart.keys[p.a].main.item].feats[0];
                                hmr.dir = sel.head_move;
                                f.tree.head_move = hmr;
                            }
                            // If B became a mover, register its base phrase.
                            const Expression& rb = chart.keys[p.b];
                            const auto& bitem = chart.lex.items[rb.main.item];
                            bool b_moves = rb.main.pos + 1 < (int)bitem.feats.size() &&
                                           bitem.feats[rb.main.pos + 1].kind == FeatureKind::Licensee;
                            if (b_moves) {
                                ChainItem id = rb.main;
                                id.pos++;
                                if (p.head_moved) {
                                    id.head = Span{};
                                    id.headless = true;
                                }
                                f.mover_mp.push_back({id, btop});
                            }
                            f.top = node;
                            out.push_back(std::move(f));
                        }
                        if ((int)out.size() >= cap) break;
                    }
                    break;
                }
                case Prod::Op::Move: {
                    enumerate(p.a);
                    for (const auto& fa : memo[p.a]) {
                        if ((int)out.size() >= cap) {
                            capped = true;
                            break;
                        }
                        Frag f = fa;
                        int mp = f.find_mover(p.mover_pre);
                        if (mp < 0) continue;
                        MoveLink link;
                        link.attach = f.top;
                        link.mover = mp;
                        link.licensee_pos = p.mover_pre.pos;
                        f.tree.moves.push_back(link);
                        if (!p.mover_final) {
                            ChainItem id = p.mover_pre;
                            id.pos++;
                            for (auto& [k, v] : f.mover_mp)
                                if (k == p.mover_pre) {
                                    k = id;
                                    break;
                                }
                        }
                        out.push_back(std::move(f));
                    }
                    break;
                }
            }
            if ((int)out.size() >= cap) capped = true;
        }
        return memo[key] = std::move(out);
    }
};

}  // namespace

ParseResult parse(const Lexicon& lex, const std::vector<std::string>& tokens, SentenceType type,
                  const Bounds& bounds) {
    ParseResult result;
    if (tokens.empty() || tokens.size() > 100 || lex.empty()) return result;
    Chart chart(lex, tokens, type, bounds);
    chart.saturate();

    Enumerator en{chart, bounds.derivation_cap};
    for (size_t k = 0; k < chart.keys.size(); ++k) {
        if (!chart.complete(chart.keys[k])) continue;
        for (const auto& f : en.enumerate((int)k)) {
            if ((int)result.derivations.size() >= bounds.derivation_cap) {
                result.capped = true;
                break;
            }
            result.derivations.push_back(f.tree);
        }
    }
    result.capped = result.capped || en.capped;
    std::sort(result.derivations.begin(), result.derivations.end(),
              [](const DerivationTree& a, const DerivationTree& b) {
                  return render_tree_text(a) < render_tree_text(b);
              });
    return result;
}

bool covers_annotations(const DerivationTree& d, const AnnotatedSentence& sentence) {
    auto type = d.sentence_type();
    if (!type || *type != sentence.type) return false;
    RelationSet rs = extract_relations(d);
    for (const auto& ann : sentence.annotations)
        if (!rs.has_pair(ann.a, ann.b)) return false;
    return true;
}

bool validate(const Lexicon& lex, const AnnotatedSentence& sentence, const Bounds& bounds) {
    ParseResult r = parse(lex, sentence.tokens, sentence.type, bounds);
    for (const auto& d : r.derivations)
        if (covers_annotations(d, sentence)) return true;
    return false;
}

}  // namespace mg

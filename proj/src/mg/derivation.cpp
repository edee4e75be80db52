#include "mg/derivation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mg {

int DerivationTree::head_of(int node) const {
    while (!nodes[node].leaf()) node = nodes[node].proj;
    return node;
}

int DerivationTree::max_projection(int leaf) const {
    // Walk the projection chain upward from the leaf.
    std::vector<int> parent(nodes.size(), -1);
    for (size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].leaf()) {
            parent[nodes[i].proj] = (int)i;
            parent[nodes[i].arg] = (int)i;
        }
    int n = leaf;
    while (parent[n] >= 0 && nodes[parent[n]].proj == n) n = parent[n];
    return n;
}

bool DerivationTree::dominates(int a, int b) const {
    if (nodes[a].leaf()) return false;
    std::vector<int> parent(nodes.size(), -1);
    for (size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].leaf()) {
            parent[nodes[i].proj] = (int)i;
            parent[nodes[i].arg] = (int)i;
        }
    for (int n = parent[b]; n >= 0; n = parent[n])
        if (n == a) return true;
    return false;
}

std::vector<int> DerivationTree::leaves() const {
    std::vector<int> out;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].leaf()) out.push_back((int)i);
    return out;
}

std::optional<SentenceType> DerivationTree::sentence_type() const {
    int decl = 0, intr = 0;
    for (const auto& n : nodes)
        if (n.leaf()) {
            decl += n.item.phon.kind == PhoneticForm::Kind::CovertDecl;
            intr += n.item.phon.kind == PhoneticForm::Kind::CovertIntr;
        }
    if (decl + intr != 1) return std::nullopt;
    return decl ? SentenceType::Decl : SentenceType::Intr;
}

std::string MergeEvent::str(const DerivationTree& d) const {
    auto name = [&](int leaf) { return d.nodes[leaf].item.phon.str(); };
    if (kind == Kind::Internal) return "move(" + name(arg_head) + " -> " + name(proj_head) + ")";
    std::string s = "merge(" + name(proj_head) + ", " + name(arg_head) + ")";
    if (head_moved) s += " raising " + name(raised_leaf);
    return s;
}

namespace {

// Landings atop each node, in consumption (link list) order.
std::vector<std::vector<int>> links_by_attach(const DerivationTree& d) {
    std::vector<std::vector<int>> at(d.nodes.size());
    for (size_t k = 0; k < d.moves.size(); ++k) at[d.moves[k].attach].push_back((int)k);
    return at;
}

bool link_is_final(const DerivationTree& d, const MoveLink& link) {
    const auto& item = d.nodes[d.head_of(link.mover)].item;
    return link.licensee_pos == (int)item.feats.size() - 1;
}

}  // namespace

std::vector<MergeEvent> merge_events(const DerivationTree& d) {
    auto at = links_by_attach(d);
    std::vector<MergeEvent> out;
    auto visit = [&](auto&& self, int x) -> void {
        const auto& n = d.nodes[x];
        if (!n.leaf()) {
            self(self, n.proj);
            self(self, n.arg);
            MergeEvent e;
            e.kind = MergeEvent::Kind::External;
            e.node = x;
            e.proj_head = d.head_of(n.proj);
            e.arg_head = d.head_of(n.arg);
            if (d.head_move && d.head_move->node == x) {
                e.head_moved = true;
                e.raised_leaf = d.head_move->raised_leaf;
            }
            out.push_back(e);
        }
        for (int k : at[x]) {
            MergeEvent e;
            e.kind = MergeEvent::Kind::Internal;
            e.node = x;
            e.proj_head = d.head_of(x);
            e.arg_head = d.head_of(d.moves[k].mover);
            out.push_back(e);
        }
    };
    visit(visit, d.root());
    return out;
}

namespace {

struct Parts {
    std::vector<int> spec, head, comp;  // leaf ids
};

std::vector<int> flatten(const Parts& p, bool skip_head) {
    std::vector<int> out = p.spec;
    if (!skip_head) out.insert(out.end(), p.head.begin(), p.head.end());
    out.insert(out.end(), p.comp.begin(), p.comp.end());
    return out;
}

}  // namespace

std::vector<PhoneticForm> linearize(const DerivationTree& d) {
    auto at = links_by_attach(d);
    std::vector<bool> is_mover(d.nodes.size(), false);
    std::vector<bool> head_extracted(d.nodes.size(), false);
    for (const auto& m : d.moves) is_mover[m.mover] = true;
    if (d.head_move) {
        int comp = d.nodes[d.head_move->node].arg;
        head_extracted[comp] = true;
    }

    std::vector<Parts> parts(d.nodes.size());
    for (size_t x = 0; x < d.nodes.size(); ++x) {
        const auto& n = d.nodes[x];
        Parts p;
        if (n.leaf()) {
            p.head = {(int)x};
        } else {
            const Parts& pp = parts[n.proj];
            const Parts& pa = parts[n.arg];
            bool hm_here = d.head_move && d.head_move->node == (int)x;
            p.head = pp.head;
            if (hm_here) {
                if (d.head_move->dir == HeadMove::Left)
                    p.head.insert(p.head.begin(), d.head_move->raised_leaf);
                else
                    p.head.push_back(d.head_move->raised_leaf);
            }
            std::vector<int> arg_seq;
            if (!is_mover[n.arg]) arg_seq = flatten(pa, head_extracted[n.arg]);
            if (n.complement) {
                p.spec = pp.spec;
                p.comp = arg_seq;
            } else {
                p.spec = arg_seq;
                p.spec.insert(p.spec.end(), pp.spec.begin(), pp.spec.end());
                p.comp = pp.comp;
            }
        }
        for (int k : at[x]) {
            const auto& link = d.moves[k];
            if (link_is_final(d, link)) {
                auto content = flatten(parts[link.mover], head_extracted[link.mover]);
                p.spec.insert(p.spec.begin(), content.begin(), content.end());
            }
        }
        parts[x] = std::move(p);
    }
    std::vector<PhoneticForm> out;
    for (int leaf : flatten(parts[d.root()], false)) out.push_back(d.nodes[leaf].item.phon);
    return out;
}

std::vector<std::string> overt_yield(const DerivationTree& d) {
    std::vector<std::string> out;
    for (const auto& f : linearize(d))
        if (f.overt()) out.push_back(f.token);
    return out;
}

bool RelationSet::has_pair(int x, int y) const {
    for (const auto& r : relations)
        if ((r.a == x && r.b == y) || (r.a == y && r.b == x)) return true;
    return false;
}

std::vector<Relation> RelationSet::args() const {
    std::vector<Relation> out;
    for (const auto& r : relations)
        if (r.kind == Relation::Kind::Arg) out.push_back(r);
    return out;
}

std::vector<Relation> RelationSet::agrees() const {
    std::vector<Relation> out;
    for (const auto& r : relations)
        if (r.kind == Relation::Kind::Agree) out.push_back(r);
    return out;
}

RelationSet extract_relations(const DerivationTree& d) {
    if (d.nodes.empty()) throw std::invalid_argument("empty derivation");
    RelationSet rs;
    rs.type = d.sentence_type();
    std::set<Relation> acc;
    auto token_of = [&](int leaf) { return d.nodes[leaf].token; };
    auto overt = [&](int leaf) { return d.nodes[leaf].item.phon.overt(); };
    for (size_t x = 0; x < d.nodes.size(); ++x) {
        const auto& n = d.nodes[x];
        if (n.leaf()) continue;
        int hp = d.head_of(n.proj), ha = d.head_of(n.arg);
        if (overt(hp) && overt(ha)) acc.insert({Relation::Kind::Arg, token_of(ha), token_of(hp)});
    }
    for (const auto& m : d.moves) {
        int host = d.head_of(m.attach), mover = d.head_of(m.mover);
        if (overt(host) && overt(mover)) acc.insert({Relation::Kind::Agree, token_of(mover), token_of(host)});
    }
    rs.relations.assign(acc.begin(), acc.end());
    return rs;
}

std::optional<std::string> tree_invariant_error(const DerivationTree& d, int max_phrasal_moves,
                                                int max_head_moves) {
    const size_t n = d.nodes.size();
    if (n == 0) return "empty tree";
    std::vector<int> parent(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const auto& nd = d.nodes[i];
        if (nd.leaf()) {
            if (nd.arg >= 0) return "leaf with a single child";
            continue;
        }
        if (nd.arg < 0) return "internal node with one child";
        if (nd.proj >= (int)i || nd.arg >= (int)i) return "child does not precede parent";
        if (nd.proj == nd.arg) return "duplicate child";
        for (int c : {nd.proj, nd.arg}) {
            if (parent[c] >= 0) return "node with two parents";
            parent[c] = (int)i;
        }
    }
    for (size_t i = 0; i + 1 < n; ++i)
        if (parent[i] < 0) return "disconnected node " + std::to_string(i);
    if (parent[n - 1] >= 0) return "root has a parent";

    if ((int)d.moves.size() > max_phrasal_moves) return "phrasal movement bound exceeded";
    int hm_count = d.head_move ? 1 : 0;
    if (hm_count > max_head_moves) return "head movement bound exceeded";

    // Replay feature consumption.
    auto at = links_by_attach(d);
    std::vector<int> fn(n, 0);
    std::vector<std::vector<bool>> consumed(n);
    for (size_t i = 0; i < n; ++i)
        if (d.nodes[i].leaf()) consumed[i].assign(d.nodes[i].item.feats.size(), false);

    auto consume = [&](int leaf, int pos, FeatureKind want) -> std::optional<std::string> {
        const auto& feats = d.nodes[leaf].item.feats;
        if (pos < 0 || pos >= (int)feats.size()) return "consumption past the feature sequence";
        if (consumed[leaf][pos]) return "feature consumed twice";
        if (feats[pos].kind != want) return "wrong feature kind at " + feats[pos].str();
        consumed[leaf][pos] = true;
        return std::nullopt;
    };

    for (size_t i = 0; i < n; ++i) {
        const auto& nd = d.nodes[i];
        if (nd.leaf()) continue;
        int p = nd.proj, a = nd.arg;
        int hp = d.head_of(p), ha = d.head_of(a);
        int sq = fn[p] + (int)at[p].size();
        int aq = fn[a] + (int)at[a].size();
        const auto& pfeats = d.nodes[hp].item.feats;
        const auto& afeats = d.nodes[ha].item.feats;
        if (sq >= (int)pfeats.size()) return "selector position out of range";
        if (aq >= (int)afeats.size()) return "selectee position out of range";
        if (!check_external_merge(pfeats[sq], afeats[aq]))
            return "external merge mismatch: " + pfeats[sq].str() + " vs " + afeats[aq].str();
        bool hm_here = d.head_move && d.head_move->node == (int)i;
        if ((pfeats[sq].head_move != HeadMove::None) != hm_here)
            return "head-movement selector/record mismatch";
        if (hm_here) {
            if (sq != 0) return "head movement on a non-complement merge";
            if (d.head_move->raised_leaf != ha) return "raised head is not the complement's head";
            if (d.head_move->dir != pfeats[sq].head_move) return "head movement direction mismatch";
        }
        if (nd.complement != (sq == 0)) return "complement flag inconsistent with consumption index";
        if (auto e = consume(hp, sq, FeatureKind::Selector)) return e;
        if (auto e = consume(ha, aq, FeatureKind::Selectee)) return e;
        fn[i] = sq + 1;
    }

    // Movement links.
    std::map<int, std::vector<int>> mover_links;  // mover node -> link indices in list order
    std::map<int, int> rank_seen;                 // attach -> landings seen so far
    for (size_t k = 0; k < d.moves.size(); ++k) {
        const auto& link = d.moves[k];
        if (link.attach < 0 || link.attach >= (int)n || link.mover < 0 || link.mover >= (int)n)
            return "movement link out of range";
        if (link.attach == (int)n - 1 && false) return "landing atop the root";
        if (!d.dominates(link.attach, link.mover)) return "landing site does not dominate the mover";
        int host = d.head_of(link.attach), mh = d.head_of(link.mover);
        int hq = fn[link.attach] + rank_seen[link.attach]++;
        const auto& hfeats = d.nodes[host].item.feats;
        const auto& mfeats = d.nodes[mh].item.feats;
        if (hq >= (int)hfeats.size()) return "licensor position out of range";
        if (link.licensee_pos < 0 || link.licensee_pos >= (int)mfeats.size()) return "licensee position out of range";
        if (!check_internal_merge(hfeats[hq], mfeats[link.licensee_pos]))
            return "internal merge mismatch: " + hfeats[hq].str() + " vs " + mfeats[link.licensee_pos].str();
        if (auto e = consume(host, hq, FeatureKind::Licensor)) return e;
        if (auto e = consume(mh, link.licensee_pos, FeatureKind::Licensee)) return e;
        auto& seq = mover_links[link.mover];
        if (!seq.empty()) {
            const auto& prev = d.moves[seq.back()];
            if (prev.licensee_pos + 1 != link.licensee_pos) return "licensees consumed out of order";
            if (prev.attach != link.attach && !d.dominates(link.attach, prev.attach))
                return "movement chain does not ascend";
        } else {
            if (link.licensee_pos != d.nodes[mh].item.selectee_pos() + 1)
                return "first landing does not consume the first licensee";
            if (parent[link.mover] < 0) return "mover is the root";
        }
        seq.push_back((int)k);
        if (d.nodes[link.mover].leaf() || d.head_of(link.mover) != mh) {
            // max_projection check below
        }
        if (d.max_projection(mh) != link.mover) return "mover is not a maximal projection";
    }

    // Shortest move: pending chain segments of distinct movers must not
    // overlap when their licensee categories coincide.
    auto dom_eq = [&](int a, int b) { return a == b || d.dominates(a, b); };
    struct Segment {
        int mover, start, end, cat;
    };
    std::vector<Segment> segs;
    for (auto& [mover, seq] : mover_links) {
        int mh = d.head_of(mover);
        for (size_t j = 0; j < seq.size(); ++j) {
            const auto& link = d.moves[seq[j]];
            int start = j == 0 ? parent[mover] : d.moves[seq[j - 1]].attach;
            segs.push_back({mover, start, link.attach, d.nodes[mh].item.feats[link.licensee_pos].cat});
        }
    }
    for (size_t i = 0; i < segs.size(); ++i)
        for (size_t j = i + 1; j < segs.size(); ++j) {
            const auto& s = segs[i];
            const auto& t = segs[j];
            if (s.mover == t.mover || s.cat != t.cat) continue;
            if (dom_eq(s.end, t.start) && dom_eq(t.end, s.start)) return "shortest-move violation";
        }

    // Full consumption; the root head ends with an unconsumed Complete.
    int root_head = d.head_of(d.root());
    for (size_t i = 0; i < n; ++i) {
        if (!d.nodes[i].leaf()) continue;
        const auto& feats = d.nodes[i].item.feats;
        for (size_t q = 0; q < feats.size(); ++q) {
            bool is_root_c = (int)i == root_head && feats[q].kind == FeatureKind::Complete;
            if (is_root_c) {
                if (consumed[i][q]) return "Complete feature consumed";
            } else if (!consumed[i][q]) {
                return "unconsumed feature " + feats[q].str() + " on " + d.nodes[i].item.str();
            }
        }
    }
    if (!d.nodes[root_head].item.has_complete()) return "root head lacks the Complete feature";
    return std::nullopt;
}

namespace {

void render_node(const DerivationTree& d, const std::vector<std::vector<int>>& at,
                 const std::vector<int>& fn, int x, int depth, std::string& out) {
    const auto& n = d.nodes[x];
    int h = d.head_of(x);
    const auto& item = d.nodes[h].item;
    out.append(depth * 2, ' ');
    int k = n.leaf() ? 0 : fn[x];
    std::string feats;
    for (size_t q = 0; q < item.feats.size(); ++q) {
        if ((int)q == k) feats += "*";
        if (!feats.empty() && feats.back() != '*') feats += ",";
        feats += item.feats[q].str();
    }
    if (k == (int)item.feats.size()) feats += "*";
    out += item.phon.str() + "::" + feats;
    if (d.head_move && d.head_move->node == x)
        out += "  [raises " + d.nodes[d.head_move->raised_leaf].item.phon.str() + "]";
    for (int kk : at[x]) {
        const auto& link = d.moves[kk];
        out += "  [lands " + d.nodes[d.head_of(link.mover)].item.phon.str() + " " +
               d.nodes[d.head_of(link.mover)].item.feats[link.licensee_pos].str() + "]";
    }
    out += "\n";
    if (!n.leaf()) {
        int first = n.complement ? n.proj : n.arg;
        int second = n.complement ? n.arg : n.proj;
        render_node(d, at, fn, first, depth + 1, out);
        render_node(d, at, fn, second, depth + 1, out);
    }
}

}  // namespace

std::string render_tree_text(const DerivationTree& d) {
    auto at = links_by_attach(d);
    std::vector<int> fn(d.nodes.size(), 0);
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& nd = d.nodes[i];
        if (!nd.leaf()) fn[i] = fn[nd.proj] + (int)at[nd.proj].size() + 1;
    }
    std::string out;
    render_node(d, at, fn, d.root(), 0, out);
    return out;
}

std::string render_tree_dot(const DerivationTree& d) {
    std::ostringstream out;
    out << "digraph derivation {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& n = d.nodes[i];
        const auto& item = d.nodes[d.head_of((int)i)].item;
        out << "  n" << i << " [label=\"" << (n.leaf() ? item.str() : item.phon.str()) << "\"];\n";
    }
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& n = d.nodes[i];
        if (n.leaf()) continue;
        out << "  n" << i << " -> n" << n.proj << " [label=\"proj\"];\n";
        out << "  n" << i << " -> n" << n.arg << ";\n";
    }
    for (const auto& m : d.moves)
        out << "  n" << m.attach << " -> n" << m.mover << " [style=dashed, label=\"move\"];\n";
    if (d.head_move)
        out << "  n" << d.head_move->node << " -> n" << d.head_move->raised_leaf
            << " [style=dotted, label=\"head\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace mg

#pragma once

// Derivation trees: binary-branching merge records with projection, movement
// chains and head movement, plus the operations defined over them
// (linearization, relation extraction, event listing, rendering).

#include <optional>
#include <string>
#include <vector>

#include "mg/core.hpp"

namespace mg {

enum class SentenceType : uint8_t { Decl, Intr };

struct DerivNode {
    int proj = -1;  // projecting child, -1 for leaves
    int arg = -1;   // non-projecting child, -1 for leaves
    bool complement = false;  // merge consumed the head's first feature
    LexicalItem item;         // leaves only
    int token = -1;           // surface token index for overt leaves
    bool leaf() const { return proj < 0; }
};

// A movement step: the phrase rooted at `mover` lands atop node `attach`,
// consuming the mover head's feature at index `licensee_pos` against the
// next licensor of attach's head. Links are listed in consumption order.
struct MoveLink {
    int attach = -1;
    int mover = -1;
    int licensee_pos = -1;
};

struct HeadMoveRec {
    int node = -1;         // merge node whose selector triggered it
    int raised_leaf = -1;  // complement's head, adjoined to the selecting head
    HeadMove dir = HeadMove::None;
};

struct DerivationTree {
    // Children precede parents; the last node is the root.
    std::vector<DerivNode> nodes;
    std::vector<MoveLink> moves;
    std::optional<HeadMoveRec> head_move;

    int root() const { return (int)nodes.size() - 1; }
    int head_of(int node) const;  // leaf reached through projecting children
    // Highest node projected by `leaf` (its maximal projection).
    int max_projection(int leaf) const;
    bool dominates(int a, int b) const;  // strict ancestorship

    std::vector<int> leaves() const;
    std::optional<SentenceType> sentence_type() const;
};

struct MergeEvent {
    enum class Kind : uint8_t { External, Internal };
    Kind kind = Kind::External;
    int node = -1;       // merge node (External) or attach node (Internal)
    int proj_head = -1;  // leaf: head of the projecting/host side
    int arg_head = -1;   // leaf: head of the selected phrase / mover
    bool head_moved = false;
    int raised_leaf = -1;

    std::string str(const DerivationTree& d) const;
};

// Canonical bottom-up event order: a node's events follow both children's,
// landings atop a node follow the node's own merge.
std::vector<MergeEvent> merge_events(const DerivationTree& d);

// Derived-tree yield: complements right of the head, specifiers and landing
// sites to the left, movers pronounced at their final landing, raised heads
// adjacent to their host. Includes covert forms at their derived position.
std::vector<PhoneticForm> linearize(const DerivationTree& d);

// The overt part of the yield as token strings.
std::vector<std::string> overt_yield(const DerivationTree& d);

struct Relation {
    enum class Kind : uint8_t { Arg, Agree };
    Kind kind;
    int a;  // token index: argument / mover
    int b;  // token index: head merged with
    friend auto operator<=>(const Relation&, const Relation&) = default;
};

struct RelationSet {
    std::vector<Relation> relations;  // sorted, unique
    std::optional<SentenceType> type;

    // Membership up to orientation; annotation kinds are matched against any
    // local merge relation, so the kind is not compared.
    bool has_pair(int x, int y) const;
    std::vector<Relation> args() const;
    std::vector<Relation> agrees() const;
};

// Every merge establishes a local relation between the heads of its two
// sides; external merges are reported as arg(selectee side, selector side),
// movement landings as agree(mover, host). Pairs involving covert heads are
// skipped. Errors if the tree is not complete.
RelationSet extract_relations(const DerivationTree& d);

// Replays the derivation and reports the first violated invariant, if any:
// binary branching, single root, ordered feature consumption, category
// matches, movement chain ordering, the shortest-move constraint, full
// consumption with a Complete-final root, and the movement/head-movement
// bounds.
std::optional<std::string> tree_invariant_error(const DerivationTree& d, int max_phrasal_moves = 3,
                                                int max_head_moves = 1);

std::string render_tree_text(const DerivationTree& d);
std::string render_tree_dot(const DerivationTree& d);

}  // namespace mg

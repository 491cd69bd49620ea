#pragma once

#include <string>
#include <utility>
#include <vector>

#include "metafib/spec.hpp"

namespace metafib {

// The infinite trees T and U share one shape.  s-node m (m >= 1) has
// s-node m-1 as its left child; s-node 1 has two leaves instead.  The right
// child of s-node m >= 2 is a complete binary tree of height m.  Labels go
// in preorder, so the labelled nodes form "blocks": block 0 and block 1 are
// the two leaves of s-node 1, and block m >= 2 is the right subtree of
// s-node m.

enum class TreeModel { T, U };
enum class NodeKind { SNode, Regular, Leaf };
enum class Side { None, Left, Right };

/// Label value used for a label created by the correction step of prune_T.
inline constexpr Value kAddedLabel = -1;

struct TreeNode {
  NodeKind kind = NodeKind::Regular;
  int block = -1;  // -1 for s-nodes
  int snode = 0;   // index m of an s-node, 0 otherwise
  int height = 0;  // leaves have height 1
  int parent = -1;
  int left = -1;
  int right = -1;
  Side side = Side::None;
  std::vector<Value> capacity;            // per cell
  std::vector<std::vector<Value>> cells;  // labels held, per cell

  Value label_count() const;
  bool empty() const { return label_count() == 0; }
};

struct TreePrefix {
  TreeModel model = TreeModel::T;
  Value alpha = 0;  // U only
  Value beta = 0;   // U only
  std::vector<TreeNode> nodes;
  std::vector<int> order;  // labelled (non s-node) nodes in preorder
  int top = -1;            // highest materialised s-node
  int blocks = 0;          // number of materialised blocks

  Value label_count() const;
};

/// T(n): regular nodes take 1 label, leaves take 3 in two cells (1 + 2).
TreePrefix build_T(Value n);

/// U(n) for (alpha, beta): regular nodes take beta labels, leaves alpha + beta.
/// Requires beta >= 0, alpha + beta > 0 and alpha even.
TreePrefix build_U(Value alpha, Value beta, Value n);

/// L(n): non-empty leaf cells of a T tree.
Value count_cells_L(const TreePrefix& tree);

/// M(n): non-empty leaves of a U tree.
Value count_leaves_M(const TreePrefix& tree);

/// Non-empty leaf cells (T) or leaves (U), split by left and right leaves.
std::pair<Value, Value> count_by_side(const TreePrefix& tree);

enum class LabelPlace { Regular, LeafFirst, LeafSecond, LeafThird };

struct LabelPosition {
  int node = -1;
  std::size_t cell = 0;
  std::size_t index = 0;  // within the cell
  LabelPlace place = LabelPlace::Regular;
};

/// Where label n (1-based preorder rank) sits.  Throws std::out_of_range.
LabelPosition label_position(const TreePrefix& tree, Value n);

/// Per-node cell sizes in preorder with trailing empty nodes dropped.  Two
/// trees with equal signatures agree up to renumbering of labels.
std::vector<std::vector<Value>> structure_signature(const TreePrefix& tree);

/// Renumbers the labels 1..count in preorder.
void relabel(TreePrefix& tree);

struct LeafDeletion {
  Value first_label = 0;
  Value on_or_after = 0;  // labels on or after the leaf in preorder
  Value deleted = 0;      // labels taken from the leaf itself
  Value deficit = 0;      // labels taken from its parent instead
};

struct PruneResult {
  TreePrefix tree;  // labels keep their old values until relabel()
  bool spill = false;
  std::vector<LeafDeletion> deletions;  // prune_U only, in preorder
};

/// The five-step pruning of T(n), n >= 6.  The result has n - L(n-2)
/// labels.  `spill` is set when the correction step had to open a node
/// that held no labels.
PruneResult prune_T(const TreePrefix& tree);

/// The pruning of U(n), n > 4 alpha + 5 beta.  The result has
/// n - sum_{j=1..p} M(n-2j+1) labels.  Throws std::logic_error if a deficit
/// exceeds what the parent holds.
PruneResult prune_U(const TreePrefix& tree);

/// Graphviz rendering: s-nodes as points, regular nodes as circles, leaves
/// as records.
std::string to_dot(const TreePrefix& tree, const std::string& name = "tree");

/// D_0 = "1", D_{k+1} = 0 D_k D_k.
std::string diff_string_D(int k);

/// F_1 = "110110", F_2 = 0 F_1, F_{k+1} = 0 F_k F_k.  Requires k >= 1.
std::string diff_string_F(int k);

/// First `bits` bits of D_0 D_0 D_1 D_2 ... and of F_1 F_2 ...
std::string diff_concat_D(Value bits);
std::string diff_concat_F(Value bits);

/// Both concatenations agree on their first `bits` bits with each other and
/// with the first differences of the Conolly sequence (C(0) = 0).
bool verify_diff_identity(Value bits);

}  // namespace metafib

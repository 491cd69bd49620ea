#include "metafib/trees.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "metafib/engine.hpp"

namespace metafib {

Value TreeNode::label_count() const {
  Value total = 0;
  for (const auto& cell : cells) total += static_cast<Value>(cell.size());
  return total;
}

Value TreePrefix::label_count() const {
  Value total = 0;
  for (int idx : order) total += nodes[static_cast<std::size_t>(idx)].label_count();
  return total;
}

namespace {

using Cells = std::vector<std::vector<Value>>;

TreePrefix make_empty(TreeModel model, Value alpha, Value beta) {
  TreePrefix tree;
  tree.model = model;
  tree.alpha = alpha;
  tree.beta = beta;
  return tree;
}

std::vector<Value> capacity_of(const TreePrefix& tree, NodeKind kind) {
  if (tree.model == TreeModel::T) {
    return kind == NodeKind::Leaf ? std::vector<Value>{1, 2} : std::vector<Value>{1};
  }
  return {kind == NodeKind::Leaf ? tree.alpha + tree.beta : tree.beta};
}

int add_node(TreePrefix& tree, NodeKind kind, int block, int height, int parent, Side side) {
  TreeNode node;
  node.kind = kind;
  node.block = block;
  node.height = height;
  node.parent = parent;
  node.side = side;
  if (kind != NodeKind::SNode) {
    node.capacity = capacity_of(tree, kind);
    node.cells.assign(node.capacity.size(), {});
  }
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(std::move(node));
  if (parent >= 0) {
    auto& p = tree.nodes[static_cast<std::size_t>(parent)];
    (side == Side::Left ? p.left : p.right) = idx;
  }
  if (kind != NodeKind::SNode) tree.order.push_back(idx);
  return idx;
}

// Complete binary subtree of the given height, appended in preorder.
void add_subtree(TreePrefix& tree, int height, int block, int parent, Side side) {
  const int idx = add_node(tree, height == 1 ? NodeKind::Leaf : NodeKind::Regular, block, height, parent, side);
  if (height > 1) {
    add_subtree(tree, height - 1, block, idx, Side::Left);
    add_subtree(tree, height - 1, block, idx, Side::Right);
  }
}

// Materialises the next block (and the s-node above it when needed).
void add_block(TreePrefix& tree) {
  const int b = tree.blocks;
  if (b > 28) throw std::length_error("tree prefix too large");
  if (b == 0) {
    const int s1 = add_node(tree, NodeKind::SNode, -1, 2, -1, Side::None);
    tree.nodes[static_cast<std::size_t>(s1)].snode = 1;
    tree.top = s1;
    add_node(tree, NodeKind::Leaf, 0, 1, s1, Side::Left);
  } else if (b == 1) {
    add_node(tree, NodeKind::Leaf, 1, 1, tree.top, Side::Right);
  } else {
    const int s = add_node(tree, NodeKind::SNode, -1, b + 1, -1, Side::None);
    tree.nodes[static_cast<std::size_t>(s)].snode = b;
    tree.nodes[static_cast<std::size_t>(s)].left = tree.top;
    tree.nodes[static_cast<std::size_t>(tree.top)].parent = s;
    tree.nodes[static_cast<std::size_t>(tree.top)].side = Side::Left;
    tree.top = s;
    add_subtree(tree, b, b, s, Side::Right);
  }
  ++tree.blocks;
}

Value total_capacity(const TreePrefix& tree) {
  Value total = 0;
  for (int idx : tree.order) {
    for (Value c : tree.nodes[static_cast<std::size_t>(idx)].capacity) total += c;
  }
  return total;
}

TreePrefix build(TreeModel model, Value alpha, Value beta, Value n) {
  if (n < 0) throw std::invalid_argument("label count must be nonnegative");
  TreePrefix tree = make_empty(model, alpha, beta);
  while (tree.blocks < 2 || total_capacity(tree) < n) add_block(tree);
  Value next = 1;
  for (int idx : tree.order) {
    auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    for (std::size_t c = 0; c < node.cells.size(); ++c) {
      while (next <= n && static_cast<Value>(node.cells[c].size()) < node.capacity[c]) {
        node.cells[c].push_back(next++);
      }
    }
  }
  return tree;
}

std::vector<std::vector<int>> nodes_by_block(const TreePrefix& tree) {
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(tree.blocks));
  for (int idx : tree.order) {
    blocks[static_cast<std::size_t>(tree.nodes[static_cast<std::size_t>(idx)].block)].push_back(idx);
  }
  return blocks;
}

int first_snode(const TreePrefix& tree) {
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].kind == NodeKind::SNode && tree.nodes[i].snode == 1) return static_cast<int>(i);
  }
  throw std::logic_error("tree has no first s-node");
}

// After lifting, the old penultimate level is the new leaf level: s-node 1
// becomes block 0 and the non-leaf nodes of old block b+1 become block b.
// With `strict` off, overflow is left for the caller to resolve and check.
TreePrefix remap(const TreePrefix& old, const std::vector<Cells>& work, int s1, bool strict = true) {
  TreePrefix out = make_empty(old.model, old.alpha, old.beta);
  while (out.blocks < std::max(2, old.blocks - 1)) add_block(out);
  const auto old_blocks = nodes_by_block(old);
  const auto new_blocks = nodes_by_block(out);

  auto place = [&](int from, int to) {
    auto& node = out.nodes[static_cast<std::size_t>(to)];
    const Cells& cells = work[static_cast<std::size_t>(from)];
    if (cells.size() > node.capacity.size()) throw std::logic_error("pruned node has too many cells");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (strict && static_cast<Value>(cells[c].size()) > node.capacity[c]) {
        throw std::logic_error("pruned node overflows its capacity");
      }
      node.cells[c] = cells[c];
    }
  };

  place(s1, new_blocks[0].front());
  for (std::size_t b = 1; b + 1 < old_blocks.size(); ++b) {
    std::vector<int> upper;
    for (int idx : old_blocks[b + 1]) {
      if (old.nodes[static_cast<std::size_t>(idx)].kind != NodeKind::Leaf) upper.push_back(idx);
    }
    if (upper.size() != new_blocks[b].size()) throw std::logic_error("block shapes disagree");
    for (std::size_t r = 0; r < upper.size(); ++r) place(upper[r], new_blocks[b][r]);
  }
  return out;
}

// Position in `order` of the last node holding a label, or -1.
int last_nonempty(const TreePrefix& tree) {
  for (int k = static_cast<int>(tree.order.size()) - 1; k >= 0; --k) {
    if (!tree.nodes[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(k)])].empty()) return k;
  }
  return -1;
}

void remove_last_label(TreePrefix& tree) {
  const int k = last_nonempty(tree);
  if (k < 0) throw std::logic_error("no label left to remove");
  auto& node = tree.nodes[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(k)])];
  for (auto cell = node.cells.rbegin(); cell != node.cells.rend(); ++cell) {
    if (!cell->empty()) {
      cell->pop_back();
      return;
    }
  }
}

// Adds a label right after the last one in preorder.  Returns true when that
// required opening a node that held nothing.
bool append_label(TreePrefix& tree, Value label) {
  const int k = last_nonempty(tree);
  if (k >= 0) {
    auto& node = tree.nodes[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(k)])];
    std::size_t c = node.cells.size();
    while (c > 0 && node.cells[c - 1].empty()) --c;
    if (c > 0 && static_cast<Value>(node.cells[c - 1].size()) < node.capacity[c - 1]) {
      node.cells[c - 1].push_back(label);
      return false;
    }
    for (; c < node.cells.size(); ++c) {
      if (node.capacity[c] > 0) {
        node.cells[c].push_back(label);
        return false;
      }
    }
  }
  for (std::size_t next = static_cast<std::size_t>(k + 1);; ++next) {
    while (next >= tree.order.size()) add_block(tree);
    auto& node = tree.nodes[static_cast<std::size_t>(tree.order[next])];
    for (std::size_t c = 0; c < node.cells.size(); ++c) {
      if (node.capacity[c] > 0) {
        node.cells[c].push_back(label);
        return true;
      }
    }
  }
}

std::string join_labels(const std::vector<Value>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i] == kAddedLabel ? "x" : std::to_string(labels[i]);
  }
  return out;
}

}  // namespace

TreePrefix build_T(Value n) { return build(TreeModel::T, 0, 0, n); }

TreePrefix build_U(Value alpha, Value beta, Value n) {
  if (beta < 0 || alpha + beta <= 0 || alpha % 2 != 0) {
    throw std::invalid_argument("U needs beta >= 0, alpha + beta > 0 and alpha even");
  }
  return build(TreeModel::U, alpha, beta, n);
}

Value count_cells_L(const TreePrefix& tree) {
  auto [left, right] = count_by_side(tree);
  return left + right;
}

Value count_leaves_M(const TreePrefix& tree) { return count_cells_L(tree); }

std::pair<Value, Value> count_by_side(const TreePrefix& tree) {
  Value left = 0;
  Value right = 0;
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind != NodeKind::Leaf) continue;
    Value count = 0;
    if (tree.model == TreeModel::T) {
      for (const auto& cell : node.cells) count += cell.empty() ? 0 : 1;
    } else {
      count = node.empty() ? 0 : 1;
    }
    (node.side == Side::Left ? left : right) += count;
  }
  return {left, right};
}

LabelPosition label_position(const TreePrefix& tree, Value n) {
  if (n < 1) throw std::out_of_range("labels start at 1");
  Value seen = 0;
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    for (std::size_t c = 0; c < node.cells.size(); ++c) {
      const Value size = static_cast<Value>(node.cells[c].size());
      if (seen + size >= n) {
        LabelPosition pos{idx, c, static_cast<std::size_t>(n - seen - 1), LabelPlace::Regular};
        if (node.kind == NodeKind::Leaf) {
          if (c == 0) {
            pos.place = LabelPlace::LeafFirst;
          } else {
            pos.place = pos.index == 0 ? LabelPlace::LeafSecond : LabelPlace::LeafThird;
          }
        }
        return pos;
      }
      seen += size;
    }
  }
  throw std::out_of_range("tree holds only " + std::to_string(seen) + " labels");
}

std::vector<std::vector<Value>> structure_signature(const TreePrefix& tree) {
  std::vector<std::vector<Value>> sig;
  for (int idx : tree.order) {
    std::vector<Value> sizes;
    for (const auto& cell : tree.nodes[static_cast<std::size_t>(idx)].cells) {
      sizes.push_back(static_cast<Value>(cell.size()));
    }
    sig.push_back(std::move(sizes));
  }
  auto is_empty = [](const std::vector<Value>& sizes) {
    return std::all_of(sizes.begin(), sizes.end(), [](Value v) { return v == 0; });
  };
  while (!sig.empty() && is_empty(sig.back())) sig.pop_back();
  return sig;
}

void relabel(TreePrefix& tree) {
  Value next = 1;
  for (int idx : tree.order) {
    for (auto& cell : tree.nodes[static_cast<std::size_t>(idx)].cells) {
      for (auto& label : cell) label = next++;
    }
  }
}

PruneResult prune_T(const TreePrefix& tree) {
  if (tree.model != TreeModel::T) throw std::invalid_argument("prune_T needs a T tree");
  const Value n = tree.label_count();
  if (n < 6) throw std::invalid_argument("prune_T needs n >= 6, got " + std::to_string(n));
  const LabelPlace last = label_position(tree, n).place;

  std::vector<Cells> work;
  for (const auto& node : tree.nodes) work.push_back(node.cells);
  const int s1 = first_snode(tree);

  // Initial step and, for s-node 1, cell creation.
  work[static_cast<std::size_t>(s1)] = {{0}, {}};
  // Deletion step: the first label of every non-empty leaf cell.
  for (int idx : tree.order) {
    if (tree.nodes[static_cast<std::size_t>(idx)].kind != NodeKind::Leaf) continue;
    for (auto& cell : work[static_cast<std::size_t>(idx)]) {
      if (!cell.empty()) cell.erase(cell.begin());
    }
  }
  // Cell creation step.
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind == NodeKind::Regular && node.height == 2) {
      work[static_cast<std::size_t>(idx)].resize(2);
    }
  }
  // Lifting step.
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind != NodeKind::Leaf) continue;
    auto& parent = work[static_cast<std::size_t>(node.parent)];
    for (auto& cell : work[static_cast<std::size_t>(idx)]) {
      parent[1].insert(parent[1].end(), cell.begin(), cell.end());
      cell.clear();
    }
  }

  PruneResult result;
  result.tree = remap(tree, work, s1);
  // Correction step.
  if (last == LabelPlace::Regular) {
    remove_last_label(result.tree);
  } else if (last == LabelPlace::LeafSecond) {
    result.spill = append_label(result.tree, kAddedLabel);
  }
  return result;
}

PruneResult prune_U(const TreePrefix& tree) {
  if (tree.model != TreeModel::U) throw std::invalid_argument("prune_U needs a U tree");
  const Value n = tree.label_count();
  const Value alpha = tree.alpha;
  const Value beta = tree.beta;
  if (n <= 4 * alpha + 5 * beta) {
    throw std::invalid_argument("prune_U needs n > 4 alpha + 5 beta = " + std::to_string(4 * alpha + 5 * beta));
  }
  const Value p = alpha / 2 + beta;

  std::vector<Cells> work;
  for (const auto& node : tree.nodes) work.push_back(node.cells);
  const int s1 = first_snode(tree);
  PruneResult result;

  // Initial step.
  work[static_cast<std::size_t>(s1)] = {std::vector<Value>(static_cast<std::size_t>(beta), 0)};

  // Deletion step: leaf Y loses one label for every U(n-2j+1), j = 1..p,
  // in which it is non-empty; a shortfall comes out of its parent.
  Value rank = 0;
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    const Value first = rank + 1;
    rank += node.label_count();
    if (node.kind != NodeKind::Leaf || node.empty()) continue;
    Value wanted = 0;
    for (Value j = 1; j <= p; ++j) {
      if (first <= n - 2 * j + 1) ++wanted;
    }
    auto& labels = work[static_cast<std::size_t>(idx)][0];
    const Value taken = std::min<Value>(wanted, static_cast<Value>(labels.size()));
    labels.erase(labels.begin(), labels.begin() + taken);
    const Value deficit = wanted - taken;
    if (deficit > 0) {
      auto& parent = work[static_cast<std::size_t>(node.parent)][0];
      if (static_cast<Value>(parent.size()) < deficit) {
        throw std::logic_error("deficit exceeds the labels held by the parent");
      }
      parent.resize(parent.size() - static_cast<std::size_t>(deficit));
    }
    result.deletions.push_back({first, n - first + 1, taken, deficit});
  }
  // Lifting step.
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind != NodeKind::Leaf) continue;
    auto& labels = work[static_cast<std::size_t>(idx)][0];
    auto& parent = work[static_cast<std::size_t>(node.parent)][0];
    parent.insert(parent.end(), labels.begin(), labels.end());
    labels.clear();
  }

  // The last penultimate node may hold up to beta labels too many until
  // the correction step removes them.
  result.tree = remap(tree, work, s1, false);
  // Correction step.
  for (Value k = 0; k < beta; ++k) remove_last_label(result.tree);
  for (const auto& node : result.tree.nodes) {
    for (std::size_t c = 0; c < node.cells.size(); ++c) {
      if (static_cast<Value>(node.cells[c].size()) > node.capacity[c]) {
        throw std::logic_error("pruned node overflows its capacity");
      }
    }
  }
  return result;
}

std::string to_dot(const TreePrefix& tree, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    out << "  n" << i << " [";
    if (node.kind == NodeKind::SNode) {
      out << "shape=point,xlabel=\"s" << node.snode << "\"";
    } else if (node.kind == NodeKind::Regular) {
      out << "shape=circle,label=\"" << join_labels(node.cells[0]) << "\"";
    } else if (tree.model == TreeModel::T) {
      out << "shape=record,label=\"{" << join_labels(node.cells[0]) << "|" << join_labels(node.cells[1]) << "}\"";
    } else {
      out << "shape=box,label=\"" << join_labels(node.cells[0]) << "\"";
    }
    out << "];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    for (int child : {tree.nodes[i].left, tree.nodes[i].right}) {
      if (child >= 0) out << "  n" << i << " -> n" << child << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string diff_string_D(int k) {
  if (k < 0 || k > 30) throw std::invalid_argument("D_k needs 0 <= k <= 30");
  std::string d = "1";
  for (int i = 0; i < k; ++i) d = "0" + d + d;
  return d;
}

std::string diff_string_F(int k) {
  if (k < 1 || k > 30) throw std::invalid_argument("F_k needs 1 <= k <= 30");
  std::string f = "110110";
  if (k == 1) return f;
  f = "0" + f;
  for (int i = 2; i < k; ++i) f = "0" + f + f;
  return f;
}

std::string diff_concat_D(Value bits) {
  std::string out = diff_string_D(0);
  for (int k = 0; static_cast<Value>(out.size()) < bits; ++k) out += diff_string_D(k);
  out.resize(static_cast<std::size_t>(std::max<Value>(bits, 0)));
  return out;
}

std::string diff_concat_F(Value bits) {
  std::string out;
  for (int k = 1; static_cast<Value>(out.size()) < bits; ++k) out += diff_string_F(k);
  out.resize(static_cast<std::size_t>(std::max<Value>(bits, 0)));
  return out;
}

bool verify_diff_identity(Value bits) {
  if (bits < 1) throw std::invalid_argument("need at least one bit");
  RecursionSpec conolly{{{0, {1}}, {1, {2}}}, {1, 2}};
  const EvalResult run = evaluate(conolly, std::max<Value>(bits, 2));
  if (!run.alive()) return false;
  std::string diffs;
  Value prev = 0;
  for (Value n = 1; n <= bits; ++n) {
    const Value d = run.at(n) - prev;
    if (d != 0 && d != 1) return false;
    diffs += d ? '1' : '0';
    prev = run.at(n);
  }
  return diffs == diff_concat_D(bits) && diffs == diff_concat_F(bits);
}

}  // namespace metafib

#include "doctest.h"

#include "metafib/engine.hpp"
#include "metafib/reference.hpp"
#include "metafib/trees.hpp"
#include "oracles.hpp"

using namespace metafib;

namespace {

using Cells = std::vector<std::vector<Value>>;

std::vector<Cells> contents(const TreePrefix& tree) {
  std::vector<Cells> out;
  for (int idx : tree.order) out.push_back(tree.nodes[static_cast<std::size_t>(idx)].cells);
  while (!out.empty()) {
    bool empty = true;
    for (const auto& cell : out.back()) empty = empty && cell.empty();
    if (!empty) break;
    out.pop_back();
  }
  return out;
}

Value sum_M(const std::vector<Value>& m, Value n, Value p, Value shift) {
  Value total = 0;
  for (Value j = 1; j <= p; ++j) {
    const Value k = n - 2 * j + 1 - shift;
    total += k >= 1 ? m[static_cast<std::size_t>(k - 1)] : 0;
  }
  return total;
}

}  // namespace

TEST_CASE("T(n) cell counts") {
  CHECK(count_cells_L(build_T(0)) == 0);
  for (Value n = 1; n <= 20; ++n) {
    CHECK(count_cells_L(build_T(n)) == oracle::kConolly20[static_cast<std::size_t>(n - 1)]);
  }
  CHECK(build_T(20).label_count() == 20);
  CHECK(build_T(0).label_count() == 0);
}

TEST_CASE("T(20) shape") {
  auto tree = build_T(20);
  CHECK(contents(tree) == std::vector<Cells>{{{1}, {2, 3}},
                                             {{4}, {5, 6}},
                                             {{7}},
                                             {{8}, {9, 10}},
                                             {{11}, {12, 13}},
                                             {{14}},
                                             {{15}},
                                             {{16}, {17, 18}},
                                             {{19}, {20}}});
  CHECK(label_position(tree, 20).place == LabelPlace::LeafSecond);
  CHECK(label_position(tree, 18).place == LabelPlace::LeafThird);
  CHECK(label_position(tree, 16).place == LabelPlace::LeafFirst);
  CHECK(label_position(tree, 15).place == LabelPlace::Regular);
  CHECK_THROWS_AS(label_position(tree, 21), std::out_of_range);
}

TEST_CASE("property: L(n) agrees with the oracle and with H for n <= 2000") {
  auto h = evaluate(parse_spec("<0;2:3;5>[1,2,2,3,4]"), 2000).values;
  auto expected = oracle::tree_L(2000);
  for (Value n = 1; n <= 2000; ++n) {
    const Value l = count_cells_L(build_T(n));
    CHECK(l == expected[static_cast<std::size_t>(n - 1)]);
    CHECK(l == h[static_cast<std::size_t>(n - 1)]);
  }
}

TEST_CASE("property: L(n) - L(n-2) follows the position of label n") {
  auto L = oracle::tree_L(2000);
  auto tree = build_T(2000);
  for (Value n = 3; n <= 2000; ++n) {
    const Value drop = L[static_cast<std::size_t>(n - 1)] - L[static_cast<std::size_t>(n - 3)];
    const LabelPlace place = label_position(tree, n).place;
    const Value expected = place == LabelPlace::Regular ? 0 : place == LabelPlace::LeafSecond ? 2 : 1;
    CHECK(drop == expected);
  }
}

TEST_CASE("pruning T(20) gives T(10)") {
  auto pruned = prune_T(build_T(20));
  CHECK_FALSE(pruned.spill);
  CHECK(pruned.tree.label_count() == 10);
  CHECK(contents(pruned.tree) ==
        std::vector<Cells>{{{0}, {3, 6}}, {{7}, {10, 13}}, {{14}}, {{15}, {18, kAddedLabel}}});
  CHECK(structure_signature(pruned.tree) == structure_signature(build_T(10)));
  relabel(pruned.tree);
  CHECK(contents(pruned.tree) == contents(build_T(10)));
}

TEST_CASE("pruning small trees") {
  auto pruned = prune_T(build_T(6));
  CHECK(pruned.tree.label_count() == 3);
  CHECK(structure_signature(pruned.tree) == structure_signature(build_T(3)));
  CHECK_THROWS_AS(prune_T(build_T(5)), std::invalid_argument);
  CHECK_THROWS_AS(prune_T(build_U(0, 1, 20)), std::invalid_argument);
}

TEST_CASE("property: pruning T(n) lands on T(n - L(n-2))") {
  auto L = oracle::tree_L(1000);
  int spills = 0;
  for (Value n = 6; n <= 1000; ++n) {
    CAPTURE(n);
    auto pruned = prune_T(build_T(n));
    const Value target = n - L[static_cast<std::size_t>(n - 3)];
    CHECK(pruned.tree.label_count() == target);
    CHECK(structure_signature(pruned.tree) == structure_signature(build_T(target)));
    CHECK(count_cells_L(pruned.tree) == L[static_cast<std::size_t>(target - 1)]);
    spills += pruned.spill;
  }
  MESSAGE("correction steps that opened a new node: " << spills);
}

TEST_CASE("property: left and right leaf cells of T(n)") {
  auto L = oracle::tree_L(2000);
  auto at = [&](Value k) { return k >= 1 ? L[static_cast<std::size_t>(k - 1)] : 0; };
  for (Value n = 6; n <= 2000; ++n) {
    auto [left, right] = count_by_side(build_T(n));
    CHECK(left == at(n - at(n - 2)));
    CHECK(right == at(n - 3 - at(n - 5)));
  }
}

TEST_CASE("U(n) leaf counts") {
  CHECK(count_leaves_M(build_U(2, 1, 17)) == 5);
  CHECK(count_leaves_M(build_U(2, 1, 0)) == 0);
  auto conolly = evaluate(parse_spec("<0;1:1;2>[1,2]"), 2000).values;
  for (Value n = 1; n <= 2000; ++n) {
    CHECK(count_leaves_M(build_U(0, 1, n)) == conolly[static_cast<std::size_t>(n - 1)]);
  }
  CHECK_THROWS_AS(build_U(1, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_U(0, -1, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_U(-2, 2, 5), std::invalid_argument);
}

TEST_CASE("property: M(n) is the definitional sequence for every admissible pair") {
  for (Value p = 1; p <= 4; ++p) {
    for (const auto& pair : admissible_pairs(p)) {
      CAPTURE(pair.alpha);
      CAPTURE(pair.beta);
      auto expected = definitional_sequence(pair.alpha, pair.beta, 1500);
      for (Value n = 1; n <= 1500; ++n) {
        CHECK(count_leaves_M(build_U(pair.alpha, pair.beta, n)) == expected[static_cast<std::size_t>(n - 1)]);
      }
    }
  }
}

TEST_CASE("pruning U(17) with (2,1) gives U(8)") {
  auto pruned = prune_U(build_U(2, 1, 17));
  CHECK(pruned.tree.label_count() == 8);
  CHECK(contents(pruned.tree) == std::vector<Cells>{{{0, 3, 6}}, {{7, 10, 13}}, {{14}}, {{15}}});
  CHECK(structure_signature(pruned.tree) == structure_signature(build_U(2, 1, 8)));
}

TEST_CASE("pruning U(12) with (-2,3) gives U(4)") {
  auto pruned = prune_U(build_U(-2, 3, 12));
  CHECK(pruned.tree.label_count() == 4);
  CHECK(contents(pruned.tree) == std::vector<Cells>{{{0}}, {{3}}, {{8, 9}}});
  CHECK(structure_signature(pruned.tree) == structure_signature(build_U(-2, 3, 4)));
  for (const auto& del : pruned.deletions) CHECK(del.deficit == 1);
  CHECK_THROWS_AS(prune_U(build_U(-2, 3, 7)), std::invalid_argument);
}

TEST_CASE("property: pruning U(n) for every admissible pair") {
  for (Value p = 1; p <= 4; ++p) {
    for (const auto& pair : admissible_pairs(p)) {
      const Value alpha = pair.alpha;
      const Value beta = pair.beta;
      const Value gamma = alpha + beta;
      CAPTURE(alpha);
      CAPTURE(beta);
      auto M = definitional_sequence(alpha, beta, 1000);
      for (Value n = 4 * alpha + 5 * beta + 1; n <= 1000; ++n) {
        CAPTURE(n);
        const auto tree = build_U(alpha, beta, n);
        auto pruned = prune_U(tree);
        const Value target = n - sum_M(M, n, p, 0);
        CHECK(pruned.tree.label_count() == target);
        CHECK(structure_signature(pruned.tree) == structure_signature(build_U(alpha, beta, target)));
        for (const auto& del : pruned.deletions) {
          CHECK(del.deleted + del.deficit == std::min(del.on_or_after / 2, p));
          CHECK(del.deficit <= (alpha < 0 ? -alpha / 2 : 0));
        }
        // Left leaves count M(n - sum M(n-2j+1)), right leaves the gamma-shifted term.
        auto [left, right] = count_by_side(tree);
        const Value right_arg = n - gamma - sum_M(M, n, p, gamma);
        CHECK(left == M[static_cast<std::size_t>(target - 1)]);
        CHECK(right == (right_arg >= 1 ? M[static_cast<std::size_t>(right_arg - 1)] : 0));
        CHECK(M[static_cast<std::size_t>(n - 1)] == left + right);
      }
    }
  }
}

TEST_CASE("relabel and DOT output") {
  auto tree = build_T(7);
  auto dot = to_dot(tree, "t7");
  CHECK(dot.rfind("digraph t7 {", 0) == 0);
  CHECK(dot.find("shape=record,label=\"{1|2,3}\"") != std::string::npos);
  CHECK(dot.find("shape=circle,label=\"7\"") != std::string::npos);
  CHECK(dot.find("xlabel=\"s2\"") != std::string::npos);
  auto pruned = prune_T(build_T(20)).tree;
  CHECK(to_dot(pruned).find("{15|18,x}") != std::string::npos);
}

TEST_CASE("difference strings") {
  CHECK(diff_string_D(0) == "1");
  CHECK(diff_string_D(1) == "011");
  CHECK(diff_string_D(2) == "0011011");
  CHECK(diff_string_F(1) == "110110");
  CHECK(diff_string_F(2) == "0110110");
  for (int k = 2; k <= 12; ++k) CHECK("0" + diff_string_F(k) == diff_string_D(k) + "0");
  CHECK(diff_concat_D(12) == "110110011011");
  CHECK(diff_concat_F(13) == "1101100110110");
  CHECK(verify_diff_identity(1 << 14));
  CHECK_THROWS_AS(diff_string_F(0), std::invalid_argument);
}

TEST_CASE("property: F concatenation is the cell-opening pattern of T") {
  CHECK(diff_concat_F(5000) == oracle::t_cell_flags(5000));
}

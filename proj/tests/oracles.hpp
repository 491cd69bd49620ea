#pragma once

// Test-only reference implementations.  Each one is deliberately written
// differently from the library code it checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metafib/spec.hpp"

namespace oracle {

using metafib::RecursionSpec;
using metafib::Value;

// The first twenty Conolly values.
inline const std::vector<Value> kConolly20 = {1, 2, 2, 3, 4, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 9, 10, 10, 11, 12};

// Memoised top-down evaluation; nullopt on any argument outside [1, n-1].
class NaiveEvaluator {
 public:
  explicit NaiveEvaluator(const RecursionSpec& spec) : spec_(spec) {
    for (std::size_t i = 0; i < spec.initial.size(); ++i) memo_[static_cast<Value>(i + 1)] = spec.initial[i];
  }

  std::optional<Value> at(Value n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    if (n < 1) return std::nullopt;
    Value total = 0;
    for (const auto& term : spec_.terms) {
      Value arg = n - term.shift;
      for (Value a : term.offsets) {
        if (n - a < 1 || n - a >= n) return std::nullopt;
        auto inner = at(n - a);
        if (!inner) return std::nullopt;
        arg -= *inner;
      }
      if (arg < 1 || arg >= n) return std::nullopt;
      auto outer = at(arg);
      if (!outer) return std::nullopt;
      total += *outer;
    }
    memo_[n] = total;
    return total;
  }

  // Values 1..n, stopping at the first undefined one.
  std::vector<Value> prefix(Value n) {
    std::vector<Value> out;
    for (Value k = 1; k <= n; ++k) {
      auto v = at(k);
      if (!v) break;
      out.push_back(*v);
    }
    return out;
  }

 private:
  RecursionSpec spec_;
  std::map<Value, Value> memo_;
};

// 1 + the number of times 2 divides m.
inline Value ruler(Value m) {
  Value r = 1;
  while (m % 2 == 0) {
    m /= 2;
    ++r;
  }
  return r;
}

// (alpha, beta)-Conolly values by counting: A(n) is the least m whose
// cumulative frequency reaches n.
inline std::vector<Value> conolly_like(Value alpha, Value beta, Value horizon) {
  std::vector<Value> out;
  Value cumulative = 0;
  Value m = 0;
  for (Value n = 1; n <= horizon; ++n) {
    while (cumulative < n) {
      ++m;
      cumulative += alpha + beta * ruler(m);
    }
    out.push_back(m);
  }
  return out;
}

// Coefficients 1..degree of z/(1-z) prod (1 + z^e_n) by dense polynomial
// multiplication.
inline std::vector<Value> gf_series(Value alpha, Value beta, Value degree) {
  std::vector<Value> poly(static_cast<std::size_t>(degree + 1), 0);
  poly[0] = 1;
  for (Value n = 0;; ++n) {
    const Value e = (Value{1} << n) * alpha + ((Value{1} << (n + 1)) - 1) * beta;
    if (e > degree) break;
    if (e <= 0) continue;
    std::vector<Value> next(poly.size(), 0);
    for (Value i = 0; i <= degree; ++i) {
      next[static_cast<std::size_t>(i)] += poly[static_cast<std::size_t>(i)];
      if (i + e <= degree) next[static_cast<std::size_t>(i + e)] += poly[static_cast<std::size_t>(i)];
    }
    poly = next;
  }
  // multiply by z/(1-z): coefficient k is the sum of poly[0..k-1]
  std::vector<Value> out;
  Value running = 0;
  for (Value k = 1; k <= degree; ++k) {
    running += poly[static_cast<std::size_t>(k - 1)];
    out.push_back(running);
  }
  return out;
}

// Ceiling through floating point; exact for the small values used in tests.
inline Value fceil(Value a, Value b) {
  return static_cast<Value>(std::ceil(static_cast<long double>(a) / static_cast<long double>(b)));
}

// Preorder cell-opening flags of T: 1 when a label opens a leaf cell.
inline std::string t_cell_flags(Value labels) {
  std::vector<std::string> subtree{"", "110"};  // subtree[h], complete of height h
  std::string flags = "110110";
  for (int h = 2; static_cast<Value>(flags.size()) < labels; ++h) {
    subtree.push_back("0" + subtree[static_cast<std::size_t>(h - 1)] + subtree[static_cast<std::size_t>(h - 1)]);
    flags += subtree.back();
  }
  flags.resize(static_cast<std::size_t>(labels));
  return flags;
}

inline std::vector<Value> tree_L(Value horizon) {
  std::vector<Value> out;
  Value count = 0;
  for (char c : t_cell_flags(horizon)) {
    count += c == '1';
    out.push_back(count);
  }
  return out;
}

// Small reproducible generator shared by the property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Value uniform(Value lo, Value hi) { return std::uniform_int_distribution<Value>(lo, hi)(engine_); }
  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

// The known order-2 families for each target, written out element-wise.
struct Family {
  std::vector<Value> s;
  std::vector<std::vector<Value>> a;  // choices for a_1, a_2
  std::vector<Value> t;
  std::vector<std::vector<Value>> b;
};

inline std::vector<std::string> expand(const std::vector<Family>& families) {
  std::vector<std::string> out;
  for (const auto& f : families) {
    for (Value s : f.s)
      for (Value a1 : f.a[0])
        for (Value a2 : f.a[1])
          for (Value t : f.t)
            for (Value b1 : f.b[0])
              for (Value b2 : f.b[1]) {
                out.push_back("<" + std::to_string(s) + ";" + std::to_string(a1) + "," + std::to_string(a2) + ":" +
                              std::to_string(t) + ";" + std::to_string(b1) + "," + std::to_string(b2) + ">");
              }
  }
  return out;
}

inline std::vector<std::string> order2_table(Value alpha, Value beta) {
  if (alpha == -2 && beta == 3) {
    return expand({
        {{0}, {{1}, {3}}, {1}, {{2}, {4}}},
        {{0}, {{2}, {3}}, {3}, {{4}, {7, 8, 9}}},
        {{0}, {{2, 3, 4}, {4, 5, 6}}, {3}, {{2, 3}, {9}}},
        {{0}, {{2, 3, 4}, {4, 5, 6}}, {5}, {{7, 8, 9}, {9, 10, 11}}},
    });
  }
  if (alpha == 0 && beta == 2) {
    return expand({
        {{0}, {{1, 2}, {2, 3}}, {1}, {{1}, {4}}},
        {{0}, {{1, 2}, {2, 3}}, {2}, {{3, 4}, {4, 5}}},
        {{0}, {{3, 4}, {4, 5}}, {4}, {{3}, {10}}},
        {{0}, {{3, 4}, {4, 5}}, {6}, {{9, 10}, {10, 11}}},
    });
  }
  if (alpha == 2 && beta == 1) {
    return expand({
        {{0}, {{1}, {1}}, {1}, {{2}, {2}}},
        {{0}, {{1, 2}, {2, 3}}, {1}, {{1}, {2}}},
        {{0}, {{1, 2}, {2, 3}}, {2}, {{1}, {5, 6}}},
        {{0}, {{1, 2}, {2, 3}}, {2}, {{2}, {4, 5}}},
        {{0}, {{1, 2}, {2, 3}}, {3}, {{4, 5}, {5, 6}}},
    });
  }
  return {};
}

}  // namespace oracle

#include "metafib/reference.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "metafib/analysis.hpp"

namespace metafib {

namespace {

void require_pair(Value alpha, Value beta) {
  if (beta < 0 || alpha + beta <= 0) {
    throw std::invalid_argument("(" + std::to_string(alpha) + "," + std::to_string(beta) +
                                ") needs beta >= 0 and alpha + beta > 0");
  }
}

}  // namespace

std::vector<Value> definitional_sequence(Value alpha, Value beta, Value horizon) {
  require_pair(alpha, beta);
  if (horizon < 0) throw std::invalid_argument("negative horizon");
  std::vector<Value> values;
  values.reserve(static_cast<std::size_t>(horizon));
  for (Value m = 1; static_cast<Value>(values.size()) < horizon; ++m) {
    Value slots = alpha + beta * ruler(m);
    for (Value k = 0; k < slots && static_cast<Value>(values.size()) < horizon; ++k) {
      values.push_back(m);
    }
  }
  return values;
}

std::vector<AdmissiblePair> admissible_pairs(Value order_p) {
  if (order_p < 1) throw std::invalid_argument("order must be positive");
  std::vector<AdmissiblePair> pairs;
  for (Value beta = 0; beta < 2 * order_p; ++beta) {
    pairs.push_back({2 * order_p - 2 * beta, beta, order_p});
  }
  return pairs;
}

Value canonical_seed_length(Value alpha, Value beta) {
  const Value p = alpha / 2 + beta;
  const Value gamma = alpha + beta;
  const Value largest_offset = std::max<Value>(2 * p - 1, gamma + 2 * p - 1);
  return std::max(4 * alpha + 5 * beta, largest_offset + 1);
}

RecursionSpec canonical_recursion(Value alpha, Value beta) {
  require_pair(alpha, beta);
  if (alpha % 2 != 0) {
    throw std::invalid_argument("canonical recursion needs an even alpha, got " + std::to_string(alpha));
  }
  const Value p = alpha / 2 + beta;
  const Value gamma = alpha + beta;
  RecursionTerm first{0, {}};
  RecursionTerm second{gamma, {}};
  for (Value j = 0; j < p; ++j) {
    first.offsets.push_back(2 * j + 1);
    second.offsets.push_back(gamma + 2 * j + 1);
  }
  RecursionSpec spec{{first, second}, {}};
  spec.initial = definitional_sequence(alpha, beta, canonical_seed_length(alpha, beta));
  return spec;
}

}  // namespace metafib

#pragma once

#include <vector>

#include "metafib/spec.hpp"

namespace metafib {

/// An (alpha, beta) pair allowed for 2-ary order-p recursions:
/// alpha + 2 beta = 2p, beta >= 0, alpha + beta > 0.
struct AdmissiblePair {
  Value alpha = 0;
  Value beta = 0;
  Value order_p = 0;

  friend bool operator==(const AdmissiblePair&, const AdmissiblePair&) = default;
};

/// The (alpha, beta)-Conolly sequence truncated at `horizon`, built by
/// giving value m exactly alpha + beta * ruler(m) slots.
std::vector<Value> definitional_sequence(Value alpha, Value beta, Value horizon);

/// The 2p pairs (2p - 2 beta, beta), beta = 0 .. 2p-1.
std::vector<AdmissiblePair> admissible_pairs(Value order_p);

/// Number of seed terms used by canonical_recursion: 4 alpha + 5 beta, and
/// never fewer than the largest offset plus one.
Value canonical_seed_length(Value alpha, Value beta);

/// <0;1,3,...,2p-1 : g;g+1,g+3,...,g+2p-1> with g = alpha + beta, seeded
/// with canonical_seed_length terms of the definitional sequence.
RecursionSpec canonical_recursion(Value alpha, Value beta);

}  // namespace metafib

#pragma once

#include <optional>
#include <vector>

#include "metafib/engine.hpp"
#include "metafib/spec.hpp"

namespace metafib {

/// Several solutions of one recursion, each given by its own initial
/// conditions (all of the same length).  `spec.initial` is ignored.
struct WeaveInput {
  RecursionSpec spec;
  std::vector<std::vector<Value>> inits;
};

struct WeaveResult {
  RecursionSpec spec;         // every parameter times m, seeded with C(1..m r)
  std::vector<Value> values;  // C(1..horizon)
};

/// Weaves m = inits.size() solutions X_1..X_m into C(mn - m + q) = m X_q(n).
/// The woven sequence is re-checked against the scaled recursion by direct
/// substitution at every index up to `horizon`; a failed check throws
/// std::runtime_error.  Throws std::runtime_error if an input solution dies
/// before ceil(horizon / m).
WeaveResult weave_fixed_order(const WeaveInput& input, Value horizon);

/// <ms;(ma)^m : mt;(mb)^m> with every initial value repeated m times.
/// Requires a uniform order-1 recursion and m >= 2.
RecursionSpec interleave_order_multiplying(const RecursionSpec& spec, Value m);

/// <ms; ma-alpha_1,...,ma-alpha_m : mt; mb-beta_1,...,mb-beta_m> with m-fold
/// initial conditions.  Offsets inside each term come out sorted.  Requires a
/// 2-ary order-1 recursion and i-m <= alpha_i, beta_i < i for i = 1..m.
/// Well-definedness is not checked here; see check_interleaving.
RecursionSpec perturb(const RecursionSpec& spec, Value m, const std::vector<Value>& alphas,
                      const std::vector<Value>& betas);

/// Whether evaluate(derived, m N) is evaluate(base, N) with each term
/// repeated m times.
struct InterleaveReport {
  bool base_alive = false;
  bool derived_alive = false;
  bool interleaves = false;
  std::optional<Death> derived_death;
  Value first_mismatch = 0;  // 1-based index into the derived sequence, 0 if none
};

InterleaveReport check_interleaving(const RecursionSpec& base, const RecursionSpec& derived, Value m,
                                    Value n);

/// Adds p_i to the shift of term i and alpha to every offset.  A nonempty
/// initial list is extended to c + alpha values of ceil(n / alpha).
RecursionSpec shift_alpha_zero(const RecursionSpec& spec, Value alpha);

}  // namespace metafib

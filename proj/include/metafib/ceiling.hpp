#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metafib/box.hpp"
#include "metafib/spec.hpp"

namespace metafib {

/// z = modulus * quo + rem with 0 <= rem < modulus, for any sign of z.
struct QuoRem {
  Value quo = 0;
  Value rem = 0;
  Value modulus = 1;
};

QuoRem quorem(Value z, Value modulus);

/// Mathematical ceiling of a / b for b > 0.
Value ceil_div(Value a, Value b);

struct CeilingFailure {
  int condition = 0;             // 1, 2 or 3
  std::optional<Value> witness;  // the j that breaks condition 1 or 2; empty for 3
};

/// Whether ceil(n / 2p) formally satisfies a 2-ary order-p recursion, judged
/// by the three remainder/quotient conditions.  When satisfied, `d` is the
/// integer of condition 3 and `swapped` tells whether the roles of the two
/// terms had to be exchanged to find it.
struct CeilingVerdict {
  bool satisfied = false;
  std::optional<CeilingFailure> failure;
  std::optional<Value> d;
  bool swapped = false;
};

/// Requires a 2-ary recursion whose terms both have order p.  Parameters may
/// be any integers.
CeilingVerdict check_conditions(const RecursionSpec& spec, Value p);

/// 4p + the largest |parameter|: the smallest window formal_satisfy_oracle
/// accepts.
Value default_oracle_window(const RecursionSpec& spec, Value p);

/// Brute force: checks
///   ceil(n/2p) = ceil((n - s - sum ceil((n-a_i)/2p)) / 2p)
///              + ceil((n - t - sum ceil((n-b_i)/2p)) / 2p)
/// for every n in [-window, window].  Throws std::invalid_argument when the
/// window is below default_oracle_window.
bool formal_satisfy_oracle(const RecursionSpec& spec, Value p, Value window);

/// The two summands h_1(n), h_2(n) of the right-hand side above.
std::pair<Value, Value> ceiling_halves(const RecursionSpec& spec, Value p, Value n);

/// Order 1 shortcut: a and b odd and 2(s + t) = a + b.
bool check_p1(const RecursionSpec& spec);

/// Order 2 shortcut: the odd kappa with a+b within 1 of 4(s+kappa) and c+d
/// within 1 of 4(t-kappa), no offset divisible by 4.  Empty if none exists.
std::optional<Value> check_p2_kappa(const RecursionSpec& spec);

/// max{2p + 2s, 2p + 2t, a_i, b_i}: enough ceiling values to seed the
/// recursion so that it generates ceil(n / 2p).  Requires satisfied
/// conditions and nonnegative parameters.
Value min_initial_conditions(const RecursionSpec& spec, Value p);

/// First c values of ceil(n / 2p).
std::vector<Value> ceiling_prefix(Value p, Value c);

struct CeilingSweepOptions {
  Value p = 1;
  ParameterBox box;
  int jobs = 1;
  bool with_oracle = false;  // also run the brute-force oracle on every tuple
  bool keep_all = false;     // keep every row, not only the satisfied ones
  Value window = 0;          // oracle window; 0 means the per-spec default
};

struct CeilingSweepRow {
  RecursionSpec spec;
  CeilingVerdict verdict;
  std::optional<bool> oracle;
  std::optional<bool> shortcut;  // check_p1 / check_p2_kappa, for p = 1, 2
  std::optional<Value> kappa;
};

struct CeilingSweepReport {
  std::uint64_t examined = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t oracle_disagreements = 0;
  std::uint64_t shortcut_disagreements = 0;
  std::vector<CeilingSweepRow> rows;  // in enumeration order
};

/// Every ordered tuple (s, t, a_1..a_p, b_1..b_p) of the box, checked in
/// parallel and reported in enumeration order.
CeilingSweepReport ceiling_sweep(const CeilingSweepOptions& options);

}  // namespace metafib

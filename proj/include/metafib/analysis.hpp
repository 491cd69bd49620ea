#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metafib/spec.hpp"

namespace metafib {

struct Rational {
  Value num = 0;
  Value den = 1;

  Rational() = default;
  Rational(Value n, Value d = 1);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// 1 + the 2-adic valuation of m.  Throws for m < 1.
Value ruler(Value m);

/// True iff every successive difference is 0 or 1.
bool is_slow(std::span<const Value> values);

/// Occurrence counts of a nondecreasing sequence.  Only values whose count
/// can no longer change are recorded: the last value seen is excluded.
struct FrequencyProfile {
  std::vector<Value> counts;  // counts[m-1] = phi(m)
  Value complete_upto = 0;

  Value count(Value m) const { return counts.at(static_cast<std::size_t>(m - 1)); }
};

/// Throws std::invalid_argument on a decreasing step.  Values below 1 are
/// not counted.
FrequencyProfile frequency(std::span<const Value> values);

struct ConollySignature {
  Value alpha = 0;
  Value beta = 0;

  Rational order_p() const { return Rational(alpha + 2 * beta, 2); }
  Rational slope() const { return Rational(1, alpha + 2 * beta); }
  /// -alpha == beta > 0: a frequency pattern that cannot belong to a slow
  /// sequence.  Reported by fit_conolly but flagged.
  bool degenerate() const { return beta > 0 && alpha == -beta; }

  friend bool operator==(const ConollySignature&, const ConollySignature&) = default;
};

/// Finds (alpha, beta) with phi(m) = alpha + beta * ruler(m) on the whole
/// complete range.  Empty when no pair fits or fewer than four values are
/// complete.
std::optional<ConollySignature> fit_conolly(const FrequencyProfile& profile);

struct RatioCheckpoint {
  Value n = 0;
  Value value = 0;
  double ratio = 0.0;
};

struct RatioReport {
  Rational final_ratio;  // A(N) / N
  Rational even_ratio;   // at the last even index
  Rational odd_ratio;    // at the last odd index
  std::vector<RatioCheckpoint> checkpoints;  // N, N/2, N/4, ...
};

/// Requires at least 1000 values.  No limit is asserted; the checkpoints
/// only describe the trend.
RatioReport ratio_estimate(std::span<const Value> values);

/// Coefficients of z^1..z^degree in
///   z/(1-z) * prod_{n>=0} (1 + z^(2^n alpha + (2^(n+1)-1) beta)).
std::vector<Value> gf_coefficients(const ConollySignature& signature, Value degree);

}  // namespace metafib

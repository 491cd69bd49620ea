#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "metafib/spec.hpp"

namespace metafib {

/// First argument that left [1, n-1] while computing R(index).
struct Death {
  Value index = 0;
  std::size_t term = 0;  // 1-based summand number
  Value argument = 0;

  friend bool operator==(const Death&, const Death&) = default;
};

struct EvalResult {
  std::vector<Value> values;  // values[n-1] = R(n)
  std::optional<Death> death;
  Value horizon = 0;

  bool alive() const { return !death.has_value(); }
  Value at(Value n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Runs the recursion forward from its initial conditions up to `horizon`.
/// Arguments outside [1, n-1] end the run with a death record; a value
/// outside the 64-bit range throws OverflowError.
EvalResult evaluate(const RecursionSpec& spec, Value horizon);

/// Evaluation with a reusable buffer and optional early exit on the first
/// value differing from a target prefix.  One instance per thread.
class Evaluator {
 public:
  struct Outcome {
    std::size_t computed = 0;  // number of values now in the buffer
    std::optional<Death> death;
    bool matched = true;  // every computed value agreed with `expected`
  };

  /// `initial` seeds R(1..c); values past `expected.size()` are not compared.
  Outcome run(const RecursionSpec& spec, std::span<const Value> initial, std::size_t horizon,
              std::span<const Value> expected = {});

  std::span<const Value> values() const { return {buffer_.data(), size_}; }

 private:
  std::vector<Value> buffer_;
  std::size_t size_ = 0;
};

}  // namespace metafib

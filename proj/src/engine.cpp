#include "metafib/engine.hpp"

#include <string>

namespace metafib {

namespace {

Value checked_sub(Value a, Value b, Value n) {
  Value out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError("argument overflow while computing R(" + std::to_string(n) + ")");
  }
  return out;
}

Value checked_add(Value a, Value b, Value n) {
  Value out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("value overflow at R(" + std::to_string(n) + ")");
  }
  return out;
}

}  // namespace

Evaluator::Outcome Evaluator::run(const RecursionSpec& spec, std::span<const Value> initial,
                                  std::size_t horizon, std::span<const Value> expected) {
  if (spec.terms.empty()) throw std::invalid_argument("recursion has no terms");
  if (initial.empty()) throw std::invalid_argument("evaluation needs at least one initial condition");
  if (horizon < initial.size()) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) + " is shorter than the " +
                                std::to_string(initial.size()) + " initial conditions");
  }
  if (buffer_.size() < horizon) buffer_.resize(horizon);

  Outcome outcome;
  size_ = 0;
  auto agree = [&](std::size_t idx) { return idx >= expected.size() || buffer_[idx] == expected[idx]; };

  for (Value v : initial) {
    buffer_[size_] = v;
    if (!agree(size_)) outcome.matched = false;
    ++size_;
  }
  if (!outcome.matched && !expected.empty()) {
    outcome.computed = size_;
    return outcome;
  }

  // R(k) lives at buffer_[k - 1].
  for (std::size_t idx = size_; idx < horizon; ++idx) {
    const Value n = static_cast<Value>(idx + 1);
    Value sum = 0;
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
      const RecursionTerm& term = spec.terms[i];
      Value arg = checked_sub(n, term.shift, n);
      for (Value a : term.offsets) {
        Value inner = checked_sub(n, a, n);
        if (inner < 1 || inner >= n) {
          outcome.death = Death{n, i + 1, inner};
          outcome.computed = size_;
          return outcome;
        }
        arg = checked_sub(arg, buffer_[static_cast<std::size_t>(inner - 1)], n);
      }
      if (arg < 1 || arg >= n) {
        outcome.death = Death{n, i + 1, arg};
        outcome.computed = size_;
        return outcome;
      }
      sum = checked_add(sum, buffer_[static_cast<std::size_t>(arg - 1)], n);
    }
    buffer_[idx] = sum;
    ++size_;
    if (!agree(idx)) {
      outcome.matched = false;
      break;
    }
  }
  outcome.computed = size_;
  return outcome;
}

EvalResult evaluate(const RecursionSpec& spec, Value horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  Evaluator evaluator;
  auto outcome = evaluator.run(spec, spec.initial, static_cast<std::size_t>(horizon));
  EvalResult result;
  auto values = evaluator.values();
  result.values.assign(values.begin(), values.end());
  result.death = outcome.death;
  result.horizon = horizon;
  return result;
}

}  // namespace metafib

#include "metafib/transforms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace metafib {

namespace {

void require_order_one(const RecursionSpec& spec, const char* what) {
  if (spec.terms.empty() || !spec.uniform_order() || spec.order() != 1) {
    throw std::invalid_argument(std::string(what) + " needs an order-1 recursion");
  }
}

std::vector<Value> repeat_each(const std::vector<Value>& values, Value m) {
  std::vector<Value> out;
  out.reserve(values.size() * static_cast<std::size_t>(m));
  for (Value v : values) out.insert(out.end(), static_cast<std::size_t>(m), v);
  return out;
}

Value ceil_div_positive(Value a, Value b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace

WeaveResult weave_fixed_order(const WeaveInput& input, Value horizon) {
  const Value m = static_cast<Value>(input.inits.size());
  if (m < 2) throw std::invalid_argument("weaving needs at least two solutions");
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const std::size_t r = input.inits.front().size();
  for (const auto& init : input.inits) {
    if (init.size() != r) throw std::invalid_argument("initial-condition vectors differ in length");
  }
  if (r == 0) throw std::invalid_argument("initial-condition vectors are empty");

  const Value per_solution = std::max<Value>(ceil_div_positive(horizon, m), static_cast<Value>(r));
  std::vector<std::vector<Value>> solutions;
  for (std::size_t q = 0; q < input.inits.size(); ++q) {
    EvalResult run = evaluate(input.spec.with_initial(input.inits[q]), per_solution);
    if (!run.alive()) {
      throw std::runtime_error("solution " + std::to_string(q + 1) + " dies at n=" +
                               std::to_string(run.death->index));
    }
    solutions.push_back(std::move(run.values));
  }

  WeaveResult result;
  for (const auto& term : input.spec.terms) {
    RecursionTerm scaled{term.shift * m, {}};
    for (Value a : term.offsets) scaled.offsets.push_back(a * m);
    result.spec.terms.push_back(std::move(scaled));
  }
  // C(m(n-1) + q) = m X_q(n), q = 1..m
  const Value full = per_solution * m;
  std::vector<Value> woven(static_cast<std::size_t>(full));
  for (Value n = 1; n <= per_solution; ++n) {
    for (Value q = 1; q <= m; ++q) {
      woven[static_cast<std::size_t>(m * (n - 1) + q - 1)] =
          m * solutions[static_cast<std::size_t>(q - 1)][static_cast<std::size_t>(n - 1)];
    }
  }
  woven.resize(static_cast<std::size_t>(horizon));
  const Value seeded = std::min<Value>(m * static_cast<Value>(r), horizon);
  result.spec.initial.assign(woven.begin(), woven.begin() + seeded);

  auto C = [&](Value k) { return woven[static_cast<std::size_t>(k - 1)]; };
  for (Value n = seeded + 1; n <= horizon; ++n) {
    Value sum = 0;
    for (const auto& term : result.spec.terms) {
      Value arg = n - term.shift;
      for (Value a : term.offsets) {
        Value inner = n - a;
        if (inner < 1 || inner >= n) {
          throw std::runtime_error("woven sequence leaves the recursion's domain at n=" + std::to_string(n));
        }
        arg -= C(inner);
      }
      if (arg < 1 || arg >= n) {
        throw std::runtime_error("woven sequence leaves the recursion's domain at n=" + std::to_string(n));
      }
      sum += C(arg);
    }
    if (sum != C(n)) {
      throw std::runtime_error("woven sequence fails the scaled recursion at n=" + std::to_string(n));
    }
  }
  result.values = std::move(woven);
  return result;
}

RecursionSpec interleave_order_multiplying(const RecursionSpec& spec, Value m) {
  require_order_one(spec, "interleaving");
  if (m < 2) throw std::invalid_argument("interleaving needs m >= 2, got " + std::to_string(m));
  RecursionSpec out;
  for (const auto& term : spec.terms) {
    out.terms.push_back({m * term.shift, std::vector<Value>(static_cast<std::size_t>(m), m * term.offsets[0])});
  }
  out.initial = repeat_each(spec.initial, m);
  return out;
}

RecursionSpec perturb(const RecursionSpec& spec, Value m, const std::vector<Value>& alphas,
                      const std::vector<Value>& betas) {
  require_order_one(spec, "perturbation");
  if (spec.arity() != 2) throw std::invalid_argument("perturbation needs a 2-ary recursion");
  if (m < 1) throw std::invalid_argument("perturbation needs m >= 1");
  if (static_cast<Value>(alphas.size()) != m || static_cast<Value>(betas.size()) != m) {
    throw std::invalid_argument("perturbation needs exactly m values for each term");
  }
  auto check = [&](const std::vector<Value>& deltas, const char* name) {
    for (Value i = 1; i <= m; ++i) {
      Value d = deltas[static_cast<std::size_t>(i - 1)];
      if (d < i - m || d >= i) {
        throw std::invalid_argument(std::string(name) + "_" + std::to_string(i) + " = " + std::to_string(d) +
                                    " is outside [" + std::to_string(i - m) + ", " + std::to_string(i - 1) +
                                    "]");
      }
    }
  };
  check(alphas, "alpha");
  check(betas, "beta");

  RecursionSpec out;
  const std::vector<Value>* deltas[2] = {&alphas, &betas};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& term = spec.terms[k];
    RecursionTerm scaled{m * term.shift, {}};
    for (Value d : *deltas[k]) scaled.offsets.push_back(m * term.offsets[0] - d);
    std::sort(scaled.offsets.begin(), scaled.offsets.end());
    out.terms.push_back(std::move(scaled));
  }
  out.initial = repeat_each(spec.initial, m);
  return out;
}

InterleaveReport check_interleaving(const RecursionSpec& base, const RecursionSpec& derived, Value m,
                                    Value n) {
  if (m < 1 || n < 1) throw std::invalid_argument("check_interleaving needs positive m and n");
  InterleaveReport report;
  EvalResult b = evaluate(base, n);
  EvalResult d = evaluate(derived, m * n);
  report.base_alive = b.alive();
  report.derived_alive = d.alive();
  report.derived_death = d.death;
  const std::size_t limit = std::min(d.values.size(), b.values.size() * static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < limit; ++k) {
    if (d.values[k] != b.values[k / static_cast<std::size_t>(m)]) {
      report.first_mismatch = static_cast<Value>(k + 1);
      break;
    }
  }
  report.interleaves = report.base_alive && report.derived_alive && report.first_mismatch == 0;
  return report;
}

RecursionSpec shift_alpha_zero(const RecursionSpec& spec, Value alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be positive");
  RecursionSpec out;
  for (const auto& term : spec.terms) {
    RecursionTerm shifted{term.shift + static_cast<Value>(term.order()), {}};
    for (Value a : term.offsets) shifted.offsets.push_back(a + alpha);
    out.terms.push_back(std::move(shifted));
  }
  if (!spec.initial.empty()) {
    out.initial = spec.initial;
    const Value target = static_cast<Value>(spec.initial.size()) + alpha;
    for (Value n = static_cast<Value>(out.initial.size()) + 1; n <= target; ++n) {
      out.initial.push_back(ceil_div_positive(n, alpha));
    }
  }
  return out;
}

}  // namespace metafib

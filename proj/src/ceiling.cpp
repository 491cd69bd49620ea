#include "metafib/ceiling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace metafib {

namespace {

void require_shape(const RecursionSpec& spec, Value p) {
  if (p < 1) throw std::invalid_argument("order p must be positive");
  if (spec.arity() != 2) throw std::invalid_argument("ceiling checks need a 2-ary recursion");
  for (const auto& term : spec.terms) {
    if (static_cast<Value>(term.order()) != p) {
      throw std::invalid_argument("both terms must have order " + std::to_string(p));
    }
  }
}

Value floor_mod(Value a, Value m) { return ((a % m) + m) % m; }

// First j in 0..p-1 breaking "at most j remainders are <= j and at most j
// are >= 2p - j".
std::optional<Value> remainder_witness(const std::vector<Value>& offsets, Value p) {
  for (Value j = 0; j < p; ++j) {
    Value low = 0;
    Value high = 0;
    for (Value a : offsets) {
      const Value r = quorem(a, 2 * p).rem;
      if (r <= j) ++low;
      if (r >= 2 * p - j) ++high;
    }
    if (low > j || high > j) return j;
  }
  return std::nullopt;
}

Value half(const RecursionTerm& term, Value p, Value n) {
  Value arg = n - term.shift;
  for (Value a : term.offsets) arg -= ceil_div(n - a, 2 * p);
  return ceil_div(arg, 2 * p);
}

}  // namespace

QuoRem quorem(Value z, Value modulus) {
  if (modulus < 1) throw std::invalid_argument("modulus must be positive");
  const Value rem = floor_mod(z, modulus);
  return {(z - rem) / modulus, rem, modulus};
}

Value ceil_div(Value a, Value b) {
  if (b < 1) throw std::invalid_argument("ceil_div needs a positive divisor");
  const Value q = a / b;
  return (a % b > 0) ? q + 1 : q;
}

CeilingVerdict check_conditions(const RecursionSpec& spec, Value p) {
  require_shape(spec, p);
  CeilingVerdict verdict;
  for (int k = 0; k < 2; ++k) {
    if (auto j = remainder_witness(spec.terms[static_cast<std::size_t>(k)].offsets, p)) {
      verdict.failure = CeilingFailure{k + 1, j};
      return verdict;
    }
  }
  auto quotient_sum = [&](const RecursionTerm& term) {
    Value sum = -term.shift;
    for (Value a : term.offsets) sum += quorem(a, 2 * p).quo;
    return sum;
  };
  const Value sa = quotient_sum(spec.terms[0]);
  const Value sb = quotient_sum(spec.terms[1]);
  if (sa + sb == -p) {
    if (floor_mod(sa, 2 * p) == 0) {
      verdict.satisfied = true;
      verdict.d = sa / (2 * p);
      return verdict;
    }
    if (floor_mod(sb, 2 * p) == 0) {
      verdict.satisfied = true;
      verdict.d = sb / (2 * p);
      verdict.swapped = true;
      return verdict;
    }
  }
  verdict.failure = CeilingFailure{3, std::nullopt};
  return verdict;
}

Value default_oracle_window(const RecursionSpec& spec, Value p) {
  Value largest = 0;
  for (const auto& term : spec.terms) {
    largest = std::max(largest, term.shift < 0 ? -term.shift : term.shift);
    for (Value a : term.offsets) largest = std::max(largest, a < 0 ? -a : a);
  }
  return 4 * p + largest;
}

std::pair<Value, Value> ceiling_halves(const RecursionSpec& spec, Value p, Value n) {
  require_shape(spec, p);
  return {half(spec.terms[0], p, n), half(spec.terms[1], p, n)};
}

bool formal_satisfy_oracle(const RecursionSpec& spec, Value p, Value window) {
  require_shape(spec, p);
  const Value minimum = default_oracle_window(spec, p);
  if (window < minimum) {
    throw std::invalid_argument("oracle window " + std::to_string(window) + " is below the minimum " +
                                std::to_string(minimum));
  }
  for (Value n = -window; n <= window; ++n) {
    if (ceil_div(n, 2 * p) != half(spec.terms[0], p, n) + half(spec.terms[1], p, n)) return false;
  }
  return true;
}

bool check_p1(const RecursionSpec& spec) {
  require_shape(spec, 1);
  const Value s = spec.terms[0].shift;
  const Value a = spec.terms[0].offsets[0];
  const Value t = spec.terms[1].shift;
  const Value b = spec.terms[1].offsets[0];
  return floor_mod(a, 2) == 1 && floor_mod(b, 2) == 1 && 2 * (s + t) == a + b;
}

std::optional<Value> check_p2_kappa(const RecursionSpec& spec) {
  require_shape(spec, 2);
  for (const auto& term : spec.terms) {
    for (Value a : term.offsets) {
      if (floor_mod(a, 4) == 0) return std::nullopt;
    }
  }
  const Value s = spec.terms[0].shift;
  const Value t = spec.terms[1].shift;
  const Value ab = spec.terms[0].offsets[0] + spec.terms[0].offsets[1];
  const Value cd = spec.terms[1].offsets[0] + spec.terms[1].offsets[1];
  // The multiple of 4 within distance 1 of a + b, if any.
  Value nearest = 0;
  switch (floor_mod(ab, 4)) {
    case 0: nearest = ab; break;
    case 1: nearest = ab - 1; break;
    case 3: nearest = ab + 1; break;
    default: return std::nullopt;
  }
  const Value kappa = nearest / 4 - s;
  if (floor_mod(kappa, 2) != 1) return std::nullopt;
  const Value target = 4 * (t - kappa);
  if (cd < target - 1 || cd > target + 1) return std::nullopt;
  return kappa;
}

Value min_initial_conditions(const RecursionSpec& spec, Value p) {
  if (!check_conditions(spec, p).satisfied) {
    throw std::invalid_argument("the ceiling conditions do not hold for " + print_spec(spec));
  }
  validate_spec(spec);
  Value c = std::max(2 * p + 2 * spec.terms[0].shift, 2 * p + 2 * spec.terms[1].shift);
  for (const auto& term : spec.terms) {
    for (Value a : term.offsets) c = std::max(c, a);
  }
  return c;
}

std::vector<Value> ceiling_prefix(Value p, Value c) {
  std::vector<Value> values;
  for (Value n = 1; n <= c; ++n) values.push_back(ceil_div(n, 2 * p));
  return values;
}

CeilingSweepReport ceiling_sweep(const CeilingSweepOptions& options) {
  const Value p = options.p;
  if (p < 1) throw std::invalid_argument("order p must be positive");
  const ParameterBox& box = options.box;
  CeilingSweepReport report;
  if (box.empty()) return report;

  // Mixed radix over (s, t, a_1..a_p, b_1..b_p), last digit fastest.
  std::vector<Range> digits{box.s, box.t};
  for (Value i = 0; i < p; ++i) digits.push_back(box.a);
  for (Value i = 0; i < p; ++i) digits.push_back(box.b);
  std::uint64_t total = 1;
  for (const Range& r : digits) {
    const auto size = static_cast<std::uint64_t>(r.size());
    if (total > (std::uint64_t{1} << 40) / size) throw std::invalid_argument("sweep box is too large");
    total *= size;
  }

  auto decode = [&](std::uint64_t index) {
    std::vector<Value> values(digits.size());
    for (std::size_t k = digits.size(); k-- > 0;) {
      const auto size = static_cast<std::uint64_t>(digits[k].size());
      values[k] = digits[k].lo + static_cast<Value>(index % size);
      index /= size;
    }
    RecursionSpec spec;
    spec.terms.push_back({values[0], {values.begin() + 2, values.begin() + 2 + p}});
    spec.terms.push_back({values[1], {values.begin() + 2 + p, values.end()}});
    return spec;
  };

  struct Chunk {
    std::uint64_t satisfied = 0;
    std::uint64_t oracle_disagreements = 0;
    std::uint64_t shortcut_disagreements = 0;
    std::vector<CeilingSweepRow> rows;
  };
  constexpr std::uint64_t kChunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<Chunk> results(chunks);

  detail::for_each_chunk(chunks, options.jobs, [&](std::size_t c) {
    Chunk& out = results[c];
    const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
    for (std::uint64_t index = c * kChunk; index < end; ++index) {
      CeilingSweepRow row;
      row.spec = decode(index);
      row.verdict = check_conditions(row.spec, p);
      if (row.verdict.satisfied) ++out.satisfied;
      if (options.with_oracle) {
        const Value window = std::max(options.window, default_oracle_window(row.spec, p));
        row.oracle = formal_satisfy_oracle(row.spec, p, window);
        if (*row.oracle != row.verdict.satisfied) ++out.oracle_disagreements;
      }
      if (p == 1) {
        row.shortcut = check_p1(row.spec);
      } else if (p == 2) {
        row.kappa = check_p2_kappa(row.spec);
        row.shortcut = row.kappa.has_value();
      }
      if (row.shortcut && *row.shortcut != row.verdict.satisfied) ++out.shortcut_disagreements;
      if (options.keep_all || row.verdict.satisfied) out.rows.push_back(std::move(row));
    }
  });

  report.examined = total;
  for (auto& chunk : results) {
    report.satisfied += chunk.satisfied;
    report.oracle_disagreements += chunk.oracle_disagreements;
    report.shortcut_disagreements += chunk.shortcut_disagreements;
    std::move(chunk.rows.begin(), chunk.rows.end(), std::back_inserter(report.rows));
  }
  return report;
}

}  // namespace metafib

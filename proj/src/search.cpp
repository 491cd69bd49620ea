#include "metafib/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "metafib/ceiling.hpp"
#include "metafib/reference.hpp"
#include "parallel.hpp"

namespace metafib {

namespace {

using Tuple = std::vector<Value>;

// All nondecreasing p-tuples drawn from `range`, in lexicographic order.
std::vector<Tuple> nondecreasing_tuples(const Range& range, Value p) {
  std::vector<Tuple> out;
  if (range.empty() || p < 1) return out;
  Tuple current(static_cast<std::size_t>(p), range.lo);
  while (true) {
    out.push_back(current);
    std::size_t k = current.size();
    while (k > 0 && current[k - 1] == range.hi) --k;
    if (k == 0) break;
    const Value next = current[k - 1] + 1;
    std::fill(current.begin() + static_cast<std::ptrdiff_t>(k - 1), current.end(), next);
  }
  return out;
}

// Flat index space over (s, t, a-tuple, b-tuple), last component fastest.
struct BoxIndex {
  ParameterBox box;
  std::vector<Tuple> a;
  std::vector<Tuple> b;
  bool dedup = true;

  BoxIndex(const SearchConfig& config)
      : box(config.box),
        a(nondecreasing_tuples(config.box.a, config.order)),
        b(nondecreasing_tuples(config.box.b, config.order)),
        dedup(config.dedup) {}

  std::uint64_t size() const {
    if (box.empty()) return 0;
    return static_cast<std::uint64_t>(box.s.size()) * static_cast<std::uint64_t>(box.t.size()) * a.size() *
           b.size();
  }

  // False when the index is skipped by deduplication.
  bool decode(std::uint64_t index, RecursionSpec& spec) const {
    const std::size_t ib = static_cast<std::size_t>(index % b.size());
    index /= b.size();
    const std::size_t ia = static_cast<std::size_t>(index % a.size());
    index /= a.size();
    const Value t = box.t.lo + static_cast<Value>(index % static_cast<std::uint64_t>(box.t.size()));
    index /= static_cast<std::uint64_t>(box.t.size());
    const Value s = box.s.lo + static_cast<Value>(index);
    if (dedup && s == t && a[ia] > b[ib]) return false;
    spec.terms.resize(2);
    spec.terms[0].shift = s;
    spec.terms[0].offsets = a[ia];
    spec.terms[1].shift = t;
    spec.terms[1].offsets = b[ib];
    spec.initial.clear();
    return true;
  }
};

}  // namespace

void validate_search(const SearchConfig& config) {
  if (config.order < 1) throw std::invalid_argument("order must be positive");
  if (config.box.empty()) throw std::invalid_argument("search box has an empty range");
  if (config.seed_len < 1) throw std::invalid_argument("seed length must be positive");
  if (config.seed_len > config.compare_len) {
    throw std::invalid_argument("seed length exceeds comparison length");
  }
  if (config.alpha + 2 * config.beta != 2 * config.order || config.beta < 0 ||
      config.alpha + config.beta <= 0) {
    throw std::invalid_argument("(" + std::to_string(config.alpha) + "," + std::to_string(config.beta) +
                                ") is not an admissible pair for order " + std::to_string(config.order));
  }
  if (config.jobs < 1) throw std::invalid_argument("jobs must be positive");
}

ParameterBox default_search_box() { return {{0, 0}, {0, 10}, {1, 12}, {1, 30}}; }

std::uint64_t count_box(const SearchConfig& config) {
  std::uint64_t count = 0;
  for_each_in_box(config, [&](const RecursionSpec&) { ++count; });
  return count;
}

void for_each_in_box(const SearchConfig& config, const std::function<void(const RecursionSpec&)>& visit) {
  const BoxIndex index(config);
  RecursionSpec spec;
  for (std::uint64_t i = 0; i < index.size(); ++i) {
    if (index.decode(i, spec)) visit(spec);
  }
}

std::vector<RecursionSpec> enumerate_box(const SearchConfig& config) {
  std::vector<RecursionSpec> specs;
  for_each_in_box(config, [&](const RecursionSpec& spec) { specs.push_back(spec); });
  return specs;
}

SearchReport run_search(const SearchConfig& config) {
  validate_search(config);
  const BoxIndex index(config);
  const Value p = config.order;
  const bool ceiling_target = config.beta == 0;
  const std::vector<Value> target = definitional_sequence(config.alpha, config.beta, config.compare_len);
  const std::span<const Value> seed(target.data(), static_cast<std::size_t>(config.seed_len));
  const ConollySignature signature{config.alpha, config.beta};

  struct Chunk {
    std::vector<SearchHit> hits;
    std::vector<DeathRecord> deaths;
    std::uint64_t examined = 0;
    std::uint64_t died = 0;
    std::uint64_t mismatched = 0;
  };
  constexpr std::uint64_t kChunk = 2048;
  const std::uint64_t total = index.size();
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<Chunk> results(chunks);

  detail::for_each_chunk(chunks, config.jobs, [&](std::size_t c) {
    Chunk& out = results[c];
    Evaluator evaluator;
    RecursionSpec spec;
    std::vector<Value> ceiling_seed;
    const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      if (!index.decode(i, spec)) continue;
      ++out.examined;
      std::span<const Value> initial = seed;
      if (ceiling_target) {
        if (!check_conditions(spec, p).satisfied) {
          ++out.mismatched;
          continue;
        }
        const Value c_min = std::max(config.seed_len, min_initial_conditions(spec, p));
        if (c_min > config.compare_len) {
          ++out.mismatched;
          continue;
        }
        ceiling_seed = ceiling_prefix(p, c_min);
        initial = ceiling_seed;
      }
      const auto outcome =
          evaluator.run(spec, initial, static_cast<std::size_t>(config.compare_len), target);
      if (outcome.death) {
        ++out.died;
        if (config.log_deaths) out.deaths.push_back({spec, *outcome.death});
        continue;
      }
      if (!outcome.matched || outcome.computed != static_cast<std::size_t>(config.compare_len)) {
        ++out.mismatched;
        continue;
      }
      RecursionSpec hit = spec;
      hit.initial.assign(initial.begin(), initial.end());
      out.hits.push_back({std::move(hit), config.compare_len, signature});
    }
  });

  SearchReport report;
  for (auto& chunk : results) {
    report.examined += chunk.examined;
    report.died += chunk.died;
    report.mismatched += chunk.mismatched;
    std::move(chunk.hits.begin(), chunk.hits.end(), std::back_inserter(report.hits));
    std::move(chunk.deaths.begin(), chunk.deaths.end(), std::back_inserter(report.deaths));
  }
  std::sort(report.hits.begin(), report.hits.end(),
            [](const SearchHit& x, const SearchHit& y) { return x.spec < y.spec; });
  return report;
}

}  // namespace metafib

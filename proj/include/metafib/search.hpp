#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "metafib/analysis.hpp"
#include "metafib/box.hpp"
#include "metafib/engine.hpp"
#include "metafib/spec.hpp"

namespace metafib {

/// Exhaustive search for 2-ary order-p recursions whose solution, seeded
/// with a prefix of the target (alpha, beta)-Conolly sequence, keeps
/// matching that sequence.
struct SearchConfig {
  Value order = 2;
  Value alpha = 0;
  Value beta = 1;
  ParameterBox box;
  Value seed_len = 20;
  Value compare_len = 1000;
  bool dedup = true;
  int jobs = 1;
  bool log_deaths = false;
};

/// Throws std::invalid_argument for an empty box, seed_len > compare_len or
/// an (alpha, beta) pair with alpha + 2 beta != 2p.
void validate_search(const SearchConfig& config);

/// Default box: s = 0, t in [0, 10], a in [1, 12], b in [1, 30].
ParameterBox default_search_box();

struct SearchHit {
  RecursionSpec spec;  // carries the seed it was run with
  Value matched_len = 0;
  ConollySignature signature;
};

struct DeathRecord {
  RecursionSpec spec;
  Death death;
};

struct SearchReport {
  std::vector<SearchHit> hits;  // sorted by spec
  std::uint64_t examined = 0;
  std::uint64_t died = 0;
  std::uint64_t mismatched = 0;
  std::vector<DeathRecord> deaths;  // only with log_deaths, in enumeration order
};

/// Number of specs enumerate_box would produce.
std::uint64_t count_box(const SearchConfig& config);

/// Offsets inside a term are nondecreasing.  With dedup, a tuple with s = t
/// is kept only when its a-list is lexicographically <= its b-list.
std::vector<RecursionSpec> enumerate_box(const SearchConfig& config);

/// Calls `visit` on every spec in enumeration order without materialising
/// the whole box.
void for_each_in_box(const SearchConfig& config, const std::function<void(const RecursionSpec&)>& visit);

/// For beta = 0 the target is ceil(n / 2p); candidates are screened with
/// check_conditions and then confirmed by evaluation seeded with
/// max(seed_len, min_initial_conditions) ceiling values.
SearchReport run_search(const SearchConfig& config);

}  // namespace metafib

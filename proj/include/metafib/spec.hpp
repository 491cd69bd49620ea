#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metafib {

using Value = std::int64_t;

/// One summand R(n - shift - sum_j R(n - offsets[j])) of a nested recursion.
struct RecursionTerm {
  Value shift = 0;
  std::vector<Value> offsets;  // stored as given, never reordered

  std::size_t order() const { return offsets.size(); }

  friend bool operator==(const RecursionTerm&, const RecursionTerm&) = default;
  friend auto operator<=>(const RecursionTerm&, const RecursionTerm&) = default;
};

/// A k-ary nested recursion together with its (possibly empty) initial
/// conditions R(1..c).  An empty `initial` means the conditions are supplied
/// separately.
struct RecursionSpec {
  std::vector<RecursionTerm> terms;
  std::vector<Value> initial;

  std::size_t arity() const { return terms.size(); }
  std::vector<std::size_t> order_vector() const;
  bool uniform_order() const;
  /// Common order p; throws std::invalid_argument unless uniform_order().
  std::size_t order() const;
  /// Largest a_ij over all terms (0 for an empty spec).
  Value max_offset() const;

  RecursionSpec with_initial(std::vector<Value> values) const;

  friend bool operator==(const RecursionSpec&, const RecursionSpec&) = default;
  friend auto operator<=>(const RecursionSpec&, const RecursionSpec&) = default;
};

struct ParseOptions {
  /// Accept negative shifts, nonpositive offsets and nonpositive initial
  /// values.  Only meaningful for formal-satisfaction checks.
  bool relaxed = false;
  /// Accept zero initial values in strict mode.
  bool allow_zero_initial = false;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses `<s;a,b,...:t;c,...>[x,y,...]`.  Whitespace between tokens is
/// ignored.  The reported error offset is always a valid index into `text`
/// (0 for empty input).
RecursionSpec parse_spec(std::string_view text, const ParseOptions& options = {});

/// Canonical form: no spaces, initial-condition bracket omitted when empty.
std::string print_spec(const RecursionSpec& spec);

/// Throws std::invalid_argument if `spec` breaks the strict-mode invariants.
void validate_spec(const RecursionSpec& spec, const ParseOptions& options = {});

}  // namespace metafib

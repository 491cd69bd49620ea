#pragma once

#include <string>
#include <string_view>

#include "metafib/spec.hpp"

namespace metafib {

/// Closed integer interval; empty when lo > hi.
struct Range {
  Value lo = 0;
  Value hi = -1;

  bool empty() const { return lo > hi; }
  Value size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(Value v) const { return lo <= v && v <= hi; }

  friend bool operator==(const Range&, const Range&) = default;
};

/// Parameter ranges for 2-ary recursions: shifts s and t of the two terms,
/// and the range shared by every offset of the first (a) and second (b) term.
struct ParameterBox {
  Range s;
  Range t;
  Range a;
  Range b;

  bool empty() const { return s.empty() || t.empty() || a.empty() || b.empty(); }
};

/// Parses "lo..hi" (or a single integer).
Range parse_range(std::string_view text);

/// Parses "s=0..0,t=0..10,a=1..12,b=1..30".  Every key is required.
ParameterBox parse_box(std::string_view text);

std::string format_box(const ParameterBox& box);

}  // namespace metafib

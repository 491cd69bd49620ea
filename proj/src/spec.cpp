#include "metafib/spec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace metafib {

std::vector<std::size_t> RecursionSpec::order_vector() const {
  std::vector<std::size_t> orders;
  orders.reserve(terms.size());
  for (const auto& term : terms) orders.push_back(term.order());
  return orders;
}

bool RecursionSpec::uniform_order() const {
  return std::all_of(terms.begin(), terms.end(),
                     [&](const RecursionTerm& t) { return t.order() == terms.front().order(); });
}

std::size_t RecursionSpec::order() const {
  if (terms.empty() || !uniform_order()) {
    throw std::invalid_argument("recursion " + print_spec(*this) + " has no uniform order");
  }
  return terms.front().order();
}

Value RecursionSpec::max_offset() const {
  Value result = 0;
  for (const auto& term : terms) {
    for (Value a : term.offsets) result = std::max(result, a);
  }
  return result;
}

RecursionSpec RecursionSpec::with_initial(std::vector<Value> values) const {
  RecursionSpec copy = *this;
  copy.initial = std::move(values);
  return copy;
}

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : text_(text), options_(options) {}

  RecursionSpec run() {
    RecursionSpec spec;
    expect('<');
    spec.terms.push_back(term());
    while (peek() == ':') {
      ++pos_;
      spec.terms.push_back(term());
    }
    expect('>');
    if (peek() == '[') {
      ++pos_;
      spec.initial.push_back(initial_value());
      while (peek() == ',') {
        ++pos_;
        spec.initial.push_back(initial_value());
      }
      expect(']');
    }
    if (position() != text_.size()) fail("unexpected trailing input");
    return spec;
  }

 private:
  RecursionTerm term() {
    RecursionTerm t;
    std::size_t at = position();
    t.shift = integer();
    if (!options_.relaxed && t.shift < 0) fail("negative shift requires relaxed mode", at);
    if (peek() != ';') fail("expected ';' after shift");
    ++pos_;
    if (!starts_integer()) fail("empty offset list");
    t.offsets.push_back(offset());
    while (peek() == ',') {
      ++pos_;
      t.offsets.push_back(offset());
    }
    return t;
  }

  Value offset() {
    std::size_t at = position();
    Value v = integer();
    if (!options_.relaxed && v < 1) fail("offset must be at least 1", at);
    return v;
  }

  Value initial_value() {
    std::size_t at = position();
    Value v = integer();
    if (!options_.relaxed) {
      if (v < 0 || (v == 0 && !options_.allow_zero_initial)) {
        fail("initial value must be positive", at);
      }
    }
    return v;
  }

  bool starts_integer() {
    char c = peek();
    return c == '-' || std::isdigit(static_cast<unsigned char>(c));
  }

  Value integer() {
    skip_space();
    std::size_t begin = pos_;
    if (!starts_integer()) fail("expected integer");
    if (text_[pos_] == '-') ++pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected digits");
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Value v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + begin, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_) fail("integer out of range", begin);
    return v;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::size_t position() {
    skip_space();
    return pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }

  [[noreturn]] void fail(const std::string& message, std::size_t at) {
    std::size_t last = text_.empty() ? 0 : text_.size() - 1;
    throw ParseError(message, std::min(at, last));
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

template <typename Range>
void join(std::ostringstream& out, const Range& values) {
  bool first = true;
  for (Value v : values) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
}

}  // namespace

RecursionSpec parse_spec(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).run();
}

std::string print_spec(const RecursionSpec& spec) {
  std::ostringstream out;
  out << '<';
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    if (i) out << ':';
    out << spec.terms[i].shift << ';';
    join(out, spec.terms[i].offsets);
  }
  out << '>';
  if (!spec.initial.empty()) {
    out << '[';
    join(out, spec.initial);
    out << ']';
  }
  return out.str();
}

void validate_spec(const RecursionSpec& spec, const ParseOptions& options) {
  if (spec.terms.empty()) throw std::invalid_argument("recursion needs at least one term");
  for (const auto& term : spec.terms) {
    if (term.offsets.empty()) throw std::invalid_argument("term with empty offset list");
    if (options.relaxed) continue;
    if (term.shift < 0) throw std::invalid_argument("negative shift requires relaxed mode");
    for (Value a : term.offsets) {
      if (a < 1) throw std::invalid_argument("offset must be at least 1");
    }
  }
  if (options.relaxed) return;
  for (Value v : spec.initial) {
    if (v < 0 || (v == 0 && !options.allow_zero_initial)) {
      throw std::invalid_argument("initial value must be positive");
    }
  }
}

}  // namespace metafib

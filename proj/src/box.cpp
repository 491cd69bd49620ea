#include "metafib/box.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

namespace metafib {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

Value parse_integer(std::string_view text) {
  text = trim(text);
  Value v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Range parse_range(std::string_view text) {
  auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    Value v = parse_integer(text);
    return {v, v};
  }
  return {parse_integer(text.substr(0, dots)), parse_integer(text.substr(dots + 2))};
}

ParameterBox parse_box(std::string_view text) {
  std::map<std::string, Range> ranges;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("box entry '" + std::string(item) + "' is not key=range");
    }
    std::string key(trim(item.substr(0, eq)));
    if (key != "s" && key != "t" && key != "a" && key != "b") {
      throw std::invalid_argument("unknown box key '" + key + "' (expected s, t, a, b)");
    }
    ranges[key] = parse_range(item.substr(eq + 1));
  }
  for (const char* key : {"s", "t", "a", "b"}) {
    if (!ranges.count(key)) throw std::invalid_argument(std::string("box is missing '") + key + "'");
  }
  return {ranges["s"], ranges["t"], ranges["a"], ranges["b"]};
}

std::string format_box(const ParameterBox& box) {
  auto one = [](const Range& r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); };
  return "s=" + one(box.s) + ",t=" + one(box.t) + ",a=" + one(box.a) + ",b=" + one(box.b);
}

}  // namespace metafib

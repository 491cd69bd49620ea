#include "metafib/analysis.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

namespace metafib {

Rational::Rational(Value n, Value d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Value g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Value ruler(Value m) {
  if (m < 1) throw std::invalid_argument("ruler is defined for m >= 1");
  return 1 + std::countr_zero(static_cast<std::uint64_t>(m));
}

bool is_slow(std::span<const Value> values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    Value step = values[i] - values[i - 1];
    if (step != 0 && step != 1) return false;
  }
  return true;
}

FrequencyProfile frequency(std::span<const Value> values) {
  FrequencyProfile profile;
  if (values.empty()) return profile;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) {
      throw std::invalid_argument("frequency needs a nondecreasing sequence (drop at index " +
                                  std::to_string(i + 1) + ")");
    }
  }
  profile.complete_upto = std::max<Value>(values.back() - 1, 0);
  profile.counts.assign(static_cast<std::size_t>(profile.complete_upto), 0);
  for (Value v : values) {
    if (v >= 1 && v <= profile.complete_upto) ++profile.counts[static_cast<std::size_t>(v - 1)];
  }
  return profile;
}

std::optional<ConollySignature> fit_conolly(const FrequencyProfile& profile) {
  if (profile.complete_upto < 4) return std::nullopt;
  // r(1) = 1 and r(2) = 2 pin down the pair; every other m verifies it.
  const Value odd = profile.count(1);
  const Value two = profile.count(2);
  ConollySignature sig{2 * odd - two, two - odd};
  if (sig.beta < 0 || sig.alpha + sig.beta < 0) return std::nullopt;
  if (sig.alpha + sig.beta == 0 && sig.beta == 0) return std::nullopt;
  for (Value m = 1; m <= profile.complete_upto; ++m) {
    if (profile.count(m) != sig.alpha + sig.beta * ruler(m)) return std::nullopt;
  }
  return sig;
}

RatioReport ratio_estimate(std::span<const Value> values) {
  if (values.size() < 1000) {
    throw std::invalid_argument("ratio estimate needs at least 1000 values");
  }
  const Value size = static_cast<Value>(values.size());
  auto at = [&](Value n) { return values[static_cast<std::size_t>(n - 1)]; };

  RatioReport report;
  report.final_ratio = Rational(at(size), size);
  Value even = size % 2 == 0 ? size : size - 1;
  Value odd = size % 2 == 1 ? size : size - 1;
  report.even_ratio = Rational(at(even), even);
  report.odd_ratio = Rational(at(odd), odd);
  for (Value n = size; n >= 16; n /= 2) {
    report.checkpoints.push_back({n, at(n), static_cast<double>(at(n)) / static_cast<double>(n)});
  }
  return report;
}

std::vector<Value> gf_coefficients(const ConollySignature& signature, Value degree) {
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (signature.beta < 0 || signature.alpha + signature.beta <= 0) {
    throw std::invalid_argument("generating function needs beta >= 0 and alpha + beta > 0");
  }
  // Truncated product in z^0..z^(degree-1); the z/(1-z) factor turns it into
  // partial sums shifted by one.
  const auto len = static_cast<std::size_t>(degree);
  std::vector<Value> series(len, 0);
  series[0] = 1;
  Value scale = 1;  // 2^n
  while (true) {
    Value exponent = scale * signature.alpha + (2 * scale - 1) * signature.beta;
    if (exponent <= 0) throw std::logic_error("nonpositive exponent in generating function");
    if (exponent >= degree) break;
    const auto e = static_cast<std::size_t>(exponent);
    for (std::size_t k = len; k-- > e;) series[k] += series[k - e];
    scale *= 2;
  }
  std::vector<Value> coefficients(len);
  Value running = 0;
  for (std::size_t n = 0; n < len; ++n) {
    running += series[n];
    coefficients[n] = running;
  }
  return coefficients;
}

}  // namespace metafib

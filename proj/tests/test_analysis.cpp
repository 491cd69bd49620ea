#include "doctest.h"

#include <bit>
#include <cmath>

#include "metafib/analysis.hpp"
#include "metafib/engine.hpp"
#include "metafib/reference.hpp"
#include "oracles.hpp"

using namespace metafib;

TEST_CASE("ruler values") {
  const std::vector<Value> expected = {1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5};
  for (Value m = 1; m <= 16; ++m) CHECK(ruler(m) == expected[static_cast<std::size_t>(m - 1)]);
  CHECK(ruler(1024) == 11);
  CHECK_THROWS_AS(ruler(0), std::invalid_argument);
}

// Each m contributes 1 + (trailing zeros of m), and the trailing zeros of
// 1..h add up to h - popcount(h).  The sum is 2h - popcount(h), not 2h + it.
TEST_CASE("ruler partial sums are 2h - popcount(h)") {
  Value sum = 0;
  for (Value h = 1; h <= 1000; ++h) {
    sum += ruler(h);
    CHECK(sum == 2 * h - std::popcount(static_cast<std::uint64_t>(h)));
  }
}

TEST_CASE("property: ruler recursion and oracle agreement") {
  for (Value m = 1; m <= 100000; ++m) {
    CHECK(ruler(2 * m) == ruler(m) + 1);
    CHECK(ruler(2 * m + 1) == 1);
    CHECK(ruler(m) == oracle::ruler(m));
  }
}

TEST_CASE("slowness") {
  CHECK(is_slow(oracle::kConolly20));
  CHECK_FALSE(is_slow(std::vector<Value>{3, 2, 1, 3, 5}));
  CHECK(is_slow(std::vector<Value>{0, 0, 0}));
  CHECK(is_slow(std::vector<Value>{7}));
}

TEST_CASE("frequency profiles") {
  auto conolly = evaluate(parse_spec("<0;1:1;2>[1,2]"), 20);
  auto profile = frequency(conolly.values);
  CHECK(profile.complete_upto == 11);
  for (Value m = 1; m <= 8; ++m) CHECK(profile.count(m) == ruler(m));

  std::vector<Value> ceil2;
  for (Value n = 1; n <= 10; ++n) ceil2.push_back((n + 1) / 2);
  auto half = frequency(ceil2);
  CHECK(half.complete_upto == 4);
  for (Value m = 1; m <= 4; ++m) CHECK(half.count(m) == 2);

  auto b = evaluate(parse_spec("<1;1:3;3>[1,1,1,2]"), 40);
  auto pb = frequency(b.values);
  CHECK(pb.count(1) == 3);
  CHECK(pb.count(2) == 3);
  CHECK(pb.count(3) == 2);
  CHECK(pb.count(4) == 3);

  CHECK_THROWS_AS(frequency(std::vector<Value>{1, 2, 1}), std::invalid_argument);
  CHECK(frequency(std::vector<Value>{}).complete_upto == 0);
}

TEST_CASE("Conolly fits") {
  auto conolly = evaluate(parse_spec("<0;1:1;2>[1,2]"), 2000);
  CHECK(fit_conolly(frequency(conolly.values)) == ConollySignature{0, 1});

  std::vector<Value> ceil2;
  for (Value n = 1; n <= 200; ++n) ceil2.push_back((n + 1) / 2);
  CHECK(fit_conolly(frequency(ceil2)) == ConollySignature{2, 0});

  // B: phi(1)=3, phi(2)=3 force beta = 0, alpha = 3, but phi(3) = 2.
  auto b = evaluate(parse_spec("<1;1:3;3>[1,1,1,2]"), 2000);
  CHECK_FALSE(fit_conolly(frequency(b.values)).has_value());

  // Too short to decide.
  CHECK_FALSE(fit_conolly(frequency(std::vector<Value>{1, 2, 2, 3, 4})).has_value());
}

TEST_CASE("degenerate fits are reported with a flag") {
  // phi(m) = -1 + r_m: odd values never appear.
  std::vector<Value> values;
  for (Value m = 1; m <= 64; ++m) {
    for (Value k = 0; k < -1 + ruler(m); ++k) values.push_back(m);
  }
  values.push_back(66);
  auto profile = frequency(values);
  auto sig = fit_conolly(profile);
  REQUIRE(sig.has_value());
  CHECK(*sig == ConollySignature{-1, 1});
  CHECK(sig->degenerate());
  CHECK_FALSE(ConollySignature{0, 1}.degenerate());
}

TEST_CASE("signature arithmetic") {
  ConollySignature sig{-2, 3};
  CHECK(sig.order_p() == Rational(2));
  CHECK(sig.slope() == Rational(1, 4));
  CHECK(ConollySignature{1, 0}.order_p() == Rational(1, 2));
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("ratio estimates") {
  auto conolly = evaluate(parse_spec("<0;1:1;2>[1,2]"), 100000);
  auto report = ratio_estimate(conolly.values);
  CHECK(std::abs(report.final_ratio.to_double() - 0.5) < 1e-3);
  CHECK(report.checkpoints.front().n == 100000);
  CHECK(report.checkpoints.back().n >= 16);

  std::vector<Value> zeros(1000, 0);
  CHECK(ratio_estimate(zeros).final_ratio == Rational(0));
  CHECK_THROWS_AS(ratio_estimate(std::vector<Value>(999, 1)), std::invalid_argument);
}

TEST_CASE("generating function coefficients") {
  CHECK(gf_coefficients({0, 1}, 20) == oracle::kConolly20);
  std::vector<Value> ceil2;
  for (Value n = 1; n <= 12; ++n) ceil2.push_back((n + 1) / 2);
  CHECK(gf_coefficients({2, 0}, 12) == ceil2);
  CHECK(gf_coefficients({2, 1}, 50) == definitional_sequence(2, 1, 50));
  CHECK(gf_coefficients({2, 1}, 50) == oracle::gf_series(2, 1, 50));
  CHECK_THROWS_AS(gf_coefficients({0, 1}, 0), std::invalid_argument);
}

TEST_CASE("property: every admissible pair fits and matches its generating function") {
  for (Value p = 1; p <= 4; ++p) {
    for (const auto& pair : admissible_pairs(p)) {
      CAPTURE(pair.alpha);
      CAPTURE(pair.beta);
      auto values = definitional_sequence(pair.alpha, pair.beta, 2000);
      CHECK(fit_conolly(frequency(values)) == ConollySignature{pair.alpha, pair.beta});
      CHECK(gf_coefficients({pair.alpha, pair.beta}, 512) == oracle::gf_series(pair.alpha, pair.beta, 512));
      CHECK(gf_coefficients({pair.alpha, pair.beta}, 512) == oracle::conolly_like(pair.alpha, pair.beta, 512));
    }
  }
}

TEST_CASE("property: a fitted order-p recursion has alpha + 2 beta = 2p") {
  // Sample uniform-order 2-ary recursions seeded with Conolly-like prefixes.
  oracle::Rng rng(5);
  int fitted = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const Value p = rng.uniform(1, 2);
    const auto pairs = admissible_pairs(p);
    const auto& pair = pairs[static_cast<std::size_t>(rng.uniform(0, static_cast<Value>(pairs.size()) - 1))];
    RecursionSpec spec;
    for (int k = 0; k < 2; ++k) {
      RecursionTerm term{rng.uniform(0, 4), {}};
      for (Value j = 0; j < p; ++j) term.offsets.push_back(rng.uniform(1, 8));
      spec.terms.push_back(term);
    }
    spec.initial = definitional_sequence(pair.alpha, pair.beta, 20);
    auto run = evaluate(spec, 1000);
    if (!run.alive() || !is_slow(run.values)) continue;
    auto sig = fit_conolly(frequency(run.values));
    if (!sig || sig->degenerate()) continue;
    ++fitted;
    CAPTURE(print_spec(spec));
    CHECK(sig->alpha + 2 * sig->beta == 2 * p);
  }
  MESSAGE("fitted recursions: " << fitted);
}

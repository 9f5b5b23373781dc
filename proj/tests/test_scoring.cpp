#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rng.hpp"
#include "scoring.hpp"

using namespace stocksel;
using scoring::ClassProbabilities;
using scoring::ExpectedReturnScore;

namespace {

LabelScheme scheme_with(std::array<double, 4> yields) {
  LabelScheme s;
  s.q1 = -0.0106;
  s.q2 = 0.0004;
  s.q3 = 0.0132;
  s.class_mean_yield = yields;
  return s;
}

ClassProbabilities probs_of(const std::string& id, std::array<double, 4> p,
                            const std::string& model = "S") {
  ClassProbabilities cp;
  cp.instrument_id = id;
  cp.as_of_date = Date::from_ymd(2021, 3, 1);
  cp.p = p;
  cp.model_id = model;
  return cp;
}

}  // namespace

TEST_CASE("expected_return: two identical models equal the single dot product") {
  const LabelScheme s = scheme_with({-0.03, -0.005, 0.006, 0.03});
  const auto a = probs_of("A", {0.1, 0.2, 0.3, 0.4}, "S");
  const auto b = probs_of("A", {0.1, 0.2, 0.3, 0.4}, "L");
  const std::vector<ClassProbabilities> both{a, b};
  const std::vector<ClassProbabilities> one{a};
  const auto e2 = scoring::expected_return(both, s);
  const auto e1 = scoring::expected_return(one, s);
  CHECK(e2.expected == doctest::Approx(e1.expected).epsilon(1e-15));
  CHECK(e2.model_ids == std::vector<std::string>{"S", "L"});
}

TEST_CASE("expected_return: dot-product hand arithmetic gives +0.98%") {
  const LabelScheme s = scheme_with({-0.03, -0.005, 0.006, 0.03});
  const auto e = scoring::expected_return(
      std::vector<ClassProbabilities>{probs_of("A", {0.1, 0.2, 0.3, 0.4})}, s);
  CHECK(e.expected == doctest::Approx(0.0098).epsilon(1e-12));
}

TEST_CASE("expected_return: uniform probabilities with symmetric yields give zero") {
  const LabelScheme s = scheme_with({-0.03, -0.01, 0.01, 0.03});
  const auto e = scoring::expected_return(
      std::vector<ClassProbabilities>{probs_of("A", {0.25, 0.25, 0.25, 0.25})}, s);
  CHECK(e.expected == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("expected_return: mixed keys raise InconsistentKeys") {
  const LabelScheme s = scheme_with({-0.03, -0.005, 0.006, 0.03});
  auto a = probs_of("A", {0.25, 0.25, 0.25, 0.25});
  auto b = probs_of("B", {0.25, 0.25, 0.25, 0.25});
  try {
    scoring::expected_return(std::vector<ClassProbabilities>{a, b}, s);
    FAIL("expected InconsistentKeys");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentKeys);
  }
}

TEST_CASE("expected_return: the half-sum form for two models") {
  const LabelScheme s = scheme_with({-0.02, -0.004, 0.005, 0.025});
  rng::Rng rng(64);
  for (int trial = 0; trial < 200; ++trial) {
    auto draw = [&] {
      std::array<double, 4> p{};
      double sum = 0;
      for (double& x : p) {
        x = rng.uniform(0.001, 1.0);
        sum += x;
      }
      for (double& x : p) x /= sum;
      return p;
    };
    const auto pa = draw(), pb = draw();
    const auto e = scoring::expected_return(
        std::vector<ClassProbabilities>{probs_of("A", pa, "S"), probs_of("A", pb, "L")}, s);
    double half_sum = 0;  // (1/2) sum over models of p_k * ybar_k
    for (int k = 0; k < 4; ++k) {
      half_sum += 0.5 * (pa[k] * s.class_mean_yield[k] + pb[k] * s.class_mean_yield[k]);
    }
    CHECK(std::abs(e.expected - half_sum) < 1e-15);
  }
}

TEST_CASE("expected_return: monotone in mass moved to a higher-yield class") {
  const LabelScheme s = scheme_with({-0.03, -0.005, 0.006, 0.03});
  rng::Rng rng(65);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};
    const auto base =
        scoring::expected_return(std::vector<ClassProbabilities>{probs_of("A", p)}, s);
    // shift mass from a class to a higher-yield class
    const int from = static_cast<int>(rng.below(3));
    const int to = from + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(3 - from)));
    const double shift = rng.uniform(0, p[from]);
    p[from] -= shift;
    p[to] += shift;
    const auto moved =
        scoring::expected_return(std::vector<ClassProbabilities>{probs_of("A", p)}, s);
    CHECK(moved.expected >= base.expected - 1e-15);
  }
}

TEST_CASE("expected_return: independent of replicating the same model N times") {
  const LabelScheme s = scheme_with({-0.03, -0.005, 0.006, 0.03});
  const auto p = probs_of("A", {0.4, 0.3, 0.2, 0.1});
  const auto one = scoring::expected_return(std::vector<ClassProbabilities>{p}, s);
  for (int n : {2, 3, 7}) {
    std::vector<ClassProbabilities> many(static_cast<std::size_t>(n), p);
    const auto e = scoring::expected_return(many, s);
    CHECK(e.expected == doctest::Approx(one.expected).epsilon(1e-15));
  }
}

TEST_CASE("rank_candidates: ordering, ties, and permutation property") {
  const Date d = Date::from_ymd(2021, 3, 1);
  auto score = [&](const std::string& id, double e) {
    ExpectedReturnScore s;
    s.instrument_id = id;
    s.as_of_date = d;
    s.expected = e;
    return s;
  };

  SUBCASE("descending by expected return") {
    auto ranked = scoring::rank_candidates({score("A", 0.02), score("B", 0.01), score("C", 0.03)});
    CHECK(ranked[0].instrument_id == "C");
    CHECK(ranked[1].instrument_id == "A");
    CHECK(ranked[2].instrument_id == "B");
  }

  SUBCASE("equal scores break ties lexicographically") {
    auto ranked = scoring::rank_candidates({score("ZZ", 0.01), score("AA", 0.01)});
    CHECK(ranked[0].instrument_id == "AA");
    CHECK(ranked[1].instrument_id == "ZZ");
  }

  SUBCASE("duplicate instrument raises") {
    try {
      scoring::rank_candidates({score("A", 0.01), score("A", 0.02)});
      FAIL("expected DuplicateInstrument");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DuplicateInstrument);
    }
  }

  SUBCASE("300 random scores agree with an independent comparison sort") {
    rng::Rng rng(66);
    std::vector<ExpectedReturnScore> scores;
    for (int i = 0; i < 300; ++i) {
      scores.push_back(score("I" + std::to_string(1000 + i), rng.uniform(-0.05, 0.05)));
    }
    auto ranked = scoring::rank_candidates(scores);
    REQUIRE(ranked.size() == scores.size());
    // oracle: std::sort with an explicit comparator on a copy
    auto oracle = scores;
    std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
      if (a.expected != b.expected) return a.expected > b.expected;
      return a.instrument_id < b.instrument_id;
    });
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(ranked[i].instrument_id == oracle[i].instrument_id);
    }
    // permutation: the multiset of ids is unchanged
    std::set<std::string> in, out;
    for (const auto& s : scores) in.insert(s.instrument_id);
    for (const auto& s : ranked) out.insert(s.instrument_id);
    CHECK(in == out);
  }
}

TEST_CASE("scores_csv layout") {
  ExpectedReturnScore s;
  s.instrument_id = "SY0001";
  s.as_of_date = Date::from_ymd(2021, 3, 11);
  s.expected = 0.0175;
  s.model_ids = {"S", "L"};
  const std::string csv = scoring::scores_csv({s});
  CHECK(csv.find("date,instrument,expected_return,model_ids\n") == 0);
  CHECK(csv.find("2021-03-11,SY0001,0.0175,S+L\n") != std::string::npos);
}

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dates.hpp"
#include "featurize.hpp"

namespace stocksel::scoring {

struct ClassProbabilities {
  std::string instrument_id;
  Date as_of_date;
  std::array<double, 4> p{};
  std::string model_id;
};

struct ExpectedReturnScore {
  std::string instrument_id;
  Date as_of_date;
  double expected = 0;
  std::vector<std::string> model_ids;
};

/// E = mean over models of sum_k p_k * mean_yield_k. With two models this
/// is the half-sum ensemble form; with one it is the plain dot product.
ExpectedReturnScore expected_return(std::span<const ClassProbabilities> per_model,
                                    const LabelScheme& scheme);

/// Descending by E; ties broken by instrument id so backtests reproduce.
std::vector<ExpectedReturnScore> rank_candidates(std::vector<ExpectedReturnScore> scores);

std::string scores_csv(const std::vector<ExpectedReturnScore>& scores);

}  // namespace stocksel::scoring

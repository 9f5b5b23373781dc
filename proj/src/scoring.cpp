#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "error.hpp"

namespace stocksel::scoring {

ExpectedReturnScore expected_return(std::span<const ClassProbabilities> per_model,
                                    const LabelScheme& scheme) {
  if (per_model.empty()) throw Error(ErrorKind::EmptyInput, "no model probabilities");
  const auto& first = per_model.front();
  double sum = 0;
  ExpectedReturnScore out;
  out.instrument_id = first.instrument_id;
  out.as_of_date = first.as_of_date;
  for (const auto& cp : per_model) {
    if (cp.instrument_id != first.instrument_id || cp.as_of_date != first.as_of_date) {
      throw Error(ErrorKind::InconsistentKeys,
                  cp.instrument_id + "@" + cp.as_of_date.iso() + " vs " + first.instrument_id +
                      "@" + first.as_of_date.iso());
    }
    double dot = 0;
    for (int k = 0; k < kNumClasses; ++k) {
      if (!std::isfinite(cp.p[k])) throw Error(ErrorKind::NonFiniteInput, "probability");
      dot += cp.p[k] * scheme.class_mean_yield[k];
    }
    sum += dot;
    out.model_ids.push_back(cp.model_id);
  }
  out.expected = sum / static_cast<double>(per_model.size());
  return out;
}

std::vector<ExpectedReturnScore> rank_candidates(std::vector<ExpectedReturnScore> scores) {
  std::set<std::pair<std::int32_t, std::string>> seen;
  for (const auto& s : scores) {
    if (!seen.insert({s.as_of_date.serial, s.instrument_id}).second) {
      throw Error(ErrorKind::DuplicateInstrument,
                  s.instrument_id + " scored twice on " + s.as_of_date.iso());
    }
  }
  std::sort(scores.begin(), scores.end(),
            [](const ExpectedReturnScore& a, const ExpectedReturnScore& b) {
              if (a.as_of_date != b.as_of_date) return a.as_of_date < b.as_of_date;
              if (a.expected != b.expected) return a.expected > b.expected;
              return a.instrument_id < b.instrument_id;
            });
  return scores;
}

std::string scores_csv(const std::vector<ExpectedReturnScore>& scores) {
  std::string out = "date,instrument,expected_return,model_ids\n";
  char buf[32];
  for (const auto& s : scores) {
    out += s.as_of_date.iso();
    out += ',';
    out += s.instrument_id;
    out += ',';
    std::snprintf(buf, sizeof buf, "%.10g", s.expected);
    out += buf;
    out += ',';
    for (std::size_t i = 0; i < s.model_ids.size(); ++i) {
      if (i) out += '+';
      out += s.model_ids[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace stocksel::scoring

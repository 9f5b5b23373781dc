#pragma once

#include <string>

#include "config.hpp"

namespace stocksel::pipeline {

/// Command entry points shared by the C API and (through it) the CLI.
/// Each returns a short human-readable summary and throws stocksel::Error
/// on failure; outputs land in the config's paths.

std::string cmd_synth(const RunConfig& cfg);
/// Check-only load; throws the first issue (with the full reject list in
/// the message) when any row is rejected.
std::string cmd_validate(const RunConfig& cfg, const std::string& path_override = {});
std::string cmd_calibrate(const RunConfig& cfg);
std::string cmd_train(const RunConfig& cfg);
std::string cmd_ablate(const RunConfig& cfg, const std::string& suite);
std::string cmd_score(const RunConfig& cfg);
std::string cmd_backtest(const RunConfig& cfg);
/// synth -> calibrate -> train -> backtest in one invocation.
std::string cmd_pipeline(const RunConfig& cfg);

}  // namespace stocksel::pipeline

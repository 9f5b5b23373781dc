// stocksel command-line front end. Only the public C API is used here; the
// heavy lifting lives in the shared library.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "stocksel/stocksel.h"

namespace {

struct ConfigGuard {
  ssp_config* ptr = nullptr;
  ~ConfigGuard() { ssp_config_free(ptr); }
};

int finish(ssp_status status) {
  if (status == SSP_OK) {
    std::printf("%s\n", ssp_last_message());
  } else {
    std::fprintf(stderr, "error (%s): %s\n", ssp_status_name(status), ssp_last_message());
  }
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stocksel - train price-volume classifiers and backtest daily stock selection"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::string seed_override;
  std::string out_override;
  bool print_config = false;
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--seed", seed_override, "override run.seed");
  app.add_option("--out", out_override, "override run.out (output directory)");
  app.add_flag("--print-config", print_config, "print the effective config and exit");

  auto* synth = app.add_subcommand("synth", "generate seeded synthetic bar data");
  auto* validate = app.add_subcommand("validate", "check a bar CSV, exit 0 iff zero rejects");
  std::string validate_path;
  validate->add_option("path", validate_path, "CSV to check (default: paths.bars)");
  auto* calibrate = app.add_subcommand("calibrate", "fit quartile labels on the train range");
  auto* train = app.add_subcommand("train", "train the configured strategy");
  auto* ablate = app.add_subcommand("ablate", "run a named comparison suite");
  std::string suite;
  ablate->add_option("suite", suite,
                     "optimizers|regularization|keep_prob|cnn_framework|dnn_vs_cnn|window_span")
      ->required();
  auto* score = app.add_subcommand("score", "write expected-return scores");
  auto* backtest = app.add_subcommand("backtest", "run the daily selection rule");
  auto* pipeline = app.add_subcommand("pipeline", "synth + calibrate + train + backtest");

  CLI11_PARSE(app, argc, argv);

  ConfigGuard guard;
  ssp_status rc = config_path.empty() ? ssp_config_default(&guard.ptr)
                                      : ssp_config_load(config_path.c_str(), &guard.ptr);
  if (rc != SSP_OK) return finish(rc);
  if (!seed_override.empty()) {
    rc = ssp_config_set(guard.ptr, "run.seed", seed_override.c_str());
    if (rc != SSP_OK) return finish(rc);
  }
  if (!out_override.empty()) {
    rc = ssp_config_set(guard.ptr, "run.out", out_override.c_str());
    if (rc != SSP_OK) return finish(rc);
  }

  if (print_config) {
    char* text = nullptr;
    rc = ssp_config_render(guard.ptr, &text);
    if (rc != SSP_OK) return finish(rc);
    std::printf("%s", text);
    ssp_string_free(text);
    return 0;
  }

  if (synth->parsed()) return finish(ssp_run_synth(guard.ptr));
  if (validate->parsed()) {
    return finish(
        ssp_run_validate(guard.ptr, validate_path.empty() ? nullptr : validate_path.c_str()));
  }
  if (calibrate->parsed()) return finish(ssp_run_calibrate(guard.ptr));
  if (train->parsed()) return finish(ssp_run_train(guard.ptr));
  if (ablate->parsed()) return finish(ssp_run_ablate(guard.ptr, suite.c_str()));
  if (score->parsed()) return finish(ssp_run_score(guard.ptr));
  if (backtest->parsed()) return finish(ssp_run_backtest(guard.ptr));
  if (pipeline->parsed()) return finish(ssp_run_pipeline(guard.ptr));

  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 2;
}

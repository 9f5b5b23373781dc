// Exercises the shared library strictly through the public C header, the
// same surface the CLI uses. Plain asserts keep this binary dependency-free.

#include <cassert>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stocksel/stocksel.h"

namespace {

int g_checks = 0;

void expect(bool ok, const char* what) {
  ++g_checks;
  if (!ok) {
    std::fprintf(stderr, "FAILED: %s\n  last message: %s\n", what, ssp_last_message());
    std::exit(1);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sandbox {
  std::filesystem::path dir;
  Sandbox() {
    dir = std::filesystem::temp_directory_path() / "stocksel_capi_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  ~Sandbox() { std::filesystem::remove_all(dir); }
};

}  // namespace

int main() {
  Sandbox sandbox;
  const std::string out1 = (sandbox.dir / "run1").string();
  const std::string out2 = (sandbox.dir / "run2").string();

  expect(std::strcmp(ssp_status_name(SSP_OK), "ok") == 0, "status name ok");
  expect(std::strcmp(ssp_status_name(SSP_ERR_CONFIG), "config error") == 0,
         "status name config");
  expect(ssp_version() != nullptr, "version string");

  // null-argument handling
  expect(ssp_config_default(nullptr) == SSP_ERR_CONFIG, "null out rejected");
  expect(ssp_run_synth(nullptr) == SSP_ERR_CONFIG, "null config rejected");

  ssp_config* cfg = nullptr;
  expect(ssp_config_default(&cfg) == SSP_OK, "default config");

  // unknown keys are config errors; valid overrides succeed
  expect(ssp_config_set(cfg, "no.such", "1") == SSP_ERR_CONFIG, "unknown key");
  expect(ssp_config_set(cfg, "run.out", out1.c_str()) == SSP_OK, "set run.out");
  expect(ssp_config_set(cfg, "synth.instruments", "4") == SSP_OK, "set instruments");
  expect(ssp_config_set(cfg, "synth.days", "30") == SSP_OK, "set days");

  char* text = nullptr;
  expect(ssp_config_render(cfg, &text) == SSP_OK, "render");
  expect(std::strstr(text, "[run]") != nullptr, "render has [run]");
  expect(std::strstr(text, "instruments = 4") != nullptr, "render has override");
  ssp_string_free(text);

  // config constraint violations exit with the config status and name the key
  expect(ssp_config_set(cfg, "synth.days", "3") == SSP_OK, "set bad days");
  expect(ssp_run_synth(cfg) == SSP_ERR_CONFIG, "n_days below minimum is a config error");
  expect(std::strstr(ssp_last_message(), "n_days") != nullptr, "message names the constraint");
  expect(ssp_config_set(cfg, "synth.days", "30") == SSP_OK, "restore days");

  // synth -> validate happy path
  expect(ssp_run_synth(cfg) == SSP_OK, "synth");
  expect(ssp_run_validate(cfg, nullptr) == SSP_OK, "validate clean data");
  expect(std::strstr(ssp_last_message(), "0 rejects") != nullptr, "validate summary");

  // validating a corrupted file is a data error naming the row
  {
    const auto bad = sandbox.dir / "bad.csv";
    std::ofstream f(bad);
    f << "instrument,date,time,close,open,high,low,volume,amount,not,cr,vr,cp,cs\n";
    f << "A,2021-01-04,09:45,10,10,9,10,100,1000,5,1,1,10,10\n";  // high < low
    f.close();
    expect(ssp_run_validate(cfg, bad.string().c_str()) == SSP_ERR_DATA, "corrupt row");
    expect(std::strstr(ssp_last_message(), "row 2") != nullptr, "row number reported");
  }

  // empty file is a data error
  {
    const auto empty = sandbox.dir / "empty.csv";
    std::ofstream f(empty);
    f << "instrument,date,time,close,open,high,low,volume,amount,not,cr,vr,cp,cs\n";
    f.close();
    expect(ssp_run_validate(cfg, empty.string().c_str()) == SSP_ERR_DATA, "empty file");
  }

  // missing file is a config error (referenced path must exist)
  expect(ssp_run_validate(cfg, (sandbox.dir / "nope.csv").string().c_str()) == SSP_ERR_CONFIG,
         "missing file");

  // unknown suite
  expect(ssp_run_ablate(cfg, "bogus") == SSP_ERR_CONFIG, "unknown suite");

  // train before calibrate: labels file missing -> config error
  expect(ssp_run_train(cfg) == SSP_ERR_CONFIG, "train without labels");

  // end-to-end determinism: two pipeline runs, byte-identical outputs
  expect(ssp_config_set(cfg, "train.epochs", "2") == SSP_OK, "epochs");
  expect(ssp_config_set(cfg, "train.checkpoint_epoch", "2") == SSP_OK, "ckpt epoch");
  expect(ssp_config_set(cfg, "model.hidden_size", "6") == SSP_OK, "hidden");
  expect(ssp_run_pipeline(cfg) == SSP_OK, "pipeline run 1");

  ssp_config* cfg2 = nullptr;
  expect(ssp_config_default(&cfg2) == SSP_OK, "second config");
  expect(ssp_config_set(cfg2, "run.out", out2.c_str()) == SSP_OK, "out 2");
  expect(ssp_config_set(cfg2, "synth.instruments", "4") == SSP_OK, "instr 2");
  expect(ssp_config_set(cfg2, "synth.days", "30") == SSP_OK, "days 2");
  expect(ssp_config_set(cfg2, "train.epochs", "2") == SSP_OK, "epochs 2");
  expect(ssp_config_set(cfg2, "train.checkpoint_epoch", "2") == SSP_OK, "ckpt 2");
  expect(ssp_config_set(cfg2, "model.hidden_size", "6") == SSP_OK, "hidden 2");
  expect(ssp_run_pipeline(cfg2) == SSP_OK, "pipeline run 2");

  for (const char* name :
       {"bars.csv", "truth.csv", "universe.txt", "labels.txt", "train_log_S.csv",
        "train_log_L.csv", "scores.csv", "equity.csv", "metrics.csv", "trades.csv",
        "model_S.ckpt", "model_L.ckpt", "equity.svg"}) {
    const auto a = slurp(std::filesystem::path(out1) / name);
    const auto b = slurp(std::filesystem::path(out2) / name);
    expect(!a.empty(), (std::string("output exists: ") + name).c_str());
    expect(a == b, (std::string("byte-identical: ") + name).c_str());
  }

  // score command works off the written checkpoints
  expect(ssp_run_score(cfg) == SSP_OK, "score");

  ssp_config_free(cfg);
  ssp_config_free(cfg2);
  ssp_config_free(nullptr);  // must be safe

  std::printf("capi_tests: %d checks passed\n", g_checks);
  return 0;
}

#include "stocksel/stocksel.h"

#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "error.hpp"
#include "pipeline.hpp"

using stocksel::Error;
using stocksel::RunConfig;

struct ssp_config {
  RunConfig cfg;
};

namespace {

thread_local std::string g_last_message = "ok";

ssp_status fail_with(const std::exception& e, ssp_status fallback) {
  g_last_message = e.what();
  return fallback;
}

template <typename Fn>
ssp_status guarded(Fn&& fn) {
  try {
    g_last_message = fn();
    return SSP_OK;
  } catch (const Error& e) {
    g_last_message = e.what();
    return static_cast<ssp_status>(stocksel::status_class(e.kind()));
  } catch (const std::bad_alloc& e) {
    return fail_with(e, SSP_ERR_RUNTIME);
  } catch (const std::exception& e) {
    return fail_with(e, SSP_ERR_RUNTIME);
  }
}

ssp_status require(bool ok, const char* what) {
  if (ok) return SSP_OK;
  g_last_message = what;
  return SSP_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* ssp_version(void) { return "1.0.0"; }

const char* ssp_status_name(ssp_status status) {
  switch (status) {
    case SSP_OK: return "ok";
    case SSP_ERR_DATA: return "data error";
    case SSP_ERR_CONFIG: return "config error";
    case SSP_ERR_RUNTIME: return "runtime error";
  }
  return "unknown";
}

const char* ssp_last_message(void) { return g_last_message.c_str(); }

ssp_status ssp_config_default(ssp_config** out) {
  if (const auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] {
    *out = new ssp_config{RunConfig::defaults()};
    return "default config";
  });
}

ssp_status ssp_config_load(const char* path, ssp_config** out) {
  if (const auto rc = require(out != nullptr && path != nullptr, "path/out is NULL")) return rc;
  return guarded([&] {
    *out = new ssp_config{RunConfig::load(path)};
    return std::string("loaded ") + path;
  });
}

ssp_status ssp_config_set(ssp_config* cfg, const char* key, const char* value) {
  if (const auto rc =
          require(cfg != nullptr && key != nullptr && value != nullptr, "NULL argument"))
    return rc;
  return guarded([&] {
    cfg->cfg.set(key, value);
    return std::string(key) + " = " + value;
  });
}

ssp_status ssp_config_render(const ssp_config* cfg, char** out_text) {
  if (const auto rc = require(cfg != nullptr && out_text != nullptr, "NULL argument")) return rc;
  return guarded([&] {
    const std::string text = cfg->cfg.render();
    *out_text = static_cast<char*>(::operator new(text.size() + 1));
    std::memcpy(*out_text, text.c_str(), text.size() + 1);
    return "rendered";
  });
}

void ssp_config_free(ssp_config* cfg) { delete cfg; }

void ssp_string_free(char* text) { ::operator delete(text); }

ssp_status ssp_run_synth(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_synth(cfg->cfg); });
}

ssp_status ssp_run_validate(const ssp_config* cfg, const char* path) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded(
      [&] { return stocksel::pipeline::cmd_validate(cfg->cfg, path ? path : ""); });
}

ssp_status ssp_run_calibrate(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_calibrate(cfg->cfg); });
}

ssp_status ssp_run_train(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_train(cfg->cfg); });
}

ssp_status ssp_run_ablate(const ssp_config* cfg, const char* suite) {
  if (const auto rc = require(cfg != nullptr && suite != nullptr, "NULL argument")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_ablate(cfg->cfg, suite); });
}

ssp_status ssp_run_score(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_score(cfg->cfg); });
}

ssp_status ssp_run_backtest(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_backtest(cfg->cfg); });
}

ssp_status ssp_run_pipeline(const ssp_config* cfg) {
  if (const auto rc = require(cfg != nullptr, "config is NULL")) return rc;
  return guarded([&] { return stocksel::pipeline::cmd_pipeline(cfg->cfg); });
}

}  // extern "C"

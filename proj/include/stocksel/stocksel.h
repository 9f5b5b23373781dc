/* stocksel - stock-selection research pipeline.
 *
 * C interface to the shared library. All state lives behind the opaque
 * ssp_config handle; commands read inputs and write reports at the paths
 * named in the config. Functions return ssp_status; on failure
 * ssp_last_message() holds a human-readable detail for the calling thread.
 */
#ifndef STOCKSEL_STOCKSEL_H
#define STOCKSEL_STOCKSEL_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SSP_API __declspec(dllexport)
#else
#define SSP_API __attribute__((visibility("default")))
#endif

typedef enum ssp_status {
  SSP_OK = 0,
  SSP_ERR_DATA = 1,    /* malformed or insufficient input data */
  SSP_ERR_CONFIG = 2,  /* bad configuration or missing referenced path */
  SSP_ERR_RUNTIME = 3, /* internal failure (diverged loss, io, ...) */
} ssp_status;

typedef struct ssp_config ssp_config;

SSP_API const char* ssp_version(void);
SSP_API const char* ssp_status_name(ssp_status status);

/* Message set by the most recent API call on this thread. Never NULL. */
SSP_API const char* ssp_last_message(void);

/* --- configuration ----------------------------------------------------- */

/* Creates a config holding every built-in default. Free with ssp_config_free. */
SSP_API ssp_status ssp_config_default(ssp_config** out);
/* Parses a sectioned key-value config file on top of the defaults. */
SSP_API ssp_status ssp_config_load(const char* path, ssp_config** out);
/* Overrides one value; key is "section.key", e.g. "train.epochs". */
SSP_API ssp_status ssp_config_set(ssp_config* cfg, const char* key, const char* value);
/* Renders the effective config; free the returned string with ssp_string_free. */
SSP_API ssp_status ssp_config_render(const ssp_config* cfg, char** out_text);
SSP_API void ssp_config_free(ssp_config* cfg);
SSP_API void ssp_string_free(char* text);

/* --- commands ----------------------------------------------------------- */
/* Each command is deterministic given its config (the root seed included)
 * and reports a one-line summary through ssp_last_message() on success. */

/* Writes seeded synthetic bars, the hidden truth table, and the universe. */
SSP_API ssp_status ssp_run_synth(const ssp_config* cfg);
/* Check-only load of the bar CSV; SSP_OK iff zero rejected rows.
 * path may be NULL to validate the config's paths.bars. */
SSP_API ssp_status ssp_run_validate(const ssp_config* cfg, const char* path);
/* Calibrates quartile cut points and class mean yields on the train range. */
SSP_API ssp_status ssp_run_calibrate(const ssp_config* cfg);
/* Trains the configured strategy (lstm: models S and L; cnn: one model). */
SSP_API ssp_status ssp_run_train(const ssp_config* cfg);
/* suite: optimizers | regularization | keep_prob | cnn_framework |
 * dnn_vs_cnn | window_span */
SSP_API ssp_status ssp_run_ablate(const ssp_config* cfg, const char* suite);
/* Writes expected-return scores for every scorable instrument-day. */
SSP_API ssp_status ssp_run_score(const ssp_config* cfg);
/* Scores the range, applies the selection rule, writes metrics/equity/SVG. */
SSP_API ssp_status ssp_run_backtest(const ssp_config* cfg);
/* synth -> calibrate -> train -> backtest in one call. */
SSP_API ssp_status ssp_run_pipeline(const ssp_config* cfg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STOCKSEL_STOCKSEL_H */

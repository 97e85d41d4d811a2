/*
 * gabp: genetic-algorithm initialized backpropagation networks for
 * safety early-warning scoring. C interface.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a gabp_status; on
 * failure gabp_last_error() describes the problem for the calling thread.
 *
 * Text exports follow the snprintf convention: they write at most `cap`
 * bytes including the terminating NUL and return the full length the text
 * needs, excluding the NUL. Pass buf = NULL, cap = 0 to size a buffer.
 */
#ifndef GABP_GABP_H
#define GABP_GABP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GABP_BUILDING_LIBRARY)
#    define GABP_API __declspec(dllexport)
#  else
#    define GABP_API __declspec(dllimport)
#  endif
#else
#  define GABP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gabp_status {
  GABP_OK = 0,
  GABP_E_INVALID_ARGUMENT = 1,
  GABP_E_IO = 2,
  GABP_E_PARSE = 3,
  GABP_E_DIMENSION = 4,
  GABP_E_NUMERIC = 5,
  GABP_E_MISMATCH = 6,
  GABP_E_INTERNAL = 99
} gabp_status;

GABP_API const char* gabp_last_error(void);
GABP_API const char* gabp_status_name(gabp_status status);
GABP_API const char* gabp_version(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct gabp_shape {
  size_t inputs;
  size_t hidden;
  size_t outputs;
} gabp_shape;

typedef struct gabp_ga_config {
  size_t population_size;
  double crossover_prob;
  double mutation_prob;
  size_t max_generations;
  double gene_min;
  double gene_max;
  double selection_k;
  uint64_t seed;
} gabp_ga_config;

typedef enum gabp_trainer { GABP_TRAINER_LM = 0, GABP_TRAINER_GD = 1 } gabp_trainer;

typedef struct gabp_train_config {
  gabp_trainer trainer;
  double learning_rate;
  double goal_mse;
  size_t max_iterations;
  double lm_damping_init;
  double lm_damping_factor;
  size_t lm_max_retries;
  double lm_damping_max;
} gabp_train_config;

GABP_API gabp_shape gabp_shape_default(void);
GABP_API void gabp_ga_config_default(gabp_ga_config* cfg);
GABP_API void gabp_train_config_default(gabp_train_config* cfg);

GABP_API gabp_status gabp_hidden_layer_size(size_t inputs, size_t outputs, int adjust,
                                            size_t* out);
GABP_API size_t gabp_chromosome_length(gabp_shape shape);

/* ---- indicator schema and warning levels ------------------------------ */

GABP_API size_t gabp_schema_size(void);
GABP_API const char* gabp_schema_code(size_t index);
GABP_API const char* gabp_schema_name(size_t index);

typedef enum gabp_warning_level {
  GABP_LEVEL_HIGH = 0,
  GABP_LEVEL_HIGHER = 1,
  GABP_LEVEL_MEDIUM = 2,
  GABP_LEVEL_LOWER = 3,
  GABP_LEVEL_LOW = 4
} gabp_warning_level;

GABP_API gabp_warning_level gabp_classify_warning(double score);
GABP_API const char* gabp_warning_level_name(gabp_warning_level level);

/* ---- datasets --------------------------------------------------------- */

typedef struct gabp_dataset gabp_dataset;

typedef enum gabp_target_mode {
  GABP_TARGET_NONE = 0,
  GABP_TARGET_REQUIRED = 1,
  GABP_TARGET_AUTO = 2
} gabp_target_mode;

GABP_API gabp_status gabp_dataset_load(const char* path, size_t n_features,
                                       gabp_target_mode mode, gabp_dataset** out);
GABP_API gabp_status gabp_dataset_create(size_t n_features, gabp_dataset** out);
/* `targets` may be NULL for an unlabeled row; otherwise n_targets >= 1. */
GABP_API gabp_status gabp_dataset_append(gabp_dataset* ds, const double* features,
                                         size_t n_features, const double* targets,
                                         size_t n_targets);
GABP_API size_t gabp_dataset_size(const gabp_dataset* ds);
GABP_API size_t gabp_dataset_feature_count(const gabp_dataset* ds);
GABP_API int gabp_dataset_has_targets(const gabp_dataset* ds);
GABP_API gabp_status gabp_dataset_features(const gabp_dataset* ds, size_t row, double* out,
                                           size_t cap);
GABP_API gabp_status gabp_dataset_target(const gabp_dataset* ds, size_t row, double* out);
GABP_API size_t gabp_dataset_to_csv(const gabp_dataset* ds, char* buf, size_t cap);
GABP_API void gabp_dataset_free(gabp_dataset* ds);

/* Synthetic rows from a random ground-truth network; n_train = 0 keeps the
 * default 10:3 train/test proportion. */
GABP_API gabp_status gabp_synth_dataset(size_t n_samples, size_t n_train, gabp_shape shape,
                                        double noise_sd, double gene_min, double gene_max,
                                        uint64_t seed, gabp_dataset** train,
                                        gabp_dataset** test);

/* ---- normalization ---------------------------------------------------- */

typedef struct gabp_norm gabp_norm;

/* cost_flags: NULL for all benefit-type, else one flag per feature. */
GABP_API gabp_status gabp_norm_fit(const gabp_dataset* raw, const int* cost_flags,
                                   gabp_norm** out);
GABP_API gabp_status gabp_norm_apply(const gabp_norm* norm, const gabp_dataset* raw,
                                     gabp_dataset** out);
GABP_API gabp_status gabp_norm_column(const gabp_norm* norm, size_t column, double* min,
                                      double* max, int* is_cost);
GABP_API void gabp_norm_free(gabp_norm* norm);

/* ---- models ----------------------------------------------------------- */

typedef struct gabp_model gabp_model;

typedef struct gabp_metrics {
  double mse;
  double level_accuracy;
  size_t samples;
} gabp_metrics;

GABP_API gabp_status gabp_model_from_genes(gabp_shape shape, const double* genes, size_t n_genes,
                                           gabp_model** out);
GABP_API gabp_shape gabp_model_shape(const gabp_model* model);
GABP_API gabp_status gabp_model_genes(const gabp_model* model, double* out, size_t cap);
/* Stores a copy of `norm`; later predictions normalize raw features first. */
GABP_API gabp_status gabp_model_set_normalization(gabp_model* model, const gabp_norm* norm);
GABP_API int gabp_model_has_normalization(const gabp_model* model);
GABP_API gabp_status gabp_model_predict(const gabp_model* model, const double* raw_features,
                                        size_t n_features, double* outputs, size_t n_outputs);
GABP_API gabp_status gabp_model_evaluate(const gabp_model* model, const gabp_dataset* raw,
                                         gabp_metrics* out);
GABP_API gabp_status gabp_model_parse(const char* text, gabp_model** out);
GABP_API gabp_status gabp_model_load(const char* path, gabp_model** out);
GABP_API size_t gabp_model_to_text(const gabp_model* model, char* buf, size_t cap);
GABP_API void gabp_model_free(gabp_model* model);

/* ---- training runs ---------------------------------------------------- */

typedef struct gabp_report gabp_report;

typedef enum gabp_variant { GABP_VARIANT_GABP = 0, GABP_VARIANT_BP = 1 } gabp_variant;

typedef enum gabp_stop_reason {
  GABP_STOP_GOAL = 0,
  GABP_STOP_MAX_ITER = 1,
  GABP_STOP_DAMPING_LIMIT = 2
} gabp_stop_reason;

typedef struct gabp_run_summary {
  gabp_variant variant;
  gabp_stop_reason stop;
  uint64_t seed;
  size_t iterations;
  size_t generations;
  double initial_sse;
  double final_sse;
  gabp_metrics train;
  gabp_metrics test; /* samples == 0 when there was no test split */
  double seconds;
} gabp_run_summary;

/* Train and test rows must already be normalized. `test` may be NULL. */
GABP_API gabp_status gabp_run_gabp(const gabp_dataset* train, const gabp_dataset* test,
                                   gabp_shape shape, const gabp_ga_config* ga,
                                   const gabp_train_config* training, gabp_report** out);
GABP_API gabp_status gabp_run_bp(const gabp_dataset* train, const gabp_dataset* test,
                                 gabp_shape shape, const gabp_train_config* training,
                                 uint64_t seed, double gene_min, double gene_max,
                                 gabp_report** out);
GABP_API gabp_status gabp_report_summary(const gabp_report* report, gabp_run_summary* out);
/* The trained network, without normalization attached. */
GABP_API gabp_status gabp_report_model(const gabp_report* report, gabp_model** out);
GABP_API size_t gabp_report_curve_csv(const gabp_report* report, char* buf, size_t cap);
GABP_API size_t gabp_report_trace_csv(const gabp_report* report, char* buf, size_t cap);
GABP_API size_t gabp_report_summary_csv(const gabp_report* report, char* buf, size_t cap);
GABP_API void gabp_report_free(gabp_report* report);

/* ---- comparisons ------------------------------------------------------ */

typedef struct gabp_comparison gabp_comparison;

GABP_API gabp_status gabp_compare(const gabp_report* gabp_run, const gabp_report* bp_run,
                                  gabp_comparison** out);
GABP_API double gabp_comparison_reduction(const gabp_comparison* cmp);
GABP_API size_t gabp_comparison_rows(const gabp_comparison* cmp);
GABP_API size_t gabp_comparison_errors_csv(const gabp_comparison* cmp, char* buf, size_t cap);
GABP_API size_t gabp_comparison_curves_csv(const gabp_comparison* cmp, char* buf, size_t cap);
GABP_API size_t gabp_comparison_curves_svg(const gabp_comparison* cmp, char* buf, size_t cap);
GABP_API size_t gabp_comparison_predictions_svg(const gabp_comparison* cmp, char* buf,
                                                size_t cap);
GABP_API void gabp_comparison_free(gabp_comparison* cmp);

#ifdef __cplusplus
}
#endif

#endif /* GABP_GABP_H */

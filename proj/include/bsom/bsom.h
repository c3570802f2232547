/*
 * C interface to the bsom library: self-organizing map training and
 * Bayesian-blocks partitioning of trained maps.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a bsom_status; on failure bsom_last_error()
 * describes the problem (per thread, valid until the next failing call).
 * Strings returned through char** are heap-allocated and must be released
 * with bsom_string_free.
 */
#ifndef BSOM_BSOM_H
#define BSOM_BSOM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BSOM_BUILDING_LIBRARY)
#    define BSOM_API __declspec(dllexport)
#  else
#    define BSOM_API __declspec(dllimport)
#  endif
#else
#  define BSOM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsom_status {
  BSOM_OK = 0,
  BSOM_ERR_INVALID_ARGUMENT = 1,
  BSOM_ERR_IO = 2,
  BSOM_ERR_PARSE = 3,
  BSOM_ERR_NUMERIC = 4,
  BSOM_ERR_DEGENERATE = 5,
  BSOM_ERR_TOO_LARGE = 6,
  BSOM_ERR_VERSION_MISMATCH = 7,
  BSOM_ERR_INTERNAL = 99
} bsom_status;

typedef struct bsom_dataset bsom_dataset;
typedef struct bsom_map bsom_map;
typedef struct bsom_partition bsom_partition;

BSOM_API const char* bsom_version(void);
BSOM_API const char* bsom_last_error(void);
BSOM_API const char* bsom_status_name(bsom_status status);
BSOM_API void bsom_string_free(char* s);

/* Writes `content` to `path` through a temporary file and rename. */
BSOM_API bsom_status bsom_write_text_file(const char* path, const char* content);

/* ---- datasets ---------------------------------------------------------- */

/* `label_column` may be NULL for an unlabeled dataset. */
BSOM_API bsom_status bsom_dataset_load_csv(const char* path, const char* label_column,
                                           bsom_dataset** out);
BSOM_API void bsom_dataset_free(bsom_dataset* dataset);
BSOM_API size_t bsom_dataset_size(const bsom_dataset* dataset);
BSOM_API size_t bsom_dataset_dim(const bsom_dataset* dataset);
BSOM_API int bsom_dataset_has_labels(const bsom_dataset* dataset);
BSOM_API size_t bsom_dataset_class_count(const bsom_dataset* dataset);
/* Per-attribute minimum and maximum; both arrays hold bsom_dataset_dim() values. */
BSOM_API bsom_status bsom_dataset_summary(const bsom_dataset* dataset, double* min_out,
                                          double* max_out);

/* ---- self-organizing maps ---------------------------------------------- */

#define BSOM_MAX_NEIGHBORHOOD_STEPS 8

typedef struct bsom_som_config {
  int rows;
  int cols;
  int epochs;
  double lr_start;
  double lr_end;
  /* Half-width neighborhood_half_width[k] applies from epoch fraction
     neighborhood_fraction[k] onward. */
  size_t neighborhood_steps;
  double neighborhood_fraction[BSOM_MAX_NEIGHBORHOOD_STEPS];
  int neighborhood_half_width[BSOM_MAX_NEIGHBORHOOD_STEPS];
  double conscience_beta;
  double conscience_gamma;
  uint64_t seed;
} bsom_som_config;

BSOM_API void bsom_som_config_default(bsom_som_config* config);
BSOM_API bsom_status bsom_train(const bsom_dataset* dataset, const bsom_som_config* config,
                                bsom_map** out);
BSOM_API bsom_status bsom_map_load(const char* path, bsom_map** out);
BSOM_API bsom_status bsom_map_save(const bsom_map* map, const char* path);
BSOM_API void bsom_map_free(bsom_map* map);
BSOM_API int bsom_map_rows(const bsom_map* map);
BSOM_API int bsom_map_cols(const bsom_map* map);
BSOM_API bsom_status bsom_map_population(const bsom_map* map, int row, int col, size_t* out);
BSOM_API bsom_status bsom_map_quantization_error(const bsom_map* map,
                                                 const bsom_dataset* dataset, double* out);

/* ---- cost function ----------------------------------------------------- */

typedef enum bsom_range_rule { BSOM_RANGE_TWO_SPAN = 0, BSOM_RANGE_TWO_MAX = 1 } bsom_range_rule;
typedef enum bsom_range_exponent {
  BSOM_EXPONENT_PER_BLOCK = 0,
  BSOM_EXPONENT_PER_PE = 1
} bsom_range_exponent;
typedef enum bsom_scale_rule {
  BSOM_SCALE_SQRT_N = 0,
  BSOM_SCALE_UNIT = 1,
  BSOM_SCALE_LINEAR_N = 2
} bsom_scale_rule;

typedef struct bsom_cost_settings {
  bsom_range_rule range_rule;
  bsom_range_exponent range_exponent;
  bsom_scale_rule scale_rule;
  double sigma_const;
  double sigma_floor_frac;
  double f_range;
  double f_sigma;
} bsom_cost_settings;

BSOM_API void bsom_cost_settings_default(bsom_cost_settings* settings);
/* Sets one run-config key: range_rule, range_exponent, n_scale_rule,
   sigma_const, sigma_floor_frac, f_R, f_sigma. */
BSOM_API bsom_status bsom_cost_settings_set(bsom_cost_settings* settings, const char* key,
                                            const char* value);

/* ---- partitions -------------------------------------------------------- */

BSOM_API bsom_status bsom_partition_som(const bsom_map* map, const bsom_cost_settings* settings,
                                        bsom_partition** out);
BSOM_API bsom_status bsom_partition_exhaustive(const bsom_map* map,
                                               const bsom_cost_settings* settings,
                                               int cell_limit, bsom_partition** out,
                                               size_t* candidates);
BSOM_API bsom_status bsom_partition_threshold(const bsom_map* map, double threshold,
                                              int normalize, bsom_partition** out);
BSOM_API bsom_status bsom_partition_oracle(const bsom_map* map, const bsom_dataset* dataset,
                                           bsom_partition** out);
BSOM_API bsom_status bsom_partition_load(const char* path, bsom_partition** out);
BSOM_API bsom_status bsom_partition_save(const bsom_partition* partition, const char* path);
BSOM_API void bsom_partition_free(bsom_partition* partition);
BSOM_API int bsom_partition_block_count(const bsom_partition* partition);
BSOM_API double bsom_partition_cost(const bsom_partition* partition);
/* Copies the row-major block assignment; `len` must be rows * cols. */
BSOM_API bsom_status bsom_partition_block_of(const bsom_partition* partition, int* out,
                                             size_t len);
/* Cost of `partition` on `map` under `settings`. */
BSOM_API bsom_status bsom_partition_evaluate_cost(const bsom_partition* partition,
                                                  const bsom_map* map,
                                                  const bsom_cost_settings* settings,
                                                  double* out);

/* Boundary strengths between adjacent PEs as CSV
   (row_a,col_a,row_b,col_b,strength; NA where a PE is empty). */
BSOM_API bsom_status bsom_boundaries_csv(const bsom_map* map, int normalize, char** out);

/* ---- evaluation -------------------------------------------------------- */

typedef enum bsom_format { BSOM_FORMAT_TEXT = 0, BSOM_FORMAT_JSON = 1 } bsom_format;

typedef struct bsom_eval_summary {
  size_t n_samples;
  size_t correct;
  int blocks;
  double accuracy;
  double p_e;
  double kappa;
} bsom_eval_summary;

/* `summary` and `report` may each be NULL. */
BSOM_API bsom_status bsom_evaluate(const bsom_partition* partition, const bsom_map* map,
                                   const bsom_dataset* dataset, bsom_format format,
                                   bsom_eval_summary* summary, char** report);

/* ---- sensitivity ------------------------------------------------------- */

typedef struct bsom_sweep_spec {
  int points;     /* grid points per axis */
  double lo_exp;  /* factors span 10^lo_exp .. 10^hi_exp */
  double hi_exp;
  unsigned threads;
} bsom_sweep_spec;

BSOM_API void bsom_sweep_spec_default(bsom_sweep_spec* spec);
/* Stability CSV (f_R,f_sigma,equal_to_reference,signature_hash,n_blocks) and
   the spans of the stable rectangle around (1, 1). Any output may be NULL. */
BSOM_API bsom_status bsom_sweep(const bsom_map* map, const bsom_cost_settings* base,
                                const bsom_sweep_spec* spec, char** csv, double* span_range,
                                double* span_sigma);

/* ---- rendering --------------------------------------------------------- */

/* `partition` and `dataset` may be NULL. */
BSOM_API bsom_status bsom_render_map(const bsom_map* map, const bsom_partition* partition,
                                     const bsom_dataset* dataset, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BSOM_BSOM_H */

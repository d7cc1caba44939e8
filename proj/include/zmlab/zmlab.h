#ifndef ZMLAB_H
#define ZMLAB_H

/*
 * C interface to zmlab: Ziv-Merhav style cross-entropy estimation, source
 * models and the experiment harness. All objects are opaque handles owned by
 * the caller and released with the matching *_destroy function. Every
 * fallible call returns a zmlab_status; on failure zmlab_last_error() holds a
 * one-line description for the calling thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ZMLAB_BUILDING)
#    define ZMLAB_API __declspec(dllexport)
#  else
#    define ZMLAB_API __declspec(dllimport)
#  endif
#else
#  define ZMLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zmlab_status {
    ZMLAB_OK = 0,
    ZMLAB_E_UNKNOWN_SYMBOL = 1,
    ZMLAB_E_EMPTY_REFERENCE = 2,
    ZMLAB_E_BAD_LENGTH = 3,
    ZMLAB_E_EMPTY_INPUT = 4,
    ZMLAB_E_DEGENERATE_N = 5,
    ZMLAB_E_INVALID_MODEL = 6,
    ZMLAB_E_TRUNCATION_TOO_TIGHT = 7,
    ZMLAB_E_NOT_IRREDUCIBLE = 8,
    ZMLAB_E_BAD_GAMMA = 9,
    ZMLAB_E_ALPHABET_MISMATCH = 10,
    ZMLAB_E_TOO_LARGE = 11,
    ZMLAB_E_GRID_MISSING = 12,
    ZMLAB_E_CONFIG = 13,
    ZMLAB_E_IO = 14,
    ZMLAB_E_INVALID_ARGUMENT = 15,
    ZMLAB_E_INTERNAL = 99
} zmlab_status;

typedef enum zmlab_estimator {
    ZMLAB_EST_MZM = 0,
    ZMLAB_EST_MZM_UNCORRECTED = 1,
    ZMLAB_EST_ZM = 2,
    ZMLAB_EST_LONGEST_MATCH = 3
} zmlab_estimator;

typedef enum zmlab_parse_kind {
    ZMLAB_PARSE_ZM = 0,
    ZMLAB_PARSE_MZM = 1
} zmlab_parse_kind;

typedef struct zmlab_seq zmlab_seq;
typedef struct zmlab_parse zmlab_parse;
typedef struct zmlab_model zmlab_model;
typedef struct zmlab_config zmlab_config;
typedef struct zmlab_experiment zmlab_experiment;
typedef struct zmlab_diagnosis zmlab_diagnosis;

ZMLAB_API const char* zmlab_version(void);
ZMLAB_API const char* zmlab_status_name(zmlab_status status);
/* Message of the last failed call on this thread; "" after success. */
ZMLAB_API const char* zmlab_last_error(void);

/* Text is copied into `buf` (NUL-terminated) when `cap` is large enough;
 * `needed` receives the length without the terminator. Returns
 * ZMLAB_E_BAD_LENGTH when the buffer is too small. */

/* ---- sequences ---- */
ZMLAB_API zmlab_status zmlab_seq_from_text(const char* text, const char* alphabet, zmlab_seq** out);
ZMLAB_API void zmlab_seq_destroy(zmlab_seq* seq);
ZMLAB_API size_t zmlab_seq_length(const zmlab_seq* seq);
ZMLAB_API zmlab_status zmlab_seq_to_text(const zmlab_seq* seq, char* buf, size_t cap, size_t* needed);

/* ---- matching and parsing ---- */
/* `found` is 0 when y_1^l never occurs in x (infinite waiting time). */
ZMLAB_API zmlab_status zmlab_waiting_time(const zmlab_seq* y, const zmlab_seq* x, size_t ell,
                                          size_t* position, int* found);
ZMLAB_API zmlab_status zmlab_match_length(const zmlab_seq* y, const zmlab_seq* x, size_t n,
                                          size_t* out);
ZMLAB_API zmlab_status zmlab_parse_run(zmlab_parse_kind kind, const zmlab_seq* y, const zmlab_seq* x,
                                       size_t n, zmlab_parse** out);
ZMLAB_API void zmlab_parse_destroy(zmlab_parse* parse);
ZMLAB_API size_t zmlab_parse_word_count(const zmlab_parse* parse);
/* Exclusive end offset of word i, or 0 when i is out of range. */
ZMLAB_API size_t zmlab_parse_boundary(const zmlab_parse* parse, size_t i);
ZMLAB_API int zmlab_parse_truncated_last(const zmlab_parse* parse);
/* Words joined by '|'. */
ZMLAB_API zmlab_status zmlab_parse_format(const zmlab_parse* parse, char* buf, size_t cap, size_t* needed);
/* Value in nats; MZM may be +inf. */
ZMLAB_API zmlab_status zmlab_estimate(zmlab_estimator kind, const zmlab_seq* y, const zmlab_seq* x,
                                      size_t n, double* out);

/* ---- source models ---- */
/* `ref` is a model file path or a builtin name (fair_coin,
 * countable_n_squared, countable_n_plus_log). */
ZMLAB_API zmlab_status zmlab_model_load(const char* ref, zmlab_model** out);
ZMLAB_API zmlab_status zmlab_model_from_json(const char* json_text, zmlab_model** out);
ZMLAB_API void zmlab_model_destroy(zmlab_model* model);
ZMLAB_API zmlab_status zmlab_model_sample(const zmlab_model* model, size_t n, uint64_t seed,
                                          zmlab_seq** out);
ZMLAB_API zmlab_status zmlab_model_log_marginal(const zmlab_model* model, const zmlab_seq* word,
                                                double* out);

/* ---- experiment harness ---- */
ZMLAB_API zmlab_status zmlab_config_load(const char* path, zmlab_config** out);
ZMLAB_API zmlab_status zmlab_config_from_json(const char* json_text, const char* base_dir,
                                              zmlab_config** out);
ZMLAB_API void zmlab_config_destroy(zmlab_config* config);
ZMLAB_API const char* zmlab_config_output_dir(const zmlab_config* config);

/* Runs the estimator study and writes estimates.csv, summary.csv and smb.csv
 * (when configured) into `output_dir`, or the config's output_dir if NULL. */
ZMLAB_API zmlab_status zmlab_experiment_run(const zmlab_config* config, const char* output_dir,
                                            zmlab_experiment** out);
ZMLAB_API void zmlab_experiment_destroy(zmlab_experiment* experiment);
/* Returns 1 and writes the reference h_c when one is known. */
ZMLAB_API int zmlab_experiment_reference(const zmlab_experiment* experiment, double* out);
ZMLAB_API const char* zmlab_experiment_reference_source(const zmlab_experiment* experiment);
ZMLAB_API size_t zmlab_experiment_summary_rows(const zmlab_experiment* experiment);
ZMLAB_API zmlab_status zmlab_experiment_summary_row(const zmlab_experiment* experiment, size_t i,
                                                    const char** estimator, size_t* n,
                                                    double* median, double* q1, double* q3);

/* Writes the SMB series of the config (smb section required) to csv_path;
 * `mean_last` receives the trial mean at the largest n. */
ZMLAB_API zmlab_status zmlab_smb_write(const zmlab_config* config, const char* csv_path,
                                       double* mean_last);
/* q_n(alpha)/n over alpha_min..alpha_max in `steps` intervals. */
ZMLAB_API zmlab_status zmlab_pressure_write(const zmlab_config* config, size_t n, double alpha_min,
                                            double alpha_max, size_t steps, const char* csv_path);

ZMLAB_API zmlab_status zmlab_diagnose(const zmlab_config* config, zmlab_diagnosis** out);
ZMLAB_API void zmlab_diagnosis_destroy(zmlab_diagnosis* diagnosis);
ZMLAB_API size_t zmlab_diagnosis_nd_points(const zmlab_diagnosis* diagnosis);
ZMLAB_API zmlab_status zmlab_diagnosis_nd_point(const zmlab_diagnosis* diagnosis, size_t i,
                                                size_t* n, double* q_over_n);
/* "NEGATIVE" or "INCONCLUSIVE". */
ZMLAB_API const char* zmlab_diagnosis_nd_verdict(const zmlab_diagnosis* diagnosis);
/* Fitted a in q_n(-1)/n ~ a + b/n over the tail of the grid. */
ZMLAB_API double zmlab_diagnosis_nd_limit(const zmlab_diagnosis* diagnosis);
ZMLAB_API void zmlab_diagnosis_se(const zmlab_diagnosis* diagnosis, double* beta,
                                  double* gamma_minus, double* worst_residual,
                                  double* loglog_slope);

#ifdef __cplusplus
}
#endif

#endif /* ZMLAB_H */

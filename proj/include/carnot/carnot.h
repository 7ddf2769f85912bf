#ifndef CARNOT_CARNOT_H
#define CARNOT_CARNOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CARNOT_API __declspec(dllexport)
#else
#define CARNOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum carnot_status {
  CARNOT_OK = 0,
  CARNOT_ERR_INVALID_ARGUMENT = 1,
  CARNOT_ERR_PARSE = 2,
  CARNOT_ERR_GROUP_MISMATCH = 3,
  CARNOT_ERR_DOMAIN = 4,
  CARNOT_ERR_UNSUPPORTED = 5,
  CARNOT_ERR_INTERNAL = 6,
  CARNOT_ERR_NULL = 7
} carnot_status;

typedef struct carnot_context carnot_context;
typedef struct carnot_curve carnot_curve;

/* Strings returned through char** are owned by the caller; release them with
   carnot_string_free. Error text for the last failing call on this thread: */
CARNOT_API const char* carnot_last_error(void);
CARNOT_API const char* carnot_status_name(carnot_status status);
CARNOT_API const char* carnot_version(void);
CARNOT_API void carnot_string_free(char* s);

/* group: "f23" or "engel". Defaults: eps = 1, 1/4, 1/4; seed 1; all workers; timing on. */
CARNOT_API carnot_status carnot_context_new(const char* group, carnot_context** out);
CARNOT_API void carnot_context_free(carnot_context* ctx);
/* rationals as "n", "n/d" or finite decimals; NULL keeps the current value */
CARNOT_API carnot_status carnot_context_set_metric(carnot_context* ctx, const char* eps1, const char* eps2, const char* eps3);
CARNOT_API carnot_status carnot_context_set_seed(carnot_context* ctx, uint64_t seed);
CARNOT_API carnot_status carnot_context_set_workers(carnot_context* ctx, unsigned workers);
CARNOT_API carnot_status carnot_context_set_timing(carnot_context* ctx, int enabled);
CARNOT_API carnot_status carnot_context_group(const carnot_context* ctx, const char** name, size_t* dimension);

/* Points and vectors: "a,b,c,..." or a JSON array of strings/integers.
   Results are comma-separated canonical rationals. */
CARNOT_API carnot_status carnot_mul(carnot_context* ctx, const char* x, const char* y, char** out);
CARNOT_API carnot_status carnot_inv(carnot_context* ctx, const char* x, char** out);
CARNOT_API carnot_status carnot_dilate(carnot_context* ctx, const char* lambda, const char* x, char** out);
CARNOT_API carnot_status carnot_exp(carnot_context* ctx, const char* v, char** out);
CARNOT_API carnot_status carnot_log(carnot_context* ctx, const char* x, char** out);

/* JSON {sixth_power, exact, approx, argmax} */
CARNOT_API carnot_status carnot_norm(carnot_context* ctx, const char* x, char** out_json);
/* d(x, y) as in carnot_norm */
CARNOT_API carnot_status carnot_dist(carnot_context* ctx, const char* x, const char* y, char** out_json);
/* inf over lambda of d(w, exp(lambda e)): JSON {exact, lower, upper, argmin, attained} */
CARNOT_API carnot_status carnot_dist_to_subgroup(carnot_context* ctx, const char* w, const char* e, char** out_json);
/* JSON {euclidean, metric, closure, translated} for w against the cone (axis, sigma);
   euclidean only for horizontal w, closure only when axis is X2 */
CARNOT_API carnot_status carnot_cone_test(carnot_context* ctx, const char* w, const char* axis, const char* sigma,
                                          char** out_json);

CARNOT_API carnot_status carnot_curve_new(carnot_context* ctx, unsigned depth, carnot_curve** out);
CARNOT_API void carnot_curve_free(carnot_curve* curve);
CARNOT_API carnot_status carnot_curve_interval_count(const carnot_curve* curve, size_t* count);
CARNOT_API carnot_status carnot_curve_eval(const carnot_curve* curve, const char* t, char** out);
CARNOT_API carnot_status carnot_curve_json(const carnot_curve* curve, char** out_json);
CARNOT_API carnot_status carnot_curve_csv(const carnot_curve* curve, char** out_csv);

/* name: intersect | monte-carlo | transport | reach | engel | curve-verify | calibrate.
   params_json may be NULL or "{}". Writes the report JSON and whether it passed. */
CARNOT_API carnot_status carnot_run_experiment(carnot_context* ctx, const char* name, const char* params_json,
                                               char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif

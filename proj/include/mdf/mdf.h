/* C interface to the MDF-game library.
 *
 * Objects are opaque handles created by *_load / *_build calls and released
 * with the matching *_free. Every fallible call returns an mdf_status; on
 * failure mdf_last_error() describes the problem (thread-local, valid until the
 * next failing call on the same thread). Strings returned through char** are
 * owned by the caller and released with mdf_string_free.
 */
#ifndef MDF_MDF_H
#define MDF_MDF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MDF_API __declspec(dllexport)
#else
#define MDF_API __attribute__((visibility("default")))
#endif

typedef enum mdf_status {
  MDF_OK = 0,
  MDF_ERR_INVALID_ARGUMENT = 1,
  MDF_ERR_PARSE = 2,
  MDF_ERR_SCHEMA = 3,
  MDF_ERR_INVARIANT = 4,
  MDF_ERR_DOMAIN = 5,
  MDF_ERR_ASSUMPTION = 6,
  MDF_ERR_RANGE = 7,
  MDF_ERR_IO = 8,
  MDF_ERR_NOT_SOLVED = 9,
  MDF_ERR_INTERNAL = 10
} mdf_status;

typedef enum mdf_format { MDF_FORMAT_TEXT = 0, MDF_FORMAT_CSV = 1, MDF_FORMAT_JSON = 2 } mdf_format;
typedef enum mdf_search { MDF_SEARCH_BASIN = 0, MDF_SEARCH_GLOBAL = 1 } mdf_search;
typedef enum mdf_oracle { MDF_ORACLE_OFF = 0, MDF_ORACLE_SMALL = 1, MDF_ORACLE_ALL = 2 } mdf_oracle;
typedef enum mdf_rule {
  MDF_RULE_ALTRUISTIC = 0,
  MDF_RULE_FC = 1,
  MDF_RULE_MPC = 2,
  MDF_RULE_ALL = 3 /* reports only */
} mdf_rule;

typedef struct mdf_situation mdf_situation;
typedef struct mdf_game mdf_game;

typedef struct mdf_options {
  double tol;                /* kg; <= 0 selects 1e-6 * Q */
  int grid;                  /* oracle lattice points per axis */
  mdf_oracle oracle;
  unsigned long long seed;   /* multistart and sampled checks */
  mdf_search search;
  unsigned threads;          /* 0: hardware concurrency */
} mdf_options;

typedef struct mdf_coalition_info {
  double value;
  double revenue;
  double total;
  int iterations;
  int harvest_depleted;
  int oracle_checked;
  double oracle_value;
  double oracle_tolerance;
  double oracle_gap;
  int oracle_ok;
} mdf_coalition_info;

MDF_API const char* mdf_version(void);
MDF_API const char* mdf_status_name(mdf_status status);
MDF_API const char* mdf_last_error(void);
MDF_API void mdf_string_free(char* s);

MDF_API void mdf_options_default(mdf_options* opts);

MDF_API mdf_status mdf_situation_load_file(const char* path, mdf_situation** out);
MDF_API mdf_status mdf_situation_load_string(const char* json, mdf_situation** out);
MDF_API void mdf_situation_free(mdf_situation* sit);
MDF_API int mdf_situation_size(const mdf_situation* sit);
MDF_API mdf_status mdf_report_situation(const mdf_situation* sit, mdf_format format, char** out);

MDF_API mdf_status mdf_game_build(const mdf_situation* sit, const mdf_options* opts, mdf_game** out);
MDF_API mdf_status mdf_game_with_compensation(const mdf_game* game, double bbar, mdf_game** out);
MDF_API void mdf_game_free(mdf_game* game);
MDF_API int mdf_game_size(const mdf_game* game);

/* Coalitions are a distributor bitmask (bit i = distributor i + 1) plus a farmer flag. */
MDF_API mdf_status mdf_game_value(const mdf_game* game, unsigned mask, int farmer, double* out);
MDF_API mdf_status mdf_game_revenue(const mdf_game* game, unsigned mask, int farmer, double* out);
/* Writes n orders (zero outside the coalition); len must be at least n. */
MDF_API mdf_status mdf_game_orders(const mdf_game* game, unsigned mask, int farmer, double* out, size_t len);
MDF_API mdf_status mdf_game_coalition_info(const mdf_game* game, unsigned mask, int farmer, mdf_coalition_info* out);

/* Payoffs over N0 (index 0 the farmer); len must be at least n + 1. */
MDF_API mdf_status mdf_allocation(const mdf_game* game, mdf_rule rule, double* payoffs, size_t len);
MDF_API mdf_status mdf_check_core(const mdf_game* game, const double* payoffs, size_t len, int* in_core);

MDF_API mdf_status mdf_report_solve(const mdf_game* game, mdf_format format, char** out);
MDF_API mdf_status mdf_report_allocate(const mdf_game* game, mdf_rule rule, mdf_format format, char** out);
/* *pass is set to 1 when assumptions, shape, oracle and structure checks all hold. */
MDF_API mdf_status mdf_report_check(const mdf_game* game, int samples, unsigned long long seed, mdf_format format,
                                    char** out, int* pass);
MDF_API mdf_status mdf_report_core(const mdf_game* game, const double* payoffs, size_t len, const char* rule,
                                   mdf_format format, char** out, int* in_core);
MDF_API mdf_status mdf_report_sweep(const mdf_game* game, double from, double to, int steps, mdf_format format,
                                    char** out);

#ifdef __cplusplus
}
#endif

#endif /* MDF_MDF_H */

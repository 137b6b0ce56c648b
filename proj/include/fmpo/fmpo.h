#ifndef FMPO_FMPO_H
#define FMPO_FMPO_H

/* C interface to the fmpo library. All objects are opaque handles owned by
   the caller and released with the matching *_free function. Functions
   return a status code; fmpo_last_error() describes the most recent failure
   on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(FMPO_BUILDING_LIBRARY)
#define FMPO_API __attribute__((visibility("default")))
#else
#define FMPO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FMPO_OK = 0,
  FMPO_ERR_CONSISTENCY = 1, /* a check or decomposition failed */
  FMPO_ERR_INPUT = 2,       /* malformed or out-of-range input */
  FMPO_ERR_NULL = 3,        /* null handle or output pointer */
  FMPO_ERR_INTERNAL = 4
} fmpo_status;

typedef struct fmpo_tensor fmpo_tensor;     /* graded tensor */
typedef struct fmpo_mpo fmpo_mpo;           /* site tensor plus closure */
typedef struct fmpo_category fmpo_category; /* fusion rules and F-symbols */
typedef struct fmpo_report fmpo_report;     /* result of a command */

typedef struct {
  double tolerance;
  uint64_t seed;
  size_t max_dense_dim;
  int phase_modulus_factor;
} fmpo_options;

FMPO_API const char* fmpo_version(void);
FMPO_API const char* fmpo_last_error(void);
FMPO_API fmpo_options fmpo_options_default(void);
/* Frees strings returned through char** outputs. */
FMPO_API void fmpo_string_free(char* s);

/* tensors */
FMPO_API fmpo_status fmpo_tensor_from_json(const char* json, fmpo_tensor** out);
FMPO_API fmpo_status fmpo_tensor_to_json(const fmpo_tensor* t, char** out);
FMPO_API void fmpo_tensor_free(fmpo_tensor* t);
FMPO_API fmpo_status fmpo_tensor_rank(const fmpo_tensor* t, int* rank);
FMPO_API fmpo_status fmpo_tensor_parity(const fmpo_tensor* t, int* parity);
/* result leg k is input leg perm[k] */
FMPO_API fmpo_status fmpo_tensor_permute(const fmpo_tensor* t, const int* perm, int n, fmpo_tensor** out);
/* pairs holds npairs (leg of a, leg of b) pairs, flattened */
FMPO_API fmpo_status fmpo_tensor_contract(const fmpo_tensor* a, const fmpo_tensor* b, const int* pairs, int npairs,
                                          fmpo_tensor** out);
FMPO_API fmpo_status fmpo_tensor_max_abs_diff(const fmpo_tensor* a, const fmpo_tensor* b, double* out);

/* fMPOs */
FMPO_API fmpo_status fmpo_mpo_from_json(const char* json, fmpo_mpo** out);
FMPO_API fmpo_status fmpo_mpo_to_json(const fmpo_mpo* m, char** out);
FMPO_API void fmpo_mpo_free(fmpo_mpo* m);
FMPO_API fmpo_status fmpo_mpo_multiply(const fmpo_mpo* a, const fmpo_mpo* b, fmpo_mpo** out);
FMPO_API fmpo_status fmpo_mpo_bond_dim(const fmpo_mpo* m, int* out);
/* Dense operator on L sites: *dim receives its dimension. When values is
   not null it must hold 2 * dim * dim doubles (row-major, re/im pairs). */
FMPO_API fmpo_status fmpo_mpo_close(const fmpo_mpo* m, int L, size_t max_dense_dim, size_t* dim, double* values);
/* Number of graded-simple blocks and the type (0 even, 1 odd) of each;
   types may be null, otherwise it must hold *nblocks entries up to capacity. */
FMPO_API fmpo_status fmpo_mpo_block_types(const fmpo_mpo* m, uint64_t seed, int* nblocks, int* types,
                                          int capacity);

/* fusion categories */
FMPO_API fmpo_status fmpo_category_from_json(const char* json, fmpo_category** out);
FMPO_API void fmpo_category_free(fmpo_category* c);
FMPO_API fmpo_status fmpo_category_num_labels(const fmpo_category* c, int* out);
FMPO_API fmpo_status fmpo_category_pentagon_residual(const fmpo_category* c, double* out);
/* zipper, F-move and pulling-through residuals, in that order */
FMPO_API fmpo_status fmpo_category_stringnet_residuals(const fmpo_category* c, double out[3]);
/* supertrace-closed string-net block of a label */
FMPO_API fmpo_status fmpo_category_block(const fmpo_category* c, int label, fmpo_mpo** out);

/* commands; the report is returned even when the command fails */
FMPO_API fmpo_report* fmpo_cmd_cohomology(const char* group, int degree, const char* coefficients,
                                          const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_spt_classify(const char* group, const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_spt_stack(const char* label_a, const char* label_b, const char* out_path,
                                         const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_pentagon(const char* fsymbols, const fmpo_options* opt);
/* checks: comma-separated subset, or null / empty for the default set */
FMPO_API fmpo_report* fmpo_cmd_stringnet_verify(const char* fsymbols, const char* checks, const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_fmpo_multiply(const char* a, const char* b, const char* out_path,
                                             const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_fmpo_decompose(const char* path, const char* out_prefix, const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_fmpo_fuse(const char* a, const char* b, const char* const* library, int nlibrary,
                                         const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_fmpo_extract_f(const char* const* blocks, int nblocks, const char* out_path,
                                              const char* compare, const fmpo_options* opt);
FMPO_API fmpo_report* fmpo_cmd_fmpo_from_category(const char* fsymbols, const char* out_prefix,
                                                  const fmpo_options* opt);

FMPO_API int fmpo_report_exit_code(const fmpo_report* r);
FMPO_API int fmpo_report_pass(const fmpo_report* r);
/* valid until the report is freed */
FMPO_API const char* fmpo_report_json(const fmpo_report* r);
FMPO_API const char* fmpo_report_text(const fmpo_report* r);
FMPO_API void fmpo_report_free(fmpo_report* r);

#ifdef __cplusplus
}
#endif

#endif

#ifndef DNET_H
#define DNET_H

/* C interface to the digital net library.
 *
 * Every function that can fail returns a dnet_status; on failure the message
 * is available from dnet_last_error() on the same thread. Strings and buffers
 * handed out through char** / void** parameters are released with dnet_free.
 * Coordinate indices are 0-based here; the textual formats (JSON, CSV,
 * integrand names) use 1-based coordinates. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DNET_API __declspec(dllexport)
#else
#define DNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnet_status {
    DNET_OK = 0,
    DNET_ERR_IO = 1,
    DNET_ERR_VALIDATION = 2,
    DNET_ERR_SUITE_FAILED = 3,
    DNET_ERR_RESOURCE = 4,
    DNET_ERR_INTERNAL = 5
} dnet_status;

typedef enum dnet_format { DNET_FORMAT_RAW = 0, DNET_FORMAT_DIRECTION_NUMBERS = 1 } dnet_format;

typedef enum dnet_point_format {
    DNET_POINTS_CSV = 0,     /* fractions */
    DNET_POINTS_CSV_INT = 1, /* integer numerators */
    DNET_POINTS_BINARY = 2   /* little-endian u32 (bits <= 32) or u64 */
} dnet_point_format;

typedef enum dnet_scramble_kind {
    DNET_SCRAMBLE_RANDOM_LINEAR = 0,
    DNET_SCRAMBLE_NESTED_UNIFORM = 1,
    DNET_SCRAMBLE_DIGITAL_SHIFT = 2
} dnet_scramble_kind;

typedef struct dnet_generators dnet_generators;
typedef struct dnet_points dnet_points;

DNET_API const char* dnet_version(void);
DNET_API const char* dnet_last_error(void);
DNET_API void dnet_free(void* p);

/* dims / m <= 0 mean "not given". Direction numbers need both. */
DNET_API dnet_status dnet_generators_load_file(const char* path, dnet_format format, int dims, int m, dnet_generators** out);
DNET_API dnet_status dnet_generators_load_string(const char* text, dnet_format format, int dims, int m, dnet_generators** out);
DNET_API void dnet_generators_destroy(dnet_generators* g);
DNET_API int dnet_generators_dims(const dnet_generators* g);
DNET_API int dnet_generators_m(const dnet_generators* g);
DNET_API dnet_status dnet_generators_to_raw(const dnet_generators* g, char** text);

DNET_API dnet_status dnet_points_generate(const dnet_generators* g, dnet_points** out);
DNET_API dnet_status dnet_points_scramble(const dnet_points* p, dnet_scramble_kind kind, int output_bits, uint64_t seed, dnet_points** out);
DNET_API void dnet_points_destroy(dnet_points* p);
DNET_API size_t dnet_points_count(const dnet_points* p);
DNET_API int dnet_points_dims(const dnet_points* p);
DNET_API int dnet_points_bits(const dnet_points* p);
/* Numerator of coordinate j of point i over 2^bits; 0 when out of range. */
DNET_API uint64_t dnet_points_numerator(const dnet_points* p, size_t i, int j);
DNET_API dnet_status dnet_points_export(const dnet_points* p, dnet_point_format format, char** data, size_t* size);

/* Accepts rls, nus, shift and the long names. */
DNET_API dnet_status dnet_parse_scramble_kind(const char* name, dnet_scramble_kind* out);

DNET_API dnet_status dnet_t_value(const dnet_generators* g, int* t);
DNET_API dnet_status dnet_t_star(const dnet_generators* g, const int* u, size_t usize, int* t_star);
/* *is_zero is set when the gain is 0; otherwise the gain is 2^(*log2_gain). */
DNET_API dnet_status dnet_gain_fast(const dnet_generators* g, const int* u, const int* k, size_t usize, int* log2_gain, int* is_zero);
DNET_API dnet_status dnet_max_gain(const dnet_generators* g, int* log2_gain, int* degenerate);

/* Quality report plus maximal gain. */
DNET_API dnet_status dnet_analyze_json(const dnet_generators* g, int all_subsets, char** json);

/* Subsets given as a flat 0-based index array cut by subset_sizes; n_subsets = 0 visits all.
 * budget = 0 uses the default. csv selects CSV instead of JSON. */
DNET_API dnet_status dnet_gains_report(const dnet_generators* g, int max_depth, const int* subsets_flat, const size_t* subset_sizes,
                                       size_t n_subsets, uint64_t budget, int threads, int csv, char** out);

/* integrand: "prod", "const:<c>" or "haar:<u>:<k>". */
DNET_API dnet_status dnet_integrate_json(const dnet_generators* g, const char* integrand, dnet_scramble_kind kind, int output_bits,
                                         uint64_t seed, int replicates, int threads, char** json);

typedef double (*dnet_integrand_fn)(const double* x, int dims, void* user);
/* The callback may be invoked from several threads when threads != 1. */
DNET_API dnet_status dnet_estimate(const dnet_points* p, dnet_scramble_kind kind, int output_bits, uint64_t seed, dnet_integrand_fn f,
                                   void* user, int replicates, int threads, double* mean, double* variance_of_mean);

DNET_API dnet_status dnet_verify_gain_identity_json(const dnet_generators* g, const int* u, const int* k, size_t usize, int replicates,
                                                    dnet_scramble_kind kind, int output_bits, uint64_t seed, int threads, char** json);

/* suites: comma-separated names or "all". Returns DNET_ERR_SUITE_FAILED with the
 * manifest still written to *json when any check fails. */
DNET_API dnet_status dnet_verify_suite_json(const char* suites, int max_m, int max_s, int trials, uint64_t seed, int threads, char** json);

#ifdef __cplusplus
}
#endif

#endif

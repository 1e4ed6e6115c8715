/* C interface to the knotfield library. */
#ifndef KNOTFIELD_H
#define KNOTFIELD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KF_API __declspec(dllexport)
#else
#define KF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kf_status {
    KF_OK = 0,
    KF_ERR_PARSE = 1,
    KF_ERR_VALIDATION = 2,
    KF_ERR_RESOLUTION = 3,
    KF_ERR_DEGENERATE = 4,
    KF_ERR_DOMAIN = 5,
    KF_ERR_IO = 6,
    KF_ERR_NULL = 7,
    KF_ERR_INTERNAL = 8
} kf_status;

typedef enum kf_evaluator {
    KF_EVAL_INFINITY_TRIANGLE = 0,
    KF_EVAL_INFINITY_QUADRATURE = 1,
    KF_EVAL_TANGENT_DEV_PLUS = 2,
    KF_EVAL_TANGENT_DEV_MINUS = 3,
    KF_EVAL_GAUSS_BONNET = 4
} kf_evaluator;

typedef struct kf_link kf_link;
typedef struct kf_scalar_field kf_scalar_field;
typedef struct kf_vector_field kf_vector_field;
typedef struct kf_framing kf_framing;

typedef struct kf_eval_config {
    double n_inf[3];
    double switch_threshold;
    uint64_t fallback_seed;
    kf_evaluator evaluator;
} kf_eval_config;

typedef struct kf_grid {
    double origin[3];
    double spacing;
    size_t dims[3];
} kf_grid;

/* Message for the most recent failure on the calling thread ("" if none). */
KF_API const char* kf_last_error(void);
KF_API const char* kf_version(void);
KF_API const char* kf_status_name(kf_status status);

KF_API void kf_eval_config_default(kf_eval_config* cfg);
KF_API kf_status kf_evaluator_from_name(const char* name, kf_evaluator* out);
KF_API const char* kf_evaluator_name(kf_evaluator e);

/* Strings returned through char** are owned by the caller. */
KF_API void kf_string_free(char* s);

/* --- links ---------------------------------------------------------------- */

KF_API kf_status kf_link_load(const char* path, kf_link** out);
KF_API kf_status kf_link_parse(const char* text, kf_link** out);
/* Built-in curves: see kf_link_generate_names. */
KF_API kf_status kf_link_generate(const char* name, size_t points, kf_link** out);
KF_API const char* kf_link_generate_names(void);
/* counts[c] points for component c, coordinates packed xyz in order. */
KF_API kf_status kf_link_from_points(size_t components, const size_t* counts, const double* xyz, kf_link** out);
KF_API kf_status kf_link_resample(const kf_link* link, double ds, kf_link** out);
KF_API void kf_link_free(kf_link* link);

KF_API size_t kf_link_components(const kf_link* link);
KF_API size_t kf_link_points(const kf_link* link, size_t component);
KF_API kf_status kf_link_get_points(const kf_link* link, size_t component, double* xyz);
KF_API kf_status kf_link_length(const kf_link* link, size_t component, double* out);
KF_API kf_status kf_link_max_segment(const kf_link* link, double* out);
KF_API kf_status kf_link_min_radius_of_curvature(const kf_link* link, size_t component, double* out);
KF_API kf_status kf_link_save(const kf_link* link, const char* path);
KF_API kf_status kf_link_format(const kf_link* link, char** out);
/* 64 hex characters plus terminator. */
KF_API kf_status kf_link_hash(const kf_link* link, char out[65]);

/* --- invariants ----------------------------------------------------------- */

KF_API kf_status kf_writhe(const kf_link* link, size_t component, double* out);
KF_API kf_status kf_linking_number(const kf_link* link, size_t a, size_t b, long* out, double* residual);
KF_API kf_status kf_projective_twist(const kf_link* link, size_t component, const double x[3], double* out);
KF_API kf_status kf_fuller_writhe_mod2(const kf_link* link, size_t component, const double n_inf[3], double* out);
KF_API kf_status kf_crossing_count(const kf_link* link, size_t component, const double x[3], int* out);
KF_API kf_status kf_total_turning(const kf_link* link, size_t component, const double x[3], double* out);

/* --- solid angle ---------------------------------------------------------- */

KF_API kf_status kf_omega_point(const kf_link* link, const double x[3], const kf_eval_config* cfg, double* out);
/* n points packed xyz. Points on the link get the sentinel value -1. */
KF_API kf_status kf_omega_points(const kf_link* link, const double* xyz, size_t n, const kf_eval_config* cfg,
                                 unsigned workers, double* out);
KF_API kf_status kf_homotopy_delta(const kf_link* k0, const kf_link* k1, const double x[3], double* out);
KF_API kf_status kf_omega_grid(const kf_link* link, const kf_grid* grid, const kf_eval_config* cfg, unsigned workers,
                               kf_scalar_field** out);
KF_API kf_status kf_distance_field(const kf_link* link, const kf_grid* grid, unsigned workers, kf_scalar_field** out);
/* modulation_path may be NULL. */
KF_API kf_status kf_scroll_field(const kf_link* link, const kf_grid* grid, double k, const kf_eval_config* cfg,
                                 const char* modulation_path, unsigned workers, kf_scalar_field** out);

KF_API void kf_scalar_field_free(kf_scalar_field* f);
KF_API size_t kf_scalar_field_size(const kf_scalar_field* f);
KF_API const double* kf_scalar_field_values(const kf_scalar_field* f);
KF_API size_t kf_scalar_field_sentinel_count(const kf_scalar_field* f);
/* Provenance and sentinel list as a JSON object. */
KF_API kf_status kf_scalar_field_meta_json(const kf_scalar_field* f, char** out);
/* Writes <base>.vti-legacy and <base>.raw. */
KF_API kf_status kf_scalar_field_write(const kf_scalar_field* f, const char* base, const char* name);

/* --- directors ------------------------------------------------------------ */

KF_API kf_status kf_planar_director(const kf_scalar_field* omega, kf_vector_field** out);
KF_API kf_status kf_full_director(const kf_scalar_field* omega_k, const kf_scalar_field* omega_l, kf_vector_field** out);
KF_API void kf_vector_field_free(kf_vector_field* f);
KF_API size_t kf_vector_field_size(const kf_vector_field* f);
/* Copies 3 * size doubles, interleaved per node. */
KF_API kf_status kf_vector_field_values(const kf_vector_field* f, double* xyz);
KF_API kf_status kf_vector_field_meta_json(const kf_vector_field* f, char** out);
/* Writes <base>.vti-legacy (scalars dx, dy, dz) and <base>.raw (interleaved). */
KF_API kf_status kf_vector_field_write(const kf_vector_field* f, const char* base);

/* --- framing -------------------------------------------------------------- */

/* eps <= 0 selects the default (0.02 times the minimum radius of curvature). */
KF_API kf_status kf_framing_compute(const kf_link* link, size_t component, double eps, const kf_eval_config* cfg,
                                    unsigned workers, kf_framing** out);
KF_API void kf_framing_free(kf_framing* f);
KF_API size_t kf_framing_size(const kf_framing* f);
KF_API double kf_framing_epsilon(const kf_framing* f);
KF_API double kf_framing_alpha_winding(const kf_framing* f);
/* Each output may be NULL; arrays hold size (s, alpha) or 3 * size (pushoff) doubles. */
KF_API kf_status kf_framing_table(const kf_framing* f, double* s, double* alpha, double* pushoff);
KF_API kf_status kf_framing_self_link(const kf_framing* f, long* out);

/* --- verification --------------------------------------------------------- */

/* JSON report; *passed is 1 when every check passed. */
KF_API kf_status kf_verify(const kf_link* link, size_t points, uint64_t seed, char** report, int* passed);
/* As kf_verify, but a file that fails to load yields a failing report instead of an error. */
KF_API kf_status kf_verify_file(const char* path, size_t points, uint64_t seed, char** report, int* passed);

#ifdef __cplusplus
}
#endif

#endif

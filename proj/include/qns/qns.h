/*
 * qns.h: C interface to the quasinearly subharmonic toolkit.
 *
 * All functions return a qns_status. On failure, qns_last_error() describes
 * the most recent error on the calling thread. Handles are opaque and must be
 * released with their matching *_free function. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * qns_string_free.
 */
#ifndef QNS_QNS_H
#define QNS_QNS_H

#include <stddef.h>
#include <stdint.h>

#if defined(QNS_BUILDING_LIBRARY)
#define QNS_API __attribute__((visibility("default")))
#else
#define QNS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qns_status {
    QNS_OK = 0,
    QNS_ERR_INVALID_INPUT = 1,
    QNS_ERR_CONSTRUCTION = 2,
    QNS_ERR_INTERNAL = 3,
    QNS_ERR_NULL_ARGUMENT = 4,
    QNS_ERR_OUT_OF_RANGE = 5
} qns_status;

typedef struct qns_result qns_result;
typedef struct qns_region qns_region;
typedef struct qns_radius_set qns_radius_set;

QNS_API char const* qns_version(void);
QNS_API char const* qns_last_error(void);
QNS_API void qns_string_free(char* s);

/* Runs a subcommand (analyze-set, check-qns, counterexample, constants,
 * analyze-f, phi) on a JSON config. Input errors are not a failure status:
 * they produce a result whose exit code is 2 and whose report names the
 * error. */
QNS_API qns_status qns_run(char const* command, char const* config_json, qns_result** out);
QNS_API int qns_result_exit_code(qns_result const* r);
/* Report JSON, pretty-printed when indent >= 0, compact otherwise. */
QNS_API qns_status qns_result_report(qns_result const* r, int indent, char** out);
/* Report JSON without its timestamp; identical across reruns. */
QNS_API qns_status qns_result_canonical_report(qns_result const* r, char** out);
QNS_API size_t qns_result_artifact_count(qns_result const* r);
QNS_API char const* qns_result_artifact_name(qns_result const* r, size_t i);
/* Artifact bytes; *size receives the length. Owned by the result. */
QNS_API char const* qns_result_artifact_data(qns_result const* r, size_t i, size_t* size);
QNS_API void qns_result_free(qns_result* r);

QNS_API qns_status qns_region_from_json(char const* json, qns_region** out);
QNS_API qns_status qns_region_to_json(qns_region const* r, char** out);
QNS_API int qns_region_dimension(qns_region const* r);
/* Lebesgue measure; *stderr_out is zero when the value is exact. */
QNS_API qns_status qns_region_measure(qns_region const* r, double* value, double* stderr_out);
/* point holds dimension() coordinates. */
QNS_API qns_status qns_region_contains(qns_region const* r, double const* point, int* inside);
QNS_API void qns_region_free(qns_region* r);

QNS_API qns_status qns_radius_set_from_json(char const* json, qns_radius_set** out);
QNS_API qns_status qns_radius_set_contains(qns_radius_set const* a, double x, int* inside);
QNS_API qns_status qns_radius_set_classify_json(qns_radius_set const* a, char** out);
/* New handle for alpha A^beta. */
QNS_API qns_status qns_radius_set_rescale(qns_radius_set const* a, double alpha, double beta,
                                          qns_radius_set** out);
QNS_API void qns_radius_set_free(qns_radius_set* a);

/* Area of the intersection of planar disks with radii r1, r2 at distance d. */
QNS_API double qns_lens_area(double r1, double r2, double d);
/* 2/3 - sqrt(3)/(2 pi) */
QNS_API double qns_lens_constant(void);

#ifdef __cplusplus
}
#endif

#endif

/* C interface to the qplab library. All functions are thread-compatible;
 * error text is kept per thread and read with qplab_last_error(). */
#ifndef QPLAB_QPLAB_H
#define QPLAB_QPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(QPLAB_BUILDING_LIBRARY)
#define QPLAB_API __attribute__((visibility("default")))
#else
#define QPLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qplab_status {
  QPLAB_OK = 0,
  QPLAB_CHECK_FAILED = 1, /* computed, but some report check does not hold */
  QPLAB_USAGE_ERROR = 2,  /* malformed request or argument */
  QPLAB_INVALID_INPUT = 3,/* unreadable, malformed or non-group input */
  QPLAB_CAP_EXCEEDED = 4,
  QPLAB_NUMERIC_ERROR = 5,
  QPLAB_IO_ERROR = 6,
  QPLAB_INTERNAL_ERROR = 7
} qplab_status;

typedef struct qplab_group qplab_group;

QPLAB_API const char* qplab_version(void);

/* Message for the last non-OK status returned on this thread. */
QPLAB_API const char* qplab_last_error(void);

/* Family descriptor such as "psl2:7" or "product(cyclic:2,symmetric:3)". */
QPLAB_API qplab_status qplab_group_build(const char* descriptor, qplab_group** out);
/* .cay or .gens file, or a family descriptor. */
QPLAB_API qplab_status qplab_group_load(const char* source, qplab_group** out);
QPLAB_API qplab_status qplab_group_save_cay(const qplab_group* g, const char* path);
QPLAB_API size_t qplab_group_order(const qplab_group* g);
QPLAB_API uint64_t qplab_group_hash(const qplab_group* g);
QPLAB_API qplab_status qplab_group_mul(const qplab_group* g, uint32_t a, uint32_t b, uint32_t* out);
QPLAB_API qplab_status qplab_group_delta(const qplab_group* g, size_t* out);
QPLAB_API void qplab_group_free(qplab_group* g);

/* Runs one JSON request (see docs/report-schema.md) and stores the rendered
 * report in *out, to be released with qplab_string_free. Returns QPLAB_OK or
 * QPLAB_CHECK_FAILED when a report was produced. */
QPLAB_API qplab_status qplab_run(const char* request_json, char** out);
/* Like qplab_run; *summary receives the one-line summary (may be empty). */
QPLAB_API qplab_status qplab_run_ex(const char* request_json, char** out, char** summary);
QPLAB_API void qplab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

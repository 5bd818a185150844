#ifndef METAKERNEL_H
#define METAKERNEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MkStatus {
  MK_STATUS_OK = 0,
  MK_STATUS_NULL_ARGUMENT = 1,
  MK_STATUS_INVALID_UTF8 = 2,
  MK_STATUS_PARSE_ERROR = 3,
  MK_STATUS_EVENT_ERROR = 4,
  MK_STATUS_EVAL_ERROR = 5,
  // The ledger check found a false fact or an unsound result.
  MK_STATUS_VIOLATIONS = 6,
  MK_STATUS_PANIC = 7,
} MkStatus;

// Opaque session: a world, its metafunctions and context rules, and the
// ledger of consumed facts.
typedef struct MkSession MkSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an empty session. Never returns null.
struct MkSession *mk_session_new(void);

// # Safety
// `s` must come from [`mk_session_new`] and not have been freed.
void mk_session_free(struct MkSession *s);

// Processes a sequence of events. Each query's result line is written to
// `*out`, newline separated.
//
// # Safety
// `s` is a live session, `events` a NUL-terminated string, `out` writable.
enum MkStatus mk_session_events(struct MkSession *s, const char *events, char **out);

// Evaluates `term` under `env`, an association list such as
// `((X . 1) (Y A B))`, in the session's world.
//
// # Safety
// `s` is a live session, `term` and `env` NUL-terminated, `out` writable.
enum MkStatus mk_eval(struct MkSession *s, const char *term, const char *env, char **out);

// Extracts the fact for request `obj`, e.g. `(:formula atom)`, and logs
// it in the session's ledger.
//
// # Safety
// `s` is a live session, `obj` NUL-terminated, `out` writable.
enum MkStatus mk_meta_extract(struct MkSession *s, const char *obj, char **out);

// Checks every logged fact and query result over `samples` seeded
// environments. Writes the report to `*report` (if non-null) and the
// number of violations to `*violations` (if non-null). Returns
// `MK_STATUS_VIOLATIONS` when any were found.
//
// # Safety
// `s` is a live session; the out-pointers are null or writable.
enum MkStatus mk_session_check(struct MkSession *s,
                               size_t samples,
                               uint64_t seed,
                               char **report,
                               size_t *violations);

// Message for the last failed call on this thread, or null. Valid until
// the next call on this thread.
const char *mk_last_error(void);

// # Safety
// `p` is null or a string returned by this library, not yet freed.
void mk_string_free(char *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAKERNEL_H */

#ifndef FDISTINCT_H
#define FDISTINCT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FdStatus {
  FD_STATUS_OK = 0,
  FD_STATUS_NULL_ARGUMENT = 1,
  FD_STATUS_INVALID_UTF8 = 2,
  FD_STATUS_IO = 3,
  FD_STATUS_PARSE = 4,
  FD_STATUS_INVALID_ARGUMENT = 5,
  FD_STATUS_NOT_FOUND = 6,
  FD_STATUS_PANIC = 7,
} FdStatus;

/*
 An alignment graph.
 */
typedef struct FdGraph FdGraph;

/*
 A trained model together with its feature space.
 */
typedef struct FdModel FdModel;

/*
 An entity store written by `fd ingest`.
 */
typedef struct FdStore FdStore;

/*
 One worker's vote on an entity.
 */
typedef struct FdVote {
  const char *worker;
  const char *label;
  /*
   In (0, 1].
   */
  double trust;
} FdVote;

typedef struct FdVerdict {
  bool is_class;
  bool is_physical_object;
} FdVerdict;

typedef struct FdPrediction {
  /*
   +1 for the positive class (C or PO), -1 otherwise.
   */
  int32_t label;
  double score;
} FdPrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message of the last failed call on this thread, or NULL. Valid
 until the next call into this library on the same thread.
 */
const char *fd_last_error(void);

/*
 Trust-weighted agreement of `n` votes on `class`: the trust mass of
 votes for `class` divided by the total trust.

 # Safety
 `votes` points to `n` valid votes; strings are NUL-terminated.
 */
enum FdStatus fd_agreement(const struct FdVote *votes, size_t n, const char *class_, double *out);

/*
 Loads an entity store file.

 # Safety
 `path` is NUL-terminated; `out` is writable.
 */
enum FdStatus fd_store_load(const char *path, struct FdStore **out);

/*
 Number of entity records, 0 for NULL.

 # Safety
 `store` is NULL or a live handle.
 */
size_t fd_store_len(const struct FdStore *store);

/*
 # Safety
 `store` is NULL or a handle from `fd_store_load`, freed at most once.
 */
void fd_store_free(struct FdStore *store);

/*
 Loads `n` alignment TSV files into one graph with the default rules.

 # Safety
 `paths` points to `n` NUL-terminated strings; `out` is writable.
 */
enum FdStatus fd_graph_load(const char *const *paths, size_t n, struct FdGraph **out);

/*
 # Safety
 `graph` is NULL or a handle from `fd_graph_load`, freed at most once.
 */
void fd_graph_free(struct FdGraph *graph);

/*
 Alignment verdicts for one entity IRI. When `store` is given, the
 entity's categories recorded there count as category memberships.

 # Safety
 `graph` is a live handle, `store` NULL or a live handle, `iri`
 NUL-terminated, `out` writable.
 */
enum FdStatus fd_seneca_verdict(const struct FdGraph *graph,
                                const struct FdStore *store,
                                const char *iri,
                                struct FdVerdict *out);

/*
 Loads a model written by `fd train` and the feature space stored next
 to it (`<path>.space.json`).

 # Safety
 `path` is NUL-terminated; `out` is writable.
 */
enum FdStatus fd_model_load(const char *path, struct FdModel **out);

/*
 Whether the model reads alignment verdicts (the D block).

 # Safety
 `model` is NULL or a live handle.
 */
bool fd_model_uses_verdicts(const struct FdModel *model);

/*
 Classifies a store entity. `verdict` is the entity's alignment verdict
 for the model's task; it is ignored unless the model uses it.

 # Safety
 `model` and `store` are live handles, `iri` NUL-terminated, `out`
 writable.
 */
enum FdStatus fd_model_predict(const struct FdModel *model,
                               const struct FdStore *store,
                               const char *iri,
                               bool verdict,
                               struct FdPrediction *out);

/*
 # Safety
 `model` is NULL or a handle from `fd_model_load`, freed at most once.
 */
void fd_model_free(struct FdModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDISTINCT_H */

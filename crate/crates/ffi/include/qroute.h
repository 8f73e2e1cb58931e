/* Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations
 * under the License. */

#ifndef QROUTE_H
#define QROUTE_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Graph families accepted by [`qr_graph_family`].
typedef enum QrFamily {
  // `a` = vertex count.
  QR_FAMILY_PATH = 0,
  // `a` = rim size; the hub is vertex `a`.
  QR_FAMILY_WHEEL = 1,
  // `a` = number of levels.
  QR_FAMILY_LADDER = 2,
  // `a` = dimension.
  QR_FAMILY_HYPERCUBE = 3,
  // `a` = r.
  QR_FAMILY_BUTTERFLY = 4,
  // `a` = vertex count.
  QR_FAMILY_COMPLETE = 5,
  // `a` = side, `b` = dimension.
  QR_FAMILY_GRID = 6,
} QrFamily;

// Routing model for [`qr_route`].
typedef enum QrModel {
  QR_MODEL_SWAP = 0,
  QR_MODEL_SPARSE = 1,
  QR_MODEL_TELEPORT = 2,
} QrModel;

// Status codes returned by every fallible call.
typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  QR_STATUS_INVALID_UTF8 = 2,
  QR_STATUS_INVALID_PARAMETER = 3,
  QR_STATUS_DISCONNECTED = 4,
  QR_STATUS_VERTEX_OUT_OF_RANGE = 5,
  QR_STATUS_CAPACITY = 6,
  QR_STATUS_WRONG_FAMILY = 7,
  QR_STATUS_INSUFFICIENT_BUDGET = 8,
  QR_STATUS_INVALID_SCHEDULE = 9,
  QR_STATUS_BLOCKED = 10,
  QR_STATUS_VERIFICATION_FAILED = 11,
  QR_STATUS_JSON = 12,
  QR_STATUS_IO = 13,
  QR_STATUS_PANIC = 14,
} QrStatus;

// Opaque architecture graph.
typedef struct QrGraph QrGraph;

// Opaque permutation.
typedef struct QrPermutation QrPermutation;

// Opaque schedule.
typedef struct QrSchedule QrSchedule;

// Depths reported by [`qr_advantage`].
typedef struct QrAdvantage {
  uint64_t swap_depth;
  uint64_t tele_depth;
  uint64_t tele_rounds;
  double ratio;
} QrAdvantage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string. Do not free.
const char *qr_version(void);

// Message of the last failed call on this thread, or NULL.
//
// The pointer stays valid until the next call into the library on the
// same thread. Do not free.
const char *qr_last_error_message(void);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void qr_string_free(char *s);

// Build a graph of a named family with the default ancilla budget.
//
// # Safety
// `out` must be writable.
enum QrStatus qr_graph_family(enum QrFamily family, size_t a, size_t b, struct QrGraph **out);

// Build a graph from `num_edges` pairs stored flat in `edges`.
//
// # Safety
// `edges` must hold `2 * num_edges` values; `out` must be writable.
enum QrStatus qr_graph_from_edges(size_t n,
                                  const size_t *edges,
                                  size_t num_edges,
                                  size_t ancilla_budget,
                                  struct QrGraph **out);

// Parse a graph from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum QrStatus qr_graph_from_json(const char *json, struct QrGraph **out);

// Serialise a graph to JSON. Free the result with [`qr_string_free`].
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum QrStatus qr_graph_to_json(const struct QrGraph *g, char **out);

// Number of vertices, or 0 for NULL.
//
// # Safety
// `g` must be NULL or a live handle.
size_t qr_graph_vertex_count(const struct QrGraph *g);

// Number of edges, or 0 for NULL.
//
// # Safety
// `g` must be NULL or a live handle.
size_t qr_graph_edge_count(const struct QrGraph *g);

// Ancilla slots per vertex, or 0 for NULL.
//
// # Safety
// `g` must be NULL or a live handle.
size_t qr_graph_ancilla_budget(const struct QrGraph *g);

// Change the ancilla budget.
//
// # Safety
// `g` must be a live handle.
enum QrStatus qr_graph_set_ancilla_budget(struct QrGraph *g, size_t budget);

// Graph diameter.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum QrStatus qr_graph_diameter(const struct QrGraph *g, size_t *out);

// Expansion and depth bounds as JSON. `exact` enables the exhaustive
// expansion search on small graphs.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum QrStatus qr_graph_bounds_json(const struct QrGraph *g, bool exact, char **out);

// Release a graph. NULL is ignored.
//
// # Safety
// `g` must be NULL or a handle from this library that has not been freed.
void qr_graph_free(struct QrGraph *g);

// Permutation from its image array: vertex `i` maps to `image[i]`.
//
// # Safety
// `image` must hold `len` values; `out` must be writable.
enum QrStatus qr_perm_from_image(const size_t *image, size_t len, struct QrPermutation **out);

// Named permutation on `g`, described as JSON such as
// `{"kind":"rainbow","alpha":0.5}` or `{"kind":"random","seed":7,"k":4}`.
//
// # Safety
// `g` must be a live handle; `kind_json` NUL-terminated; `out` writable.
enum QrStatus qr_perm_generate(const struct QrGraph *g,
                               const char *kind_json,
                               struct QrPermutation **out);

// Parse a permutation from JSON.
//
// # Safety
// `json` must be NUL-terminated; `out` writable.
enum QrStatus qr_perm_from_json(const char *json, struct QrPermutation **out);

// Serialise a permutation to JSON. Free with [`qr_string_free`].
//
// # Safety
// `p` must be a live handle; `out` writable.
enum QrStatus qr_perm_to_json(const struct QrPermutation *p, char **out);

// Length of a permutation, or 0 for NULL.
//
// # Safety
// `p` must be NULL or a live handle.
size_t qr_perm_len(const struct QrPermutation *p);

// Copy the image of `p` into `buf`, which must have room for
// [`qr_perm_len`] values.
//
// # Safety
// `p` must be a live handle; `buf` must hold `cap` writable values.
enum QrStatus qr_perm_image(const struct QrPermutation *p, size_t *buf, size_t cap);

// Release a permutation. NULL is ignored.
//
// # Safety
// `p` must be NULL or a handle from this library that has not been freed.
void qr_perm_free(struct QrPermutation *p);

// Route `p` on `g` under `model`. The schedule is verified before it is
// returned.
//
// # Safety
// `g` and `p` must be live handles; `out` writable.
enum QrStatus qr_route(const struct QrGraph *g,
                       const struct QrPermutation *p,
                       enum QrModel model,
                       struct QrSchedule **out);

// Replay `s` on `g` and check that it realises `p`. Returns
// `VerificationFailed` when it realises a different permutation.
//
// # Safety
// All handles must be live.
enum QrStatus qr_verify(const struct QrGraph *g,
                        const struct QrSchedule *s,
                        const struct QrPermutation *p);

// Depth of a schedule under the default model (`conservative` false) or
// the conservative one. 0 for NULL.
//
// # Safety
// `s` must be NULL or a live handle.
uint64_t qr_schedule_depth(const struct QrSchedule *s, bool conservative);

// Number of teleportation rounds, or 0 for NULL.
//
// # Safety
// `s` must be NULL or a live handle.
size_t qr_schedule_tele_rounds(const struct QrSchedule *s);

// Number of timesteps, or 0 for NULL.
//
// # Safety
// `s` must be NULL or a live handle.
size_t qr_schedule_timesteps(const struct QrSchedule *s);

// Parse a schedule from JSON.
//
// # Safety
// `json` must be NUL-terminated; `out` writable.
enum QrStatus qr_schedule_from_json(const char *json, struct QrSchedule **out);

// Serialise a schedule to JSON. Free with [`qr_string_free`].
//
// # Safety
// `s` must be a live handle; `out` writable.
enum QrStatus qr_schedule_to_json(const struct QrSchedule *s, char **out);

// Release a schedule. NULL is ignored.
//
// # Safety
// `s` must be NULL or a handle from this library that has not been freed.
void qr_schedule_free(struct QrSchedule *s);

// Best swap depth against teleport depth for `p` on `g`.
//
// # Safety
// `g` and `p` must be live handles; `out` writable.
enum QrStatus qr_advantage(const struct QrGraph *g,
                           const struct QrPermutation *p,
                           bool conservative,
                           struct QrAdvantage *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QROUTE_H */

#ifndef HOLIMCAT_H
#define HOLIMCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Mirrors the CLI exit codes, plus ABI-only failures.
 */
typedef enum HcStatus {
  HcStatus_Ok = 0,
  HcStatus_CheckFailed = 1,
  HcStatus_InvalidInput = 2,
  HcStatus_BudgetExceeded = 3,
  HcStatus_NullPointer = 4,
  HcStatus_InvalidUtf8 = 5,
  HcStatus_Panic = 6,
} HcStatus;

/**
 * A parsed input document.
 */
typedef struct HcDocument HcDocument;

/**
 * A finished report.
 */
typedef struct HcReport HcReport;

/**
 * Message for the last failure on this thread, or null if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Library version as a static string.
 */
const char *hc_version(void);

/**
 * Parses a JSON document (category, group, diagram or G-diagram).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum HcStatus hc_document_parse(const char *json, struct HcDocument **out);

/**
 * # Safety
 * `doc` must come from [`hc_document_parse`] and not be freed twice.
 */
void hc_document_free(struct HcDocument *doc);

/**
 * Number of base objects of a diagram document.
 *
 * # Safety
 * `doc` must be a live handle and `out` a writable pointer.
 */
enum HcStatus hc_document_base_objects(const struct HcDocument *doc, uintptr_t *out);

/**
 * Runs every validator; `Ok` when the document is clean, `CheckFailed`
 * otherwise. `out` receives the validation reports either way.
 *
 * # Safety
 * `doc` must be a live handle and `out` a writable pointer.
 */
enum HcStatus hc_validate(const struct HcDocument *doc, struct HcReport **out);

/**
 * Runs a named check (`reedy`, `lemma-iso`, ...). `doc` may be null for
 * kinds that need no input. `options` is null or a JSON object with any of
 * `max_dim`, `budget`, `dim`, `members`, `n`.
 *
 * # Safety
 * `kind` and a non-null `options` must be nul-terminated strings, a non-null
 * `doc` a live handle, and `out` a writable pointer.
 */
enum HcStatus hc_check(const struct HcDocument *doc,
                       const char *kind,
                       const char *options,
                       struct HcReport **out);

/**
 * Builds a named model (`holim`, `bk-pullback`, `total-fiber`,
 * `grothendieck`). Options as for [`hc_check`].
 *
 * # Safety
 * Same contract as [`hc_check`], except `doc` must not be null.
 */
enum HcStatus hc_model(const struct HcDocument *doc,
                       const char *kind,
                       const char *options,
                       struct HcReport **out);

/**
 * The report as JSON with sorted keys. Borrowed from the handle.
 *
 * # Safety
 * `report` must be a live handle.
 */
const char *hc_report_json(const struct HcReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
bool hc_report_passed(const struct HcReport *report);

/**
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void hc_report_free(struct HcReport *report);

#endif  /* HOLIMCAT_H */

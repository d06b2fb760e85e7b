/* hierctrl C API: run hierarchic-control experiments behind an opaque session
 * handle. All functions are thread-compatible (one session per thread). */
#ifndef HIERCTRL_H
#define HIERCTRL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status {
  HC_OK = 0,
  HC_ERR = 1,          /* internal or unclassified failure */
  HC_ERR_CONFIG = 2,   /* config missing, unparsable, or invalid values */
  HC_ERR_REGIONS = 3,  /* region invariants violated after rasterization */
  HC_ERR_SOLVER = 4    /* an iterative solver did not converge */
} hc_status;

typedef struct hc_session hc_session;

/* Create/destroy a session. A session holds one loaded config, the output
 * directory and seed overrides, the last error message, and the summary of
 * the last run. */
hc_session* hc_session_create(void);
void hc_session_destroy(hc_session* s);

/* Load a run config (JSON, // and block comments allowed). */
hc_status hc_load_config_file(hc_session* s, const char* path);
hc_status hc_load_config_json(hc_session* s, const char* json_text);

/* Optional overrides; take effect at the next hc_run. */
hc_status hc_set_output_dir(hc_session* s, const char* dir);
hc_status hc_set_seed(hc_session* s, uint64_t seed);

/* Execute one subcommand:
 *   solve | follower | leader | sweep-eps | sweep-gamma | verify | all
 * Writes run_manifest.json, summary.json and the per-run CSV artifacts into
 * the output directory. Returns HC_OK only if the run completed and every
 * check it performs passed. */
hc_status hc_run(hc_session* s, const char* subcommand);

/* Message for the last failed call on this session ("" if none). Owned by
 * the session, valid until the next call. */
const char* hc_last_error(const hc_session* s);

/* JSON summary of the last completed run ("" before the first run). Owned by
 * the session, valid until the next hc_run. */
const char* hc_summary_json(const hc_session* s);

const char* hc_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HIERCTRL_H */

/* region_grow: curriculum training of goal-conditioned policies under sparse
 * binary rewards, grown outward from a seed state by Brownian resampling with
 * an adaptive exploration variance.
 *
 * C API over the C++ core. All handles are opaque; functions returning
 * rg_status report RG_OK on success and leave a human-readable message in
 * rg_last_error() otherwise. Handle-creating functions return NULL on failure
 * with the message set the same way. Strings passed in are UTF-8 and copied;
 * strings returned stay valid until the next API call on the same thread.
 */
#ifndef REGION_GROW_H
#define REGION_GROW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_INVALID_ARGUMENT = 1,
  RG_ERR_CONFIG = 2,
  RG_ERR_DIMENSION = 3,
  RG_ERR_STATE = 4,
  RG_ERR_IO = 5,
  RG_ERR_DIVERGED = 6,
  RG_ERR_INTERNAL = 7
} rg_status;

const char* rg_status_name(rg_status status);

/* Message for the most recent failure on this thread. */
const char* rg_last_error(void);

const char* rg_version(void);

/* ---- environments ------------------------------------------------------ */

typedef struct rg_env rg_env;

/* name: "lineworld", "reacher" or "maze". config_json: optional JSON object
 * with environment overrides (NULL or "" for defaults). */
rg_env* rg_env_create(const char* name, const char* config_json);
void rg_env_destroy(rg_env* env);
rg_env* rg_env_clone(const rg_env* env);

int rg_env_state_dim(const rg_env* env);
int rg_env_goal_dim(const rg_env* env);
int rg_env_action_dim(const rg_env* env);
int rg_env_horizon(const rg_env* env);

/* Places the agent at the given state and resets the episode clock. */
rg_status rg_env_set_state(rg_env* env, const double* state, size_t len);
rg_status rg_env_set_goal(rg_env* env, const double* goal, size_t len);
rg_status rg_env_clear_goal(rg_env* env);
rg_status rg_env_observe(const rg_env* env, double* out, size_t len);
rg_status rg_env_default_seed_state(const rg_env* env, double* out, size_t len);

typedef struct rg_step_outcome {
  double reward;
  int success;
  int done;
} rg_step_outcome;

/* Applies one action (clipped to the action box); the next state is read via
 * rg_env_observe. Stepping a finished episode is an error. */
rg_status rg_env_step(rg_env* env, const double* action, size_t len,
                      rg_step_outcome* out);

rg_status rg_env_state_to_goal(const rg_env* env, const double* state,
                               size_t state_len, double* goal, size_t goal_len);
rg_status rg_env_is_success(const rg_env* env, const double* state,
                            size_t state_len, const double* goal,
                            size_t goal_len, int* out);

/* ---- training ---------------------------------------------------------- */

typedef struct rg_run rg_run;

/* Parses and validates a training config (JSON text). */
rg_run* rg_run_create(const char* config_json);
void rg_run_destroy(rg_run* run);

rg_status rg_run_set_seed(rg_run* run, uint64_t seed);
rg_status rg_run_set_output_dir(rg_run* run, const char* dir);

/* Blocking. Writes metrics.csv, region snapshots and checkpoints under the
 * output directory. Returns RG_ERR_DIVERGED when training halted on a
 * divergence (outputs up to that point are still written). */
rg_status rg_run_execute(rg_run* run);

/* Success rate of a stored policy over fresh uniform start-goal pairs,
 * deterministic actions. env_config_json may be NULL. */
rg_status rg_evaluate_checkpoint(const char* checkpoint_path,
                                 const char* env_name,
                                 const char* env_config_json, int pairs,
                                 uint64_t seed, double* success_rate);

/* Suite config: {"base": {...}, "variants": [{"name", "overrides"}...],
 * "seeds": [...]}. Runs all (variant, seed) pairs, aggregates per variant. */
rg_status rg_run_suite(const char* suite_config_json, const char* out_dir,
                       int jobs);

/* what: "curves", "variance" or "region". Writes under <run_dir>/plot/. */
rg_status rg_export_plot_data(const char* run_dir, const char* what);

/* Region snapshot records as JSONL; iteration < 0 exports all of them. */
rg_status rg_export_region(const char* run_dir, long iteration,
                           const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* REGION_GROW_H */

/* C interface to the qzvalve trajectory simulator. All handles are opaque.
 * Functions return a qzv_status; on failure a thread-local message is
 * available from qzv_last_error() until the next call on the same thread. */
#ifndef QZVALVE_H
#define QZVALVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QZV_API __declspec(dllexport)
#else
#define QZV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qzv_status {
  QZV_OK = 0,
  QZV_ERR_INVALID_ARGUMENT = 1,
  QZV_ERR_CONFIG = 2,
  QZV_ERR_SECTOR_TOO_LARGE = 3,
  QZV_ERR_PROPAGATION = 4,
  QZV_ERR_IMPOSSIBLE_OUTCOME = 5,
  QZV_ERR_VANISHING_BRANCH = 6,
  QZV_ERR_NOT_CONVERGED = 7,
  QZV_ERR_DEGENERATE_GROUND_STATE = 8,
  QZV_ERR_INSUFFICIENT_DATA = 9,
  QZV_ERR_NOT_APPLICABLE = 10,
  QZV_ERR_GRID_MISMATCH = 11,
  QZV_ERR_IO = 12,
  QZV_ERR_TRAJECTORY_FAILED = 13,
  QZV_ERR_INTERNAL = 14
} qzv_status;

typedef struct qzv_config qzv_config;
typedef struct qzv_report qzv_report;
typedef struct qzv_system qzv_system;
typedef struct qzv_trajectory qzv_trajectory;

QZV_API const char* qzv_version(void);
QZV_API const char* qzv_status_string(qzv_status status);
QZV_API const char* qzv_last_error(void);

/* Configuration documents (JSON). */
QZV_API qzv_status qzv_config_load_file(const char* path, qzv_config** out);
QZV_API qzv_status qzv_config_load_string(const char* json, qzv_config** out);
QZV_API void qzv_config_free(qzv_config* config);
QZV_API qzv_status qzv_config_set_seed(qzv_config* config, uint64_t seed);
QZV_API qzv_status qzv_config_set_workers(qzv_config* config, unsigned workers);
/* Number of runs, one per value of model.M. */
QZV_API qzv_status qzv_config_run_count(const qzv_config* config, size_t* out);

/* Commands. qzv_run returns QZV_ERR_TRAJECTORY_FAILED when any trajectory
 * failed; the report is still produced and the outputs written. */
QZV_API qzv_status qzv_run(const qzv_config* config, const char* out_dir, qzv_report** out);
QZV_API qzv_status qzv_validate(const qzv_config* config, qzv_report** out);
QZV_API qzv_status qzv_oracle(const qzv_config* config, qzv_report** out);

QZV_API const char* qzv_report_text(const qzv_report* report);
QZV_API size_t qzv_report_run_count(const qzv_report* report);
/* Named numeric result of one run, e.g. "dim", "max_infidelity",
 * "detuning_full". QZV_ERR_INVALID_ARGUMENT for unknown keys. */
QZV_API qzv_status qzv_report_metric(const qzv_report* report, size_t run, const char* key,
                                     double* out);
QZV_API void qzv_report_free(qzv_report* report);

/* Direct access to single trajectories. */
QZV_API qzv_status qzv_system_create(const qzv_config* config, size_t run, qzv_system** out);
QZV_API void qzv_system_free(qzv_system* system);
QZV_API qzv_status qzv_system_dim(const qzv_system* system, size_t* out);

QZV_API qzv_status qzv_trajectory_run(const qzv_system* system, size_t index,
                                      qzv_trajectory** out);
QZV_API void qzv_trajectory_free(qzv_trajectory* trajectory);
QZV_API size_t qzv_trajectory_samples(const qzv_trajectory* trajectory);
/* Copy `capacity` values at most; the sample count is the full length. */
QZV_API qzv_status qzv_trajectory_times(const qzv_trajectory* trajectory, double* out,
                                        size_t capacity);
QZV_API qzv_status qzv_trajectory_entropy(const qzv_trajectory* trajectory, double* out,
                                          size_t capacity);
QZV_API qzv_status qzv_trajectory_imbalance(const qzv_trajectory* trajectory, double* out,
                                            size_t capacity);
QZV_API qzv_status qzv_trajectory_xi(const qzv_trajectory* trajectory, double* out);
QZV_API qzv_status qzv_trajectory_seed(const qzv_trajectory* trajectory, uint64_t* out);
QZV_API size_t qzv_trajectory_record_count(const qzv_trajectory* trajectory);
QZV_API qzv_status qzv_trajectory_record(const qzv_trajectory* trajectory, size_t i, double* time,
                                         int* ancilla, double* p1, int* outcome);

#ifdef __cplusplus
}
#endif

#endif

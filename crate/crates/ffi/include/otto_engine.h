#ifndef OTTO_ENGINE_H
#define OTTO_ENGINE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OttoLevelLabel {
  OTTO_LEVEL_LABEL_PLUS_B = 0,
  OTTO_LEVEL_LABEL_MINUS_B = 1,
  OTTO_LEVEL_LABEL_MINUS_J = 2,
  OTTO_LEVEL_LABEL_PLUS_TWO_B = 3,
  OTTO_LEVEL_LABEL_TRIPLET = 4,
  OTTO_LEVEL_LABEL_SINGLET = 5,
  OTTO_LEVEL_LABEL_MINUS_TWO_B = 6,
} OttoLevelLabel;

typedef enum OttoStatus {
  OTTO_STATUS_OK = 0,
  OTTO_STATUS_NULL_POINTER = 1,
  OTTO_STATUS_INVALID_ARGUMENT = 2,
  OTTO_STATUS_INVALID_FIELD = 3,
  OTTO_STATUS_INVALID_BETA = 4,
  OTTO_STATUS_INVALID_CYCLE = 5,
  OTTO_STATUS_NOT_AN_ENGINE = 6,
  /**
   * Malformed operator or state (non-Hermitian, not a channel, non-finite, ...).
   */
  OTTO_STATUS_INVALID_OPERATOR = 7,
  OTTO_STATUS_OUT_OF_RANGE = 8,
  OTTO_STATUS_PANIC = 99,
} OttoStatus;

typedef enum OttoSubstanceKind {
  OTTO_SUBSTANCE_KIND_QUBIT = 0,
  OTTO_SUBSTANCE_KIND_QUTRIT = 1,
  OTTO_SUBSTANCE_KIND_XXZ = 2,
} OttoSubstanceKind;

typedef struct OttoChannel OttoChannel;

typedef struct OttoCycleConfig OttoCycleConfig;

typedef struct OttoCycleRecord OttoCycleRecord;

/**
 * Working substance. `j` is read for qutrits, `jxy` and `jz` for XXZ.
 */
typedef struct OttoSubstance {
  enum OttoSubstanceKind kind;
  double j;
  double jxy;
  double jz;
} OttoSubstance;

/**
 * Cycle totals. Efficiencies are NaN when undefined.
 */
typedef struct OttoCycleSummary {
  double qh;
  double qc;
  double w;
  /**
   * -W/Qh, only in engine mode.
   */
  double eta;
  /**
   * -W/Qh whenever Qh != 0.
   */
  double eta_raw;
  double eta0;
  double idle_heat_hot;
  bool engine_mode;
  bool crossing_warning;
  bool measurement_cools;
  size_t level_count;
} OttoCycleSummary;

typedef struct OttoLevel {
  enum OttoLevelLabel label;
  bool idle;
  double energy_cold;
  double energy_hot;
  double p_cold;
  double p_hot;
  double delta_p;
  double q_hot;
  double q_cold;
} OttoLevel;

/**
 * Closed-form two-bath qutrit cycle. `eta` and `omega` are NaN when undefined.
 */
typedef struct OttoClosedForm {
  double qh;
  double qc;
  double w;
  double eta;
  double omega;
} OttoClosedForm;

typedef struct OttoTheorem1Summary {
  size_t sample_count;
  double min_unital;
  double min_control;
  size_t violations;
} OttoTheorem1Summary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *otto_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *otto_version(void);

/**
 * Projective measurement onto the four-angle qutrit basis (radians).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum OttoStatus otto_channel_su3(double theta,
                                 double phi,
                                 double chi,
                                 double psi,
                                 struct OttoChannel **out);

/**
 * Product spin measurement along unit vectors `n` and `m` (three doubles each).
 *
 * # Safety
 * `n` and `m` must point to three readable doubles; `out` must be writable.
 */
enum OttoStatus otto_channel_local_spin(const double *n, const double *m, struct OttoChannel **out);

/**
 * # Safety
 * `ch` must be a valid channel handle; `out` must be writable.
 */
enum OttoStatus otto_channel_dim(const struct OttoChannel *ch, size_t *out);

/**
 * # Safety
 * `ch` must be a valid channel handle; `out` must be writable.
 */
enum OttoStatus otto_channel_is_unital(const struct OttoChannel *ch, bool *out);

/**
 * # Safety
 * `ch` must be null or a handle from this library, not yet freed.
 */
void otto_channel_free(struct OttoChannel *ch);

/**
 * Two-bath cycle between inverse temperatures `beta_c` and `beta_h`.
 *
 * # Safety
 * `out` must be writable.
 */
enum OttoStatus otto_config_two_bath(struct OttoSubstance substance,
                                     double bi,
                                     double bf,
                                     double beta_c,
                                     double beta_h,
                                     struct OttoCycleConfig **out);

/**
 * Measurement-fuelled cycle. The channel is copied; the caller keeps ownership.
 *
 * # Safety
 * `channel` must be a valid channel handle; `out` must be writable.
 */
enum OttoStatus otto_config_measurement(struct OttoSubstance substance,
                                        double bi,
                                        double bf,
                                        double beta_c,
                                        const struct OttoChannel *channel,
                                        struct OttoCycleConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from this library, not yet freed.
 */
void otto_config_free(struct OttoCycleConfig *cfg);

/**
 * # Safety
 * `cfg` must be a valid config handle; `out` must be writable.
 */
enum OttoStatus otto_run_cycle(const struct OttoCycleConfig *cfg, struct OttoCycleRecord **out);

/**
 * # Safety
 * `rec` must be a valid record handle; `out` must be writable.
 */
enum OttoStatus otto_record_summary(const struct OttoCycleRecord *rec,
                                    struct OttoCycleSummary *out);

/**
 * Per-level breakdown for level `index` (0-based, below `level_count`).
 *
 * # Safety
 * `rec` must be a valid record handle; `out` must be writable.
 */
enum OttoStatus otto_record_level(const struct OttoCycleRecord *rec,
                                  size_t index,
                                  struct OttoLevel *out);

/**
 * # Safety
 * `rec` must be null or a handle from this library, not yet freed.
 */
void otto_record_free(struct OttoCycleRecord *rec);

/**
 * # Safety
 * `out` must be writable.
 */
enum OttoStatus otto_closed_form_two_bath_qutrit(double j,
                                                 double bi,
                                                 double bf,
                                                 double beta_c,
                                                 double beta_h,
                                                 struct OttoClosedForm *out);

/**
 * Random unital channels on passive states, plus a non-unital control group.
 * Returns `Ok` even when violations are found; check `violations`.
 *
 * # Safety
 * `dims` must point to `dim_count` readable values; `out` must be writable.
 */
enum OttoStatus otto_theorem1_suite(const size_t *dims,
                                    size_t dim_count,
                                    size_t samples,
                                    uint64_t seed,
                                    struct OttoTheorem1Summary *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OTTO_ENGINE_H */

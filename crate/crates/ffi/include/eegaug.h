#ifndef EEGAUG_H
#define EEGAUG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

#define EEGAUG_OK 0

// A required pointer argument was null.
#define EEGAUG_ERR_NULL 1

// A string argument was not valid UTF-8.
#define EEGAUG_ERR_UTF8 2

// The core panicked; the message holds the panic payload.
#define EEGAUG_ERR_PANIC 3

// Codes 10 and above are the core library's error codes.
#define EEGAUG_ERR_CORE_MIN 10

// Parsed augmentation policy. Create with [`eegaug_policy_from_json`],
// release with [`eegaug_policy_free`].
typedef struct EegaugPolicy EegaugPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a policy from JSON (`{seed, epoch, specs: [{name, params, p_aug}]}`).
//
// On success `*out` receives a new handle owned by the caller.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
int32_t eegaug_policy_from_json(const char *json, struct EegaugPolicy **out);

// Releases a policy handle. Null is ignored.
//
// # Safety
// `policy` must come from [`eegaug_policy_from_json`] and not be freed twice.
void eegaug_policy_free(struct EegaugPolicy *policy);

// Augments `batch` windows of `channels x samples` values.
//
// Window `b` uses window index `b` and the given `epoch`, so the output is
// bitwise equal to the core `apply_policy` on the same data. `channel_names`
// may be null; spatial transforms then fail for lack of geometry.
// `input` and `output` may alias.
//
// # Safety
// `input` and `output` must each hold `batch * channels * samples` floats;
// `channel_names`, when not null, must hold `channels` C strings.
int32_t eegaug_augment_batch(const struct EegaugPolicy *policy,
                             const float *input,
                             float *output,
                             size_t batch,
                             size_t channels,
                             size_t samples,
                             double sfreq,
                             const char *const *channel_names,
                             uint64_t epoch);

// Augments one `channels x samples` window with an explicit window index.
//
// # Safety
// As for [`eegaug_augment_batch`] with `batch = 1`.
int32_t eegaug_augment_window(const struct EegaugPolicy *policy,
                              const float *input,
                              float *output,
                              size_t channels,
                              size_t samples,
                              double sfreq,
                              const char *const *channel_names,
                              uint64_t window_index,
                              uint64_t epoch);

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next failing call on the same thread.
const char *eegaug_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *eegaug_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EEGAUG_H */

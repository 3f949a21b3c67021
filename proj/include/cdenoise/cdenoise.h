// Copyright (c) the cdenoise authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the coupled-dictionary guided denoiser.
 *
 * Objects are opaque handles created by cdn_*_create/read/load calls and
 * released with the matching *_free. Every fallible call returns a
 * cdn_status; on failure cdn_last_error() holds a message for the calling
 * thread. Output handles are only written on success.
 */
#ifndef CDENOISE_H
#define CDENOISE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CDN_BUILDING_LIBRARY)
#    define CDN_API __declspec(dllexport)
#  else
#    define CDN_API __declspec(dllimport)
#  endif
#else
#  define CDN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdn_status {
  CDN_OK = 0,
  CDN_ERR_UNSUPPORTED_FORMAT = 1,
  CDN_ERR_TRUNCATED_DATA = 2,
  CDN_ERR_DIMENSION_MISMATCH = 3,
  CDN_ERR_PATCH_TOO_LARGE = 4,
  CDN_ERR_ALREADY_CENTERED = 5,
  CDN_ERR_EMPTY_CORPUS = 6,
  CDN_ERR_ZERO_ATOM = 7,
  CDN_ERR_CORPUS_TOO_SMALL = 8,
  CDN_ERR_IO = 9,
  CDN_ERR_BAD_MAGIC = 10,
  CDN_ERR_SHAPE_MISMATCH = 11,
  CDN_ERR_TOO_FEW_PATCHES = 12,
  CDN_ERR_GRID_MISMATCH = 13,
  CDN_ERR_EMPTY_LIST = 14,
  CDN_ERR_INVALID_ARGUMENT = 15,
  CDN_ERR_INTERNAL = 99
} cdn_status;

typedef struct cdn_image cdn_image;
typedef struct cdn_dict cdn_dict;

CDN_API const char* cdn_status_string(cdn_status status);
CDN_API const char* cdn_last_error(void);
CDN_API const char* cdn_version(void);

/* Caps the worker pool; n <= 0 restores the runtime default. */
CDN_API void cdn_set_threads(int n);

/* ---- images (normalized scale, 8-bit 255 -> 1.0) ---- */

CDN_API cdn_status cdn_image_create(uint32_t width, uint32_t height, const double* pixels,
                                    cdn_image** out);
/* P5, P6 (converted to BT.601 intensity) or CDR1, chosen by magic. */
CDN_API cdn_status cdn_image_read(const char* path, cdn_image** out);
CDN_API cdn_status cdn_image_decode(const uint8_t* bytes, size_t len, cdn_image** out);
CDN_API void cdn_image_free(cdn_image* img);
CDN_API uint32_t cdn_image_width(const cdn_image* img);
CDN_API uint32_t cdn_image_height(const cdn_image* img);
CDN_API const double* cdn_image_pixels(const cdn_image* img);

/* Clamped, rounded 8-bit P5. */
CDN_API cdn_status cdn_image_write_pgm(const cdn_image* img, const char* path);
/* Unclamped "CDR1" sidecar: magic, u32 w, u32 h, w*h f64, little-endian. */
CDN_API cdn_status cdn_image_write_raw(const cdn_image* img, const char* path);

CDN_API cdn_status cdn_image_add_noise(const cdn_image* img, double sigma, uint64_t seed,
                                       cdn_image** out);
CDN_API cdn_status cdn_image_clamp(const cdn_image* img, cdn_image** out);
CDN_API cdn_status cdn_error_map(const cdn_image* truth, const cdn_image* estimate,
                                 cdn_image** out);

/* psnr is +inf for identical images. */
CDN_API cdn_status cdn_metrics(const cdn_image* ref, const cdn_image* test, double* rmse,
                               double* psnr);

CDN_API cdn_status cdn_synth_pair(uint32_t width, uint32_t height, uint64_t seed,
                                  double unique_amplitude, cdn_image** target,
                                  cdn_image** guide, double* correlation);

/* ---- dictionaries ---- */

typedef struct cdn_train_config {
  uint32_t side;          /* patch side; n = side * side */
  uint32_t atoms;         /* k */
  double lambda;
  uint64_t samples;       /* training patch pairs T */
  uint32_t inner_sweeps;
  uint32_t outer_rounds;
  uint64_t seed;
  double atom_reseed_threshold;
} cdn_train_config;

/* Called once per training stage with the objective value. */
typedef void (*cdn_stage_callback)(uint32_t round, const char* stage, double objective,
                                   void* user);

CDN_API void cdn_train_config_default(cdn_train_config* cfg);
CDN_API cdn_status cdn_train(const cdn_image* const* targets, const cdn_image* const* guides,
                             size_t count, const cdn_train_config* cfg,
                             cdn_stage_callback on_stage, void* user, cdn_dict** out);

CDN_API cdn_status cdn_dict_load(const char* path, cdn_dict** out);
CDN_API cdn_status cdn_dict_save(const cdn_dict* dict, const char* path);
CDN_API void cdn_dict_free(cdn_dict* dict);
CDN_API uint32_t cdn_dict_patch_dim(const cdn_dict* dict);
CDN_API uint32_t cdn_dict_atoms(const cdn_dict* dict);

/* ---- denoising ---- */

typedef struct cdn_denoise_config {
  double sigma;        /* 8-bit units */
  double gain;         /* C */
  uint32_t max_support;
  double mu;
  uint32_t stride;
  int group;           /* nonzero: cluster and code with a shared support */
  uint32_t clusters;   /* 0: automatic */
  uint32_t sample_cap;
  uint64_t seed;
} cdn_denoise_config;

CDN_API void cdn_denoise_config_default(cdn_denoise_config* cfg);
CDN_API cdn_status cdn_denoise(const cdn_image* noisy, const cdn_image* guide,
                               const cdn_dict* dict, const cdn_denoise_config* cfg,
                               cdn_image** out);

#ifdef __cplusplus
}
#endif

#endif /* CDENOISE_H */

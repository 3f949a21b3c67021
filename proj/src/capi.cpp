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

#include "cdenoise/cdenoise.h"

#include <omp.h>

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cdenoise/denoise.hpp"
#include "cdenoise/dictlearn.hpp"
#include "cdenoise/error.hpp"
#include "cdenoise/image.hpp"
#include "cdenoise/metrics.hpp"
#include "cdenoise/patches.hpp"
#include "cdenoise/synth.hpp"

struct cdn_image {
  cdenoise::GrayImage img;
};

struct cdn_dict {
  cdenoise::DictionarySet ds;
};

namespace {

thread_local std::string last_error;
const int default_threads = omp_get_max_threads();

cdn_status to_status(cdenoise::Errc code) {
  using cdenoise::Errc;
  switch (code) {
    case Errc::UnsupportedFormat: return CDN_ERR_UNSUPPORTED_FORMAT;
    case Errc::TruncatedData: return CDN_ERR_TRUNCATED_DATA;
    case Errc::DimensionMismatch: return CDN_ERR_DIMENSION_MISMATCH;
    case Errc::PatchTooLarge: return CDN_ERR_PATCH_TOO_LARGE;
    case Errc::AlreadyCentered: return CDN_ERR_ALREADY_CENTERED;
    case Errc::EmptyCorpus: return CDN_ERR_EMPTY_CORPUS;
    case Errc::ZeroAtom: return CDN_ERR_ZERO_ATOM;
    case Errc::CorpusTooSmall: return CDN_ERR_CORPUS_TOO_SMALL;
    case Errc::IoError: return CDN_ERR_IO;
    case Errc::BadMagic: return CDN_ERR_BAD_MAGIC;
    case Errc::ShapeMismatch: return CDN_ERR_SHAPE_MISMATCH;
    case Errc::TooFewPatches: return CDN_ERR_TOO_FEW_PATCHES;
    case Errc::GridMismatch: return CDN_ERR_GRID_MISMATCH;
    case Errc::EmptyList: return CDN_ERR_EMPTY_LIST;
    case Errc::InvalidArgument: return CDN_ERR_INVALID_ARGUMENT;
  }
  return CDN_ERR_INTERNAL;
}

template <typename F>
cdn_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CDN_OK;
  } catch (const cdenoise::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CDN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CDN_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return CDN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) cdenoise::fail(cdenoise::Errc::InvalidArgument, what);
}

cdn_image* wrap(cdenoise::GrayImage img) { return new cdn_image{std::move(img)}; }

}  // namespace

extern "C" {

const char* cdn_status_string(cdn_status status) {
  switch (status) {
    case CDN_OK: return "ok";
    case CDN_ERR_UNSUPPORTED_FORMAT: return "unsupported format";
    case CDN_ERR_TRUNCATED_DATA: return "truncated data";
    case CDN_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case CDN_ERR_PATCH_TOO_LARGE: return "patch too large";
    case CDN_ERR_ALREADY_CENTERED: return "already centered";
    case CDN_ERR_EMPTY_CORPUS: return "empty corpus";
    case CDN_ERR_ZERO_ATOM: return "zero atom";
    case CDN_ERR_CORPUS_TOO_SMALL: return "corpus too small";
    case CDN_ERR_IO: return "i/o error";
    case CDN_ERR_BAD_MAGIC: return "bad magic";
    case CDN_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case CDN_ERR_TOO_FEW_PATCHES: return "too few patches";
    case CDN_ERR_GRID_MISMATCH: return "grid mismatch";
    case CDN_ERR_EMPTY_LIST: return "empty list";
    case CDN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CDN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cdn_last_error(void) { return last_error.c_str(); }

const char* cdn_version(void) { return "0.1.0"; }

void cdn_set_threads(int n) { omp_set_num_threads(n > 0 ? n : default_threads); }

cdn_status cdn_image_create(uint32_t width, uint32_t height, const double* pixels,
                            cdn_image** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    cdenoise::GrayImage img(width, height);
    if (pixels) img.pixels.assign(pixels, pixels + img.size());
    *out = wrap(std::move(img));
  });
}

cdn_status cdn_image_read(const char* path, cdn_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = wrap(cdenoise::read_gray(path));
  });
}

cdn_status cdn_image_decode(const uint8_t* bytes, size_t len, cdn_image** out) {
  return guarded([&] {
    require(bytes && out, "null argument");
    const std::span<const std::uint8_t> data(bytes, len);
    if (len >= 4 && std::string_view(reinterpret_cast<const char*>(bytes), 4) == "CDR1") {
      *out = wrap(cdenoise::decode_raw(data));
      return;
    }
    auto decoded = cdenoise::decode_image(data);
    if (auto* rgb = std::get_if<cdenoise::RgbImage>(&decoded))
      *out = wrap(cdenoise::rgb_to_intensity(*rgb));
    else
      *out = wrap(std::get<cdenoise::GrayImage>(std::move(decoded)));
  });
}

void cdn_image_free(cdn_image* img) { delete img; }

uint32_t cdn_image_width(const cdn_image* img) {
  return img ? static_cast<uint32_t>(img->img.width) : 0;
}

uint32_t cdn_image_height(const cdn_image* img) {
  return img ? static_cast<uint32_t>(img->img.height) : 0;
}

const double* cdn_image_pixels(const cdn_image* img) {
  return img ? img->img.pixels.data() : nullptr;
}

cdn_status cdn_image_write_pgm(const cdn_image* img, const char* path) {
  return guarded([&] {
    require(img && path, "null argument");
    cdenoise::write_pgm(path, img->img);
  });
}

cdn_status cdn_image_write_raw(const cdn_image* img, const char* path) {
  return guarded([&] {
    require(img && path, "null argument");
    cdenoise::write_raw(path, img->img);
  });
}

cdn_status cdn_image_add_noise(const cdn_image* img, double sigma, uint64_t seed,
                               cdn_image** out) {
  return guarded([&] {
    require(img && out, "null argument");
    *out = wrap(cdenoise::add_gaussian_noise(img->img, {sigma, seed}));
  });
}

cdn_status cdn_image_clamp(const cdn_image* img, cdn_image** out) {
  return guarded([&] {
    require(img && out, "null argument");
    *out = wrap(cdenoise::clamp_unit(img->img));
  });
}

cdn_status cdn_error_map(const cdn_image* truth, const cdn_image* estimate, cdn_image** out) {
  return guarded([&] {
    require(truth && estimate && out, "null argument");
    *out = wrap(cdenoise::error_map(truth->img, estimate->img));
  });
}

cdn_status cdn_metrics(const cdn_image* ref, const cdn_image* test, double* rmse,
                       double* psnr) {
  return guarded([&] {
    require(ref && test, "null argument");
    const auto r = cdenoise::report(ref->img, test->img);
    if (rmse) *rmse = r.rmse;
    if (psnr) *psnr = r.psnr_db;
  });
}

cdn_status cdn_synth_pair(uint32_t width, uint32_t height, uint64_t seed,
                          double unique_amplitude, cdn_image** target, cdn_image** guide,
                          double* correlation) {
  return guarded([&] {
    require(target && guide, "null output handle");
    auto pair = cdenoise::synth_pair(width, height, seed, unique_amplitude);
    auto t = std::make_unique<cdn_image>(cdn_image{std::move(pair.target)});
    *guide = wrap(std::move(pair.guide));
    *target = t.release();
    if (correlation) *correlation = pair.correlation;
  });
}

void cdn_train_config_default(cdn_train_config* cfg) {
  if (!cfg) return;
  const cdenoise::TrainConfig d;
  cfg->side = 8;
  cfg->atoms = static_cast<uint32_t>(d.atoms);
  cfg->lambda = d.lambda;
  cfg->samples = 50000;
  cfg->inner_sweeps = static_cast<uint32_t>(d.inner_sweeps);
  cfg->outer_rounds = static_cast<uint32_t>(d.outer_rounds);
  cfg->seed = d.seed;
  cfg->atom_reseed_threshold = d.atom_reseed_threshold;
}

cdn_status cdn_train(const cdn_image* const* targets, const cdn_image* const* guides,
                     size_t count, const cdn_train_config* cfg, cdn_stage_callback on_stage,
                     void* user, cdn_dict** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    require(count == 0 || (targets && guides), "null image list");
    std::vector<cdenoise::GrayImage> t;
    std::vector<cdenoise::GrayImage> g;
    for (size_t i = 0; i < count; ++i) {
      require(targets[i] && guides[i], "null image in list");
      t.push_back(targets[i]->img);
      g.push_back(guides[i]->img);
    }
    const auto ts = cdenoise::build_training_set(t, g, cfg->side, cfg->samples, cfg->seed);
    cdenoise::TrainConfig tc;
    tc.lambda = cfg->lambda;
    tc.atoms = cfg->atoms;
    tc.inner_sweeps = cfg->inner_sweeps;
    tc.outer_rounds = cfg->outer_rounds;
    tc.seed = cfg->seed;
    tc.atom_reseed_threshold = cfg->atom_reseed_threshold;
    cdenoise::TrainHooks hooks;
    if (on_stage) {
      hooks.on_stage = [&](std::size_t round, std::string_view stage, double objective) {
        const std::string name(stage);
        on_stage(static_cast<uint32_t>(round), name.c_str(), objective, user);
      };
    }
    *out = new cdn_dict{cdenoise::train(ts, tc, hooks)};
  });
}

cdn_status cdn_dict_load(const char* path, cdn_dict** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new cdn_dict{cdenoise::load_dictionaries(path)};
  });
}

cdn_status cdn_dict_save(const cdn_dict* dict, const char* path) {
  return guarded([&] {
    require(dict && path, "null argument");
    cdenoise::save_dictionaries(dict->ds, path);
  });
}

void cdn_dict_free(cdn_dict* dict) { delete dict; }

uint32_t cdn_dict_patch_dim(const cdn_dict* dict) {
  return dict ? static_cast<uint32_t>(dict->ds.patch_dim()) : 0;
}

uint32_t cdn_dict_atoms(const cdn_dict* dict) {
  return dict ? static_cast<uint32_t>(dict->ds.atoms()) : 0;
}

void cdn_denoise_config_default(cdn_denoise_config* cfg) {
  if (!cfg) return;
  const cdenoise::DenoiseConfig d;
  cfg->sigma = d.sigma;
  cfg->gain = d.gain;
  cfg->max_support = static_cast<uint32_t>(d.max_support);
  cfg->mu = d.mu;
  cfg->stride = static_cast<uint32_t>(d.stride);
  cfg->group = d.group ? 1 : 0;
  cfg->clusters = static_cast<uint32_t>(d.clusters);
  cfg->sample_cap = static_cast<uint32_t>(d.sample_cap);
  cfg->seed = d.seed;
}

cdn_status cdn_denoise(const cdn_image* noisy, const cdn_image* guide, const cdn_dict* dict,
                       const cdn_denoise_config* cfg, cdn_image** out) {
  return guarded([&] {
    require(noisy && guide && dict && cfg && out, "null argument");
    cdenoise::DenoiseConfig dc;
    dc.sigma = cfg->sigma;
    dc.gain = cfg->gain;
    dc.max_support = cfg->max_support;
    dc.mu = cfg->mu;
    dc.stride = cfg->stride;
    dc.group = cfg->group != 0;
    dc.clusters = cfg->clusters;
    dc.sample_cap = cfg->sample_cap;
    dc.seed = cfg->seed;
    *out = wrap(cdenoise::denoise(noisy->img, guide->img, dict->ds, dc));
  });
}

}  // extern "C"

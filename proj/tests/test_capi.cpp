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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "cdenoise/cdenoise.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(cdn_status_string(CDN_OK)) == "ok");
  CHECK(std::string(cdn_status_string(CDN_ERR_BAD_MAGIC)).size() > 0);
  CHECK(std::string(cdn_version()).size() > 0);
}

TEST_CASE("image handles") {
  const std::vector<double> px{0.0, 0.25, 0.5, 1.0, 0.75, 0.125};
  cdn_image* img = nullptr;
  REQUIRE(cdn_image_create(3, 2, px.data(), &img) == CDN_OK);
  CHECK(cdn_image_width(img) == 3);
  CHECK(cdn_image_height(img) == 2);
  CHECK(std::memcmp(cdn_image_pixels(img), px.data(), px.size() * sizeof(double)) == 0);

  cdn_image* blank = nullptr;
  REQUIRE(cdn_image_create(2, 2, nullptr, &blank) == CDN_OK);
  CHECK(cdn_image_pixels(blank)[3] == 0.0);

  cdn_image* untouched = nullptr;
  CHECK(cdn_image_create(0, 2, nullptr, &untouched) == CDN_ERR_INVALID_ARGUMENT);
  CHECK(untouched == nullptr);
  CHECK(std::string(cdn_last_error()).size() > 0);
  CHECK(cdn_image_create(2, 2, nullptr, nullptr) == CDN_ERR_INVALID_ARGUMENT);

  double rmse = -1.0;
  double psnr = 0.0;
  CHECK(cdn_metrics(img, blank, &rmse, &psnr) == CDN_ERR_DIMENSION_MISMATCH);
  CHECK(cdn_metrics(img, img, &rmse, &psnr) == CDN_OK);
  CHECK(rmse == 0.0);
  CHECK(std::isinf(psnr));
  CHECK(cdn_metrics(nullptr, img, &rmse, &psnr) == CDN_ERR_INVALID_ARGUMENT);

  cdn_image_free(img);
  cdn_image_free(blank);
  cdn_image_free(nullptr);
}

TEST_CASE("decode, write and read back") {
  const unsigned char pgm[] = {'P', '5', '\n', '2', ' ', '1', '\n', '2', '5', '5', '\n', 0, 255};
  cdn_image* img = nullptr;
  REQUIRE(cdn_image_decode(pgm, sizeof pgm, &img) == CDN_OK);
  CHECK(cdn_image_pixels(img)[1] == 1.0);
  cdn_image* bad = nullptr;
  CHECK(cdn_image_decode(pgm, sizeof pgm - 1, &bad) == CDN_ERR_TRUNCATED_DATA);
  const unsigned char junk[] = {'P', '2', '\n'};
  CHECK(cdn_image_decode(junk, sizeof junk, &bad) == CDN_ERR_UNSUPPORTED_FORMAT);

  cdn_image* noisy = nullptr;
  REQUIRE(cdn_image_add_noise(img, 10.0, 4, &noisy) == CDN_OK);
  const auto raw = temp_path("cdenoise_capi.cdr");
  const auto pgm_path = temp_path("cdenoise_capi.pgm");
  REQUIRE(cdn_image_write_raw(noisy, raw.c_str()) == CDN_OK);
  REQUIRE(cdn_image_write_pgm(noisy, pgm_path.c_str()) == CDN_OK);
  cdn_image* back = nullptr;
  REQUIRE(cdn_image_read(raw.c_str(), &back) == CDN_OK);
  CHECK(std::memcmp(cdn_image_pixels(back), cdn_image_pixels(noisy), 2 * sizeof(double)) == 0);
  cdn_image_free(back);
  REQUIRE(cdn_image_read(pgm_path.c_str(), &back) == CDN_OK);
  for (int i = 0; i < 2; ++i) {
    CHECK(cdn_image_pixels(back)[i] >= 0.0);
    CHECK(cdn_image_pixels(back)[i] <= 1.0);
  }
  cdn_image_free(back);
  CHECK(cdn_image_read(temp_path("cdenoise_capi_missing.pgm").c_str(), &back) == CDN_ERR_IO);

  cdn_image* clamped = nullptr;
  REQUIRE(cdn_image_clamp(noisy, &clamped) == CDN_OK);
  for (int i = 0; i < 2; ++i) CHECK(cdn_image_pixels(clamped)[i] <= 1.0);

  std::remove(raw.c_str());
  std::remove(pgm_path.c_str());
  cdn_image_free(clamped);
  cdn_image_free(noisy);
  cdn_image_free(img);
}

TEST_CASE("train, save, load and denoise") {
  cdn_image* targets[3] = {};
  cdn_image* guides[3] = {};
  for (int i = 0; i < 3; ++i) {
    double corr = 0.0;
    REQUIRE(cdn_synth_pair(48, 48, static_cast<uint64_t>(i), 0.03, &targets[i], &guides[i], &corr) ==
            CDN_OK);
    CHECK(corr > 0.5);
  }

  cdn_train_config cfg;
  cdn_train_config_default(&cfg);
  CHECK(cfg.side == 8);
  cfg.side = 4;
  cfg.atoms = 12;
  cfg.samples = 600;
  cfg.inner_sweeps = 3;
  cfg.outer_rounds = 1;

  std::vector<double> objectives;
  const auto record = [](uint32_t, const char*, double objective, void* user) {
    static_cast<std::vector<double>*>(user)->push_back(objective);
  };
  cdn_dict* dict = nullptr;
  REQUIRE(cdn_train(targets, guides, 3, &cfg, record, &objectives, &dict) == CDN_OK);
  CHECK(objectives.size() == 3);
  CHECK(cdn_dict_patch_dim(dict) == 16);
  CHECK(cdn_dict_atoms(dict) == 12);

  const auto path = temp_path("cdenoise_capi.cdl");
  REQUIRE(cdn_dict_save(dict, path.c_str()) == CDN_OK);
  cdn_dict* loaded = nullptr;
  REQUIRE(cdn_dict_load(path.c_str(), &loaded) == CDN_OK);
  CHECK(cdn_dict_atoms(loaded) == 12);
  std::remove(path.c_str());
  cdn_dict* missing = nullptr;
  CHECK(cdn_dict_load(path.c_str(), &missing) == CDN_ERR_IO);
  CHECK(missing == nullptr);

  cdn_image* noisy = nullptr;
  REQUIRE(cdn_image_add_noise(targets[0], 16.0, 1, &noisy) == CDN_OK);
  cdn_denoise_config dcfg;
  cdn_denoise_config_default(&dcfg);
  CHECK(dcfg.max_support == 16);
  cdn_image* out = nullptr;
  CHECK(cdn_denoise(noisy, guides[0], loaded, &dcfg, &out) == CDN_ERR_INVALID_ARGUMENT);
  CHECK(out == nullptr);
  dcfg.sigma = 16.0;
  REQUIRE(cdn_denoise(noisy, guides[0], loaded, &dcfg, &out) == CDN_OK);
  double before = 0.0;
  double after = 0.0;
  double rmse = 0.0;
  REQUIRE(cdn_metrics(targets[0], noisy, &rmse, &before) == CDN_OK);
  REQUIRE(cdn_metrics(targets[0], out, &rmse, &after) == CDN_OK);
  CHECK(after > before);

  cdn_image* map = nullptr;
  REQUIRE(cdn_error_map(targets[0], out, &map) == CDN_OK);
  cdn_image_free(map);
  CHECK(cdn_denoise(noisy, targets[1], loaded, nullptr, &out) == CDN_ERR_INVALID_ARGUMENT);

  cdn_image_free(out);
  cdn_image_free(noisy);
  cdn_dict_free(loaded);
  cdn_dict_free(dict);
  for (int i = 0; i < 3; ++i) {
    cdn_image_free(targets[i]);
    cdn_image_free(guides[i]);
  }
}

TEST_CASE("training errors surface as status codes") {
  cdn_image* t = nullptr;
  cdn_image* g = nullptr;
  REQUIRE(cdn_image_create(16, 16, nullptr, &t) == CDN_OK);
  REQUIRE(cdn_image_create(16, 12, nullptr, &g) == CDN_OK);
  cdn_train_config cfg;
  cdn_train_config_default(&cfg);
  cdn_dict* dict = nullptr;
  const cdn_image* ts[1] = {t};
  const cdn_image* gs[1] = {g};
  CHECK(cdn_train(ts, gs, 1, &cfg, nullptr, nullptr, &dict) == CDN_ERR_DIMENSION_MISMATCH);
  CHECK(cdn_train(ts, gs, 0, &cfg, nullptr, nullptr, &dict) == CDN_ERR_EMPTY_CORPUS);
  CHECK(dict == nullptr);
  cdn_image_free(t);
  cdn_image_free(g);
}

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

#pragma once

#include <span>
#include <utility>

#include "cdenoise/image.hpp"

namespace cdenoise {

struct QualityReport {
  double rmse = 0.0;     // normalized scale
  double psnr_db = 0.0;  // peak 1.0
};

double rmse(const GrayImage& a, const GrayImage& b);

// +infinity when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

QualityReport report(const GrayImage& ref, const GrayImage& test);

// Mean of per-image PSNR and mean of per-image RMSE, each averaged
// independently.
QualityReport average_report(std::span<const std::pair<GrayImage, GrayImage>> pairs);

}  // namespace cdenoise

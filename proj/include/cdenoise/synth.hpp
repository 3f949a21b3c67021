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

#include <cstddef>
#include <cstdint>

#include "cdenoise/image.hpp"

namespace cdenoise {

inline constexpr double kDefaultUniqueAmplitude = 0.03;

struct SynthPair {
  GrayImage target;
  GrayImage guide;
  double correlation = 0.0;  // Pearson, over pixels
};

// Registered test pair: one piecewise-constant scene rendered into both
// images, plus an independent low-amplitude sinusoidal texture per image.
// Throws InvalidArgument if a dimension is below 16 or the pair ends up
// correlated at 0.5 or less.
SynthPair synth_pair(std::size_t width, std::size_t height, std::uint64_t seed,
                     double unique_amplitude = kDefaultUniqueAmplitude);

double pixel_correlation(const GrayImage& a, const GrayImage& b);

}  // namespace cdenoise

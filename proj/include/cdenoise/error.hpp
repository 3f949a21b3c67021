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

#include <stdexcept>
#include <string>

namespace cdenoise {

enum class Errc {
  UnsupportedFormat,
  TruncatedData,
  DimensionMismatch,
  PatchTooLarge,
  AlreadyCentered,
  EmptyCorpus,
  ZeroAtom,
  CorpusTooSmall,
  IoError,
  BadMagic,
  ShapeMismatch,
  TooFewPatches,
  GridMismatch,
  EmptyList,
  InvalidArgument,
};

const char* errc_name(Errc code) noexcept;

// All library failures are reported through this type; the C API maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

inline const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::TruncatedData: return "TruncatedData";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::PatchTooLarge: return "PatchTooLarge";
    case Errc::AlreadyCentered: return "AlreadyCentered";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::ZeroAtom: return "ZeroAtom";
    case Errc::CorpusTooSmall: return "CorpusTooSmall";
    case Errc::IoError: return "IoError";
    case Errc::BadMagic: return "BadMagic";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TooFewPatches: return "TooFewPatches";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::EmptyList: return "EmptyList";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace cdenoise

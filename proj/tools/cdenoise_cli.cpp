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

// cdenoise: train coupled dictionaries and denoise a target image with a
// registered guidance image. Diagnostics go to stderr; metric results go to
// stdout as key=value lines. Exit status: 0 ok, 1 usage error, 2 runtime error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cdenoise/cdenoise.h"
#include "cli_config.hpp"

namespace fs = std::filesystem;

namespace {

struct ImageDeleter {
  void operator()(cdn_image* p) const { cdn_image_free(p); }
};
struct DictDeleter {
  void operator()(cdn_dict* p) const { cdn_dict_free(p); }
};
using ImagePtr = std::unique_ptr<cdn_image, ImageDeleter>;
using DictPtr = std::unique_ptr<cdn_dict, DictDeleter>;

struct RuntimeFailure {
  std::string message;
};

void check(cdn_status status, const std::string& context) {
  if (status != CDN_OK)
    throw RuntimeFailure{context + ": " + cdn_status_string(status) + " (" + cdn_last_error() + ")"};
}

ImagePtr read_image(const std::string& path) {
  cdn_image* raw = nullptr;
  check(cdn_image_read(path.c_str(), &raw), "reading " + path);
  return ImagePtr(raw);
}

class Resolved {
 public:
  explicit Resolved(std::string command) : command_(std::move(command)) {}

  template <typename T>
  Resolved& add(const std::string& key, const T& value) {
    std::ostringstream s;
    if constexpr (std::is_same_v<T, bool>) {
      s << (value ? "true" : "false");
    } else if constexpr (std::is_floating_point_v<T>) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, value);
      s << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    } else {
      s << value;
    }
    lines_.emplace_back(key, s.str());
    return *this;
  }

  void print() const {
    std::fprintf(stderr, "# resolved configuration: %s\n", command_.c_str());
    for (const auto& [k, v] : lines_) std::fprintf(stderr, "%s=%s\n", k.c_str(), v.c_str());
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> lines_;
};

void print_metrics(double rmse, double psnr) {
  std::printf("rmse=%.6f\n", rmse);
  if (std::isinf(psnr))
    std::printf("psnr=inf\n");
  else
    std::printf("psnr=%.6f\n", psnr);
}

struct Common {
  std::string config;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config, "key=value file supplying defaults for flags");
  sub->add_option("--threads", common.threads, "worker thread cap (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
}

// ---- train ----

struct TrainArgs {
  std::string target_dir;
  std::string guide_dir;
  std::string out;
  cdn_train_config cfg{};
};

void stage_logger(uint32_t round, const char* stage, double objective, void*) {
  std::fprintf(stderr, "round=%u stage=%s objective=%.12g\n", round, stage, objective);
}

void run_train(const TrainArgs& a) {
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(a.target_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename();
    if (name.string().rfind('.', 0) == 0) continue;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw RuntimeFailure{"no images in " + a.target_dir};

  std::vector<ImagePtr> targets;
  std::vector<ImagePtr> guides;
  for (const auto& name : names) {
    const auto guide_path = fs::path(a.guide_dir) / name;
    if (!fs::exists(guide_path))
      throw RuntimeFailure{"no guidance image matching " + name.string() + " in " + a.guide_dir};
    targets.push_back(read_image((fs::path(a.target_dir) / name).string()));
    guides.push_back(read_image(guide_path.string()));
  }
  std::fprintf(stderr, "training on %zu image pairs\n", names.size());

  std::vector<const cdn_image*> t;
  std::vector<const cdn_image*> g;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    t.push_back(targets[i].get());
    g.push_back(guides[i].get());
  }
  cdn_dict* raw = nullptr;
  check(cdn_train(t.data(), g.data(), t.size(), &a.cfg, stage_logger, nullptr, &raw), "training");
  DictPtr dict(raw);
  check(cdn_dict_save(dict.get(), a.out.c_str()), "writing " + a.out);
}

// ---- noise ----

struct NoiseArgs {
  std::string input;
  std::string out;
  std::string raw_out;
  double sigma = 0.0;
  uint64_t seed = 0;
};

void run_noise(const NoiseArgs& a) {
  auto clean = read_image(a.input);
  cdn_image* raw = nullptr;
  check(cdn_image_add_noise(clean.get(), a.sigma, a.seed, &raw), "adding noise");
  ImagePtr noisy(raw);
  check(cdn_image_write_pgm(noisy.get(), a.out.c_str()), "writing " + a.out);
  if (!a.raw_out.empty())
    check(cdn_image_write_raw(noisy.get(), a.raw_out.c_str()), "writing " + a.raw_out);
}

// ---- denoise ----

struct DenoiseArgs {
  std::string input;
  std::string guide;
  std::string dict;
  std::string out;
  std::string errmap_ref;
  std::string errmap_out;
  cdn_denoise_config cfg{};
};

void run_denoise(const DenoiseArgs& a) {
  auto noisy = read_image(a.input);
  auto guide = read_image(a.guide);
  cdn_dict* raw_dict = nullptr;
  check(cdn_dict_load(a.dict.c_str(), &raw_dict), "loading " + a.dict);
  DictPtr dict(raw_dict);

  cdn_image* raw = nullptr;
  check(cdn_denoise(noisy.get(), guide.get(), dict.get(), &a.cfg, &raw), "denoising");
  ImagePtr result(raw);
  check(cdn_image_write_pgm(result.get(), a.out.c_str()), "writing " + a.out);

  if (!a.errmap_ref.empty()) {
    auto ref = read_image(a.errmap_ref);
    double rmse = 0.0;
    double psnr = 0.0;
    check(cdn_metrics(ref.get(), result.get(), &rmse, &psnr), "evaluating");
    print_metrics(rmse, psnr);
    cdn_image* map = nullptr;
    check(cdn_error_map(ref.get(), result.get(), &map), "error map");
    ImagePtr err(map);
    check(cdn_image_write_pgm(err.get(), a.errmap_out.c_str()), "writing " + a.errmap_out);
  }
}

// ---- eval ----

struct EvalArgs {
  std::string ref;
  std::string test;
  bool clamp = false;
};

void run_eval(const EvalArgs& a) {
  auto ref = read_image(a.ref);
  auto test = read_image(a.test);
  if (a.clamp) {
    cdn_image* raw = nullptr;
    check(cdn_image_clamp(test.get(), &raw), "clamping");
    test.reset(raw);
  }
  double rmse = 0.0;
  double psnr = 0.0;
  check(cdn_metrics(ref.get(), test.get(), &rmse, &psnr), "evaluating");
  print_metrics(rmse, psnr);
}

// ---- synth ----

struct SynthArgs {
  uint32_t width = 128;
  uint32_t height = 128;
  uint64_t seed = 0;
  double unique_amplitude = 0.03;
  std::string out_target;
  std::string out_guide;
};

void run_synth(const SynthArgs& a) {
  cdn_image* t = nullptr;
  cdn_image* g = nullptr;
  double correlation = 0.0;
  check(cdn_synth_pair(a.width, a.height, a.seed, a.unique_amplitude, &t, &g, &correlation),
        "synthesizing");
  ImagePtr target(t);
  ImagePtr guide(g);
  check(cdn_image_write_pgm(target.get(), a.out_target.c_str()), "writing " + a.out_target);
  check(cdn_image_write_pgm(guide.get(), a.out_guide.c_str()), "writing " + a.out_guide);
  std::printf("correlation=%.6f\n", correlation);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = cdenoise::cli::splice_config(std::move(args));
  } catch (const cdenoise::cli::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  CLI::App app{"Guided image denoising with coupled dictionaries", "cdenoise"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cdn_version()));
  Common common;

  TrainArgs train;
  cdn_train_config_default(&train.cfg);
  auto* train_cmd = app.add_subcommand("train", "learn coupled dictionaries from registered pairs");
  add_common(train_cmd, common);
  train_cmd->add_option("--target-dir", train.target_dir, "clean target-modality images")
      ->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--guide-dir", train.guide_dir, "guidance images, matched by filename")
      ->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--side", train.cfg.side, "patch side")->check(CLI::PositiveNumber);
  train_cmd->add_option("--atoms", train.cfg.atoms, "atoms per dictionary")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lambda", train.cfg.lambda, "l1 weight")->check(CLI::PositiveNumber);
  train_cmd->add_option("--samples", train.cfg.samples, "training patch pairs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--inner-sweeps", train.cfg.inner_sweeps)->check(CLI::PositiveNumber);
  train_cmd->add_option("--outer-rounds", train.cfg.outer_rounds);
  train_cmd->add_option("--seed", train.cfg.seed);
  train_cmd->add_option("--out", train.out, "dictionary file (CDL1)")->required();

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "add seeded white Gaussian noise");
  add_common(noise_cmd, common);
  noise_cmd->add_option("--input", noise.input)->required()->check(CLI::ExistingFile);
  noise_cmd->add_option("--sigma", noise.sigma, "std in 8-bit units")
      ->required()->check(CLI::NonNegativeNumber);
  noise_cmd->add_option("--seed", noise.seed);
  noise_cmd->add_option("--out", noise.out, "clamped 8-bit PGM")->required();
  noise_cmd->add_option("--raw-out", noise.raw_out, "unclamped CDR1 sidecar");

  DenoiseArgs den;
  cdn_denoise_config_default(&den.cfg);
  bool group = false;
  auto* den_cmd = app.add_subcommand("denoise", "denoise a target image under guidance");
  add_common(den_cmd, common);
  den_cmd->add_option("--input", den.input, "noisy PGM or CDR1")->required()->check(CLI::ExistingFile);
  den_cmd->add_option("--guide", den.guide)->required()->check(CLI::ExistingFile);
  den_cmd->add_option("--dict", den.dict)->required()->check(CLI::ExistingFile);
  den_cmd->add_option("--sigma", den.cfg.sigma, "noise std in 8-bit units")
      ->required()->check(CLI::PositiveNumber);
  den_cmd->add_option("--c", den.cfg.gain, "residual gain C")->check(CLI::PositiveNumber);
  den_cmd->add_option("--smax", den.cfg.max_support)->check(CLI::PositiveNumber);
  den_cmd->add_option("--mu", den.cfg.mu, "weight of the noisy image in aggregation")
      ->check(CLI::NonNegativeNumber);
  den_cmd->add_option("--stride", den.cfg.stride)->check(CLI::PositiveNumber);
  den_cmd->add_flag("--group", group, "code clusters of similar patches jointly");
  den_cmd->add_option("--clusters", den.cfg.clusters, "cluster count (0: automatic)");
  den_cmd->add_option("--cluster-sample", den.cfg.sample_cap)->check(CLI::PositiveNumber);
  den_cmd->add_option("--seed", den.cfg.seed, "clustering seed");
  den_cmd->add_option("--out", den.out)->required();
  auto* ref_opt = den_cmd->add_option("--errmap-ref", den.errmap_ref, "clean reference")
                      ->check(CLI::ExistingFile);
  auto* map_opt = den_cmd->add_option("--errmap-out", den.errmap_out, "error map PGM");
  ref_opt->needs(map_opt);
  map_opt->needs(ref_opt);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "RMSE and PSNR of a test image");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--ref", eval.ref)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--test", eval.test)->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--clamp", eval.clamp, "clamp the test image to [0, 1] first");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic registered pair");
  add_common(synth_cmd, common);
  synth_cmd->add_option("--width", synth.width)->check(CLI::Range(16u, 1u << 15));
  synth_cmd->add_option("--height", synth.height)->check(CLI::Range(16u, 1u << 15));
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--unique-amplitude", synth.unique_amplitude)
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--out-target", synth.out_target)->required();
  synth_cmd->add_option("--out-guide", synth.out_guide)->required();

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cdn_set_threads(common.threads);
  try {
    if (*train_cmd) {
      Resolved("train")
          .add("target-dir", train.target_dir).add("guide-dir", train.guide_dir)
          .add("side", train.cfg.side).add("atoms", train.cfg.atoms)
          .add("lambda", train.cfg.lambda).add("samples", train.cfg.samples)
          .add("inner-sweeps", train.cfg.inner_sweeps).add("outer-rounds", train.cfg.outer_rounds)
          .add("seed", train.cfg.seed).add("out", train.out).add("threads", common.threads)
          .print();
      run_train(train);
    } else if (*noise_cmd) {
      Resolved("noise")
          .add("input", noise.input).add("sigma", noise.sigma).add("seed", noise.seed)
          .add("out", noise.out).add("raw-out", noise.raw_out).add("threads", common.threads)
          .print();
      run_noise(noise);
    } else if (*den_cmd) {
      den.cfg.group = group ? 1 : 0;
      Resolved("denoise")
          .add("input", den.input).add("guide", den.guide).add("dict", den.dict)
          .add("sigma", den.cfg.sigma).add("c", den.cfg.gain).add("smax", den.cfg.max_support)
          .add("mu", den.cfg.mu).add("stride", den.cfg.stride).add("group", group)
          .add("clusters", den.cfg.clusters).add("cluster-sample", den.cfg.sample_cap)
          .add("seed", den.cfg.seed).add("out", den.out)
          .add("errmap-ref", den.errmap_ref).add("errmap-out", den.errmap_out)
          .add("threads", common.threads)
          .print();
      run_denoise(den);
    } else if (*eval_cmd) {
      Resolved("eval")
          .add("ref", eval.ref).add("test", eval.test).add("clamp", eval.clamp)
          .add("threads", common.threads)
          .print();
      run_eval(eval);
    } else if (*synth_cmd) {
      Resolved("synth")
          .add("width", synth.width).add("height", synth.height).add("seed", synth.seed)
          .add("unique-amplitude", synth.unique_amplitude)
          .add("out-target", synth.out_target).add("out-guide", synth.out_guide)
          .add("threads", common.threads)
          .print();
      run_synth(synth);
    }
  } catch (const RuntimeFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

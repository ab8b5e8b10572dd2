// Copyright 2026 The Retouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "retouch/cli.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "retouch/metrics.h"
#include "retouch/ops.h"
#include "retouch/params.h"
#include "retouch/png_io.h"
#include "retouch/renderer.h"
#include "retouch/synth.h"

namespace retouch {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kMaxThreads = 256;
// Manifest pairs are stored as 16-bit PNGs; re-renders are compared at the
// same depth.
constexpr int kManifestDepth = 16;

// ---------------------------------------------------------------- helpers

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fs::exists(path) ? ErrorCode::kIo : ErrorCode::kFileNotFound,
                "cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return text.str();
}

nlohmann::json read_json_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptData, path.string() + " is not valid JSON: " + e.what());
  }
}

CategoryMask mask_from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) return CategoryMask::parse(j.get<std::string>());
    return {j.at("light").get<bool>(), j.at("global_color").get<bool>(),
            j.at("specific_color").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptData, std::string("bad mask entry: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptData, std::string("bad mask entry: ") + e.what());
  }
}

// One parameter set: either a bare {name: value} object or an object with a
// "params" member (a manifest row), which may carry a "mask".
struct ParamEntry {
  ParamVector params;
  std::optional<CategoryMask> mask;
};

ParamEntry param_entry_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kCorruptData, "parameter entry is not an object");
  ParamEntry entry;
  if (j.contains("params")) {
    entry.params = params_from_json(j.at("params"));
    if (j.contains("mask")) entry.mask = mask_from_json(j.at("mask"));
  } else {
    entry.params = params_from_json(j);
  }
  entry.params.validate();
  return entry;
}

std::vector<Image> load_corpus(const fs::path& dir) {
  std::vector<Image> images;
  for (const fs::path& p : list_corpus(dir)) images.push_back(load_image(p));
  return images;
}

ordered_json mask_json(const CategoryMask& mask) {
  return {{"light", mask.light},
          {"global_color", mask.global_color},
          {"specific_color", mask.specific_color}};
}

std::vector<CategoryMask> parse_masks(const std::vector<std::string>& flags) {
  std::vector<CategoryMask> masks;
  for (const std::string& f : flags) {
    const CategoryMask m = CategoryMask::parse(f);
    if (!m.any()) throw Error(ErrorCode::kInvalidArgument, "empty mask '" + f + "'");
    masks.push_back(m);
  }
  return masks;
}

// Metric and reward fields for one (output, target) pair.
ordered_json pair_report(const Image& out, const Image& tar, RetouchTask task,
                         const RewardConfig& config, const std::optional<std::string>& reasoning) {
  ordered_json j;
  const HistScores h = hist_suite(out, tar);
  j["psnr"] = psnr(out, tar);
  j["ssim"] = ssim(out, tar);
  j["l1"] = l1_distance(out, tar);
  j["hist_l"] = h.hist_l;
  j["hist_c"] = h.hist_c;
  j["hist_s"] = h.hist_s;
  j["hist_m"] = h.hist_m;
  j["r_s"] = reward_similarity(out, tar, config.gamma);
  if (task == RetouchTask::kAuto) {
    j["r_a"] = reward_aesthetic(out, stub_scorers(), config.alpha, config.beta);
  }
  if (reasoning) j["r_f"] = reward_format(*reasoning, task);
  return j;
}

void emit(std::ostream& out, const ordered_json& report) { out << report.dump(2) << '\n'; }

// ---------------------------------------------------------------- options

struct CommonOptions {
  int threads = 1;
  std::uint64_t seed = 0;
};

void add_threads(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--threads", common.threads,
                  "Worker threads (default from VERA_THREADS, else 1)")
      ->check(CLI::Range(1, kMaxThreads));
}

// Default for --threads: VERA_THREADS when set, else 1. A value that is not
// an integer in [1, kMaxThreads] is a usage error.
int default_threads() {
  const char* env = std::getenv("VERA_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  int value = 0;
  const std::string_view text(env);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value < 1 || value > kMaxThreads) {
    throw CLI::ValidationError("VERA_THREADS", "must be an integer in [1, " +
                                                   std::to_string(kMaxThreads) + "], got '" +
                                                   std::string(text) + "'");
  }
  return value;
}

void add_seed(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--seed", common.seed, "64-bit seed")->capture_default_str();
}

struct RenderOptions {
  std::string net, latent, params, mask, in, out;
  int depth = 8;
};

struct FitOptions {
  std::string net, ref_in, ref_tar, mask, out_latent, preview, transfer_in, transfer_tar;
  InvertConfig invert;
};

struct VideoOptions {
  std::string net, latent, frames_dir, out_dir;
  int depth = 8;
};

struct MultiroundOptions {
  std::string net, in, params_file, mask, out_dir;
  std::size_t rounds = 0;
  int depth = 8;
};

struct DegradeOptions {
  std::string in, out, mode = "param", mask = "LGS", params_out;
  double scale = 0.25;
  int depth = 8;
};

struct GenOptions {
  std::string corpus, out_dir;
  std::size_t count = 0;
  std::vector<std::string> masks;
  double scale = 0.25;
};

struct DistillOptions {
  std::string corpus, out, mode = "param";
  std::size_t synthetic = 64;
  int synthetic_size = 64;
  std::vector<std::string> masks;
  DistillConfig config;
};

struct EvalOptions {
  std::string output, target, manifest, net, reasoning, task = "auto";
  RewardConfig rewards;
};

// ---------------------------------------------------------------- commands

int cmd_render(const RenderOptions& o, const CommonOptions& c, std::ostream& out) {
  const RetouchNet net = load_net(o.net);
  ControlLatent latent;
  if (!o.latent.empty()) {
    latent = load_latent(o.latent);
  } else {
    const ParamEntry entry = param_entry_from_json(read_json_file(o.params));
    const CategoryMask mask =
        o.mask.empty() ? entry.mask.value_or(CategoryMask::all()) : CategoryMask::parse(o.mask);
    latent = net.adapter.latent(entry.params, mask);
  }
  const Image img = load_image(o.in);
  save_image(render(net.mlp, img, latent, c.threads), o.out, o.depth);
  emit(out, ordered_json{{"command", "render"},
                         {"output", o.out},
                         {"width", img.width()},
                         {"height", img.height()},
                         {"mask", latent.mask.to_string()}});
  return exit_code::kOk;
}

int cmd_fit(const FitOptions& o, const CommonOptions& c, std::ostream& out) {
  const RetouchNet net = load_net(o.net);
  const Image ref_in = load_image(o.ref_in), ref_tar = load_image(o.ref_tar);
  if (ref_in.width() != ref_tar.width() || ref_in.height() != ref_tar.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "reference input and target differ in size");
  }
  const bool mask_defaulted = o.mask.empty();
  const CategoryMask mask = mask_defaulted ? CategoryMask::all() : CategoryMask::parse(o.mask);
  const InversionResult fit = invert_latents(net.mlp, ref_in, ref_tar, mask, o.invert);
  save_latent(fit.latent, o.out_latent);

  const Image preview = render(net.mlp, ref_in, fit.latent, c.threads);
  if (!o.preview.empty()) save_image(preview, o.preview);

  ordered_json report{{"command", "fit"},
                      {"latent", o.out_latent},
                      {"mask", mask.to_string()},
                      {"mask_bits", mask.bits()},
                      {"mask_defaulted", mask_defaulted},
                      {"iterations", o.invert.iterations},
                      {"lr", o.invert.lr},
                      {"crop", o.invert.crop},
                      {"final_loss", fit.loss},
                      {"best_iteration", fit.best_iteration},
                      {"psnr", psnr(preview, ref_tar)},
                      {"l1", l1_distance(preview, ref_tar)}};
  if (!o.transfer_in.empty()) {
    const Image t_in = load_image(o.transfer_in), t_tar = load_image(o.transfer_tar);
    const Image t_out = render(net.mlp, t_in, fit.latent, c.threads);
    report["transfer"] = {{"psnr", psnr(t_out, t_tar)}, {"l1", l1_distance(t_out, t_tar)}};
  }
  emit(out, report);
  return exit_code::kOk;
}

// Frames frame_000001.png … frame_N.png with no gaps, in index order.
std::vector<fs::path> collect_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kFileNotFound, "frames directory not found: " + dir.string());
  }
  static const std::regex pattern(R"(frame_(\d{6})\.png)");
  std::map<std::size_t, fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || !std::regex_match(name, m, pattern)) continue;
    const std::size_t index = std::stoul(m[1].str());
    if (index == 0) throw Error(ErrorCode::kCorruptData, "frame numbering starts at 000001");
    frames[index] = entry.path();
  }
  if (frames.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no frame_NNNNNN.png files in " + dir.string());
  }
  std::vector<std::size_t> missing;
  const std::size_t last = frames.rbegin()->first;
  for (std::size_t i = 1; i <= last; ++i) {
    if (!frames.contains(i)) missing.push_back(i);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i : missing) list += (list.empty() ? "" : ", ") + frame_name(i);
    throw Error(ErrorCode::kCorruptData, "missing frames: " + list);
  }
  std::vector<fs::path> ordered;
  for (auto& [index, path] : frames) ordered.push_back(path);
  return ordered;
}

int cmd_video(const VideoOptions& o, const CommonOptions& c, std::ostream& out) {
  const RetouchNet net = load_net(o.net);
  const ControlLatent latent = load_latent(o.latent);
  const std::vector<fs::path> frames = collect_frames(o.frames_dir);
  fs::create_directories(o.out_dir);
  // Each frame is rendered on its own with the same latent, so the output of
  // a frame is exactly what cmd_render produces for it.
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Image img = load_image(frames[i]);
    save_image(render(net.mlp, img, latent, c.threads), fs::path(o.out_dir) / frame_name(i + 1),
               o.depth);
  }
  emit(out, ordered_json{{"command", "video"}, {"frames", frames.size()}, {"out_dir", o.out_dir}});
  return exit_code::kOk;
}

int cmd_multiround(const MultiroundOptions& o, const CommonOptions& c, std::ostream& out) {
  const RetouchNet net = load_net(o.net);
  const nlohmann::json spec = read_json_file(o.params_file);
  std::vector<ParamEntry> rounds;
  if (spec.is_array()) {
    if (spec.size() != o.rounds) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--rounds " + std::to_string(o.rounds) + " but the parameter file has " +
                      std::to_string(spec.size()) + " entries");
    }
    for (const auto& entry : spec) rounds.push_back(param_entry_from_json(entry));
  } else {
    rounds.assign(o.rounds, param_entry_from_json(spec));
  }
  fs::create_directories(o.out_dir);
  // Each round starts from the previous round's written image, so round i is
  // exactly cmd_render applied to round_{i-1}.png.
  Image current = load_image(o.in);
  ordered_json files = ordered_json::array();
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const CategoryMask mask = o.mask.empty() ? rounds[r].mask.value_or(CategoryMask::all())
                                             : CategoryMask::parse(o.mask);
    const ControlLatent latent = net.adapter.latent(rounds[r].params, mask);
    const fs::path path = fs::path(o.out_dir) / ("round_" + std::to_string(r + 1) + ".png");
    const Image result = render(net.mlp, current, latent, c.threads);
    save_image(result, path, o.depth);
    current = quantized(result, o.depth);
    files.push_back(path.string());
  }
  emit(out, ordered_json{{"command", "multiround"}, {"rounds", o.rounds}, {"outputs", files}});
  return exit_code::kOk;
}

int cmd_degrade(const DegradeOptions& o, const CommonOptions& c, std::ostream& out) {
  const SampleMode mode = parse_sample_mode(o.mode);
  const CategoryMask mask = CategoryMask::parse(o.mask);
  const Image img = load_image(o.in);
  const Degraded d = degrade(img, mode, o.scale, c.seed, mask, c.threads);
  save_image(d.image, o.out, o.depth);
  ordered_json record{{"params", params_to_json(d.params)},
                      {"mask", mask_json(mask)},
                      {"seed", c.seed},
                      {"mode", sample_mode_name(mode)},
                      {"scale", o.scale}};
  if (!o.params_out.empty()) {
    std::ofstream f(o.params_out, std::ios::binary | std::ios::trunc);
    f << record.dump(2) << '\n';
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + o.params_out);
  }
  ordered_json report{{"command", "degrade"}, {"output", o.out}};
  report.update(record);
  emit(out, report);
  return exit_code::kOk;
}

int cmd_gen(const GenOptions& o, const CommonOptions& c, std::ostream& out) {
  GenConfig config;
  config.count = o.count;
  config.masks = parse_masks(o.masks);
  config.scale = o.scale;
  config.seed = c.seed;
  config.threads = c.threads;
  const std::vector<ManifestRow> rows = gen_param_pairs(o.corpus, o.out_dir, config);
  emit(out, ordered_json{{"command", "gen"},
                         {"pairs", rows.size()},
                         {"manifest", (fs::path(o.out_dir) / "manifest.jsonl").string()}});
  return exit_code::kOk;
}

int cmd_distill(DistillOptions o, const CommonOptions& c, std::ostream& out, std::ostream& err) {
  o.config.seed = c.seed;
  o.config.mode = parse_sample_mode(o.mode);
  o.config.curriculum = parse_masks(o.masks);
  std::vector<Image> corpus;
  if (!o.corpus.empty()) {
    corpus = load_corpus(o.corpus);
  } else {
    // Seed-derived synthetic corpus, independent of the training stream.
    for (std::size_t i = 0; i < o.synthetic; ++i) {
      corpus.push_back(synthetic_image(o.synthetic_size, o.synthetic_size,
                                       SplitMix64::substream_seed(c.seed ^ 0x5eedc0de, i)));
    }
  }
  const DistillResult result = distill(o.config, corpus, [&err](const DistillLogEntry& e) {
    err << "step " << e.step << " loss " << e.loss << '\n';
  });
  save_net(result.net, o.out);
  ordered_json log = ordered_json::array();
  for (const DistillLogEntry& e : result.log) log.push_back({{"step", e.step}, {"loss", e.loss}});
  emit(out, ordered_json{{"command", "distill"},
                         {"checkpoint", o.out},
                         {"corpus_images", corpus.size()},
                         {"steps", o.config.steps},
                         {"seed", c.seed},
                         {"final_loss", result.log.empty() ? 0.0 : result.log.back().loss},
                         {"log", log}});
  return exit_code::kOk;
}

int cmd_eval(const EvalOptions& o, const CommonOptions& c, std::ostream& out) {
  const RetouchTask task = parse_task(o.task);
  std::optional<std::string> reasoning;
  if (!o.reasoning.empty()) reasoning = read_text_file(o.reasoning);

  if (o.manifest.empty()) {
    const Image output = load_image(o.output), target = load_image(o.target);
    ordered_json report{{"command", "eval"}, {"task", task_name(task)}};
    report.update(pair_report(output, target, task, o.rewards, reasoning));
    emit(out, report);
    return exit_code::kOk;
  }

  // Manifest batch: re-render every stored input with its stored parameters,
  // through the distilled net when one is given and the operator pipeline
  // otherwise, and score it against the stored target.
  const fs::path manifest(o.manifest);
  const std::vector<ManifestRow> rows = read_manifest(manifest);
  std::optional<RetouchNet> net;
  if (!o.net.empty()) net = load_net(o.net);
  ordered_json pairs = ordered_json::array();
  std::map<std::string, double> sums;
  std::vector<std::string> metric_keys;  // in report order
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ManifestRow& row = rows[i];
    const Image input = load_image(manifest.parent_path() / row.input);
    const Image target = load_image(manifest.parent_path() / row.target);
    const Image rendered =
        net ? render(net->mlp, input, net->adapter.latent(row.params, row.mask), c.threads)
            : apply_category(row.params, row.mask, input, c.threads);
    ordered_json entry{{"index", i},
                       {"input", row.input},
                       {"target", row.target},
                       {"mask", row.mask.to_string()}};
    const ordered_json metrics =
        pair_report(quantized(rendered, kManifestDepth), target, task, o.rewards, reasoning);
    for (const auto& item : metrics.items()) {
      if (i == 0) metric_keys.push_back(item.key());
      sums[item.key()] += item.value().get<double>();
    }
    entry.update(metrics);
    pairs.push_back(std::move(entry));
  }
  ordered_json mean = ordered_json::object();
  for (const std::string& key : metric_keys) {
    mean[key] = sums[key] / static_cast<double>(rows.size());
  }
  emit(out, ordered_json{{"command", "eval"},
                         {"task", task_name(task)},
                         {"renderer", net ? "net" : "operators"},
                         {"manifest", o.manifest},
                         {"count", rows.size()},
                         {"mean", mean},
                         {"pairs", pairs}});
  return exit_code::kOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return exit_code::kUsage;
    case ErrorCode::kFileNotFound:
    case ErrorCode::kIo:
      return exit_code::kIo;
    case ErrorCode::kNonFiniteLoss:
    case ErrorCode::kScorerFailure:
      return exit_code::kNumeric;
    default:
      return exit_code::kFormat;
  }
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.png", index);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentiable photo-retouching engine", "retouch"};
  app.require_subcommand(1);
  CommonOptions common;

  RenderOptions render_o;
  auto* render_cmd = app.add_subcommand("render", "Render an image with a latent or parameters");
  render_cmd->add_option("--net", render_o.net, "Renderer checkpoint")->required();
  auto* latent_opt = render_cmd->add_option("--latent", render_o.latent, "Latent file");
  auto* params_opt =
      render_cmd->add_option("--params", render_o.params, "Parameter JSON (object or manifest row)");
  latent_opt->excludes(params_opt);
  render_cmd->add_option("--mask", render_o.mask, "Category flags for --params, e.g. LGS")
      ->needs(params_opt);
  render_cmd->add_option("--in", render_o.in, "Input PNG")->required();
  render_cmd->add_option("--out", render_o.out, "Output PNG")->required();
  render_cmd->add_option("--depth", render_o.depth, "Output bit depth")
      ->check(CLI::IsMember({8, 16}));
  add_threads(render_cmd, common);

  FitOptions fit_o;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a latent to a reference pair");
  fit_cmd->add_option("--net", fit_o.net, "Renderer checkpoint")->required();
  fit_cmd->add_option("--ref-in", fit_o.ref_in, "Reference input PNG")->required();
  fit_cmd->add_option("--ref-tar", fit_o.ref_tar, "Reference target PNG")->required();
  fit_cmd->add_option("--mask", fit_o.mask, "Category flags (default LGS)");
  fit_cmd->add_option("--out-latent", fit_o.out_latent, "Latent file to write")->required();
  fit_cmd->add_option("--iters", fit_o.invert.iterations, "Adam iterations")
      ->capture_default_str();
  fit_cmd->add_option("--lr", fit_o.invert.lr, "Adam learning rate")->capture_default_str();
  fit_cmd->add_option("--crop", fit_o.invert.crop, "Centre-crop side for the loss")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--preview", fit_o.preview, "Write the rendered reference input");
  auto* t_in = fit_cmd->add_option("--transfer-in", fit_o.transfer_in, "Second pair input");
  auto* t_tar = fit_cmd->add_option("--transfer-tar", fit_o.transfer_tar, "Second pair target");
  t_in->needs(t_tar);
  t_tar->needs(t_in);
  add_threads(fit_cmd, common);

  VideoOptions video_o;
  auto* video_cmd = app.add_subcommand("video", "Render numbered frames with one latent");
  video_cmd->add_option("--net", video_o.net, "Renderer checkpoint")->required();
  video_cmd->add_option("--latent", video_o.latent, "Latent file")->required();
  video_cmd->add_option("--frames-dir", video_o.frames_dir, "Directory of frame_NNNNNN.png")
      ->required();
  video_cmd->add_option("--out-dir", video_o.out_dir, "Output directory")->required();
  video_cmd->add_option("--depth", video_o.depth, "Output bit depth")
      ->check(CLI::IsMember({8, 16}));
  add_threads(video_cmd, common);

  MultiroundOptions multi_o;
  auto* multi_cmd = app.add_subcommand("multiround", "Chain renders, one parameter set per round");
  multi_cmd->add_option("--net", multi_o.net, "Renderer checkpoint")->required();
  multi_cmd->add_option("--in", multi_o.in, "Input PNG")->required();
  multi_cmd->add_option("--rounds", multi_o.rounds, "Number of rounds")
      ->required()
      ->check(CLI::PositiveNumber);
  multi_cmd->add_option("--params-file", multi_o.params_file,
                        "JSON array with one entry per round, or one entry for every round")
      ->required();
  multi_cmd->add_option("--mask", multi_o.mask, "Category flags overriding the entries");
  multi_cmd->add_option("--out-dir", multi_o.out_dir, "Directory for round_i.png")->required();
  multi_cmd->add_option("--depth", multi_o.depth, "Output bit depth")
      ->check(CLI::IsMember({8, 16}));
  add_threads(multi_cmd, common);

  DegradeOptions degrade_o;
  auto* degrade_cmd = app.add_subcommand("degrade", "Inverse-degrade an image");
  degrade_cmd->add_option("--in", degrade_o.in, "Input PNG")->required();
  degrade_cmd->add_option("--out", degrade_o.out, "Degraded PNG")->required();
  degrade_cmd->add_option("--mode", degrade_o.mode, "auto | param")->capture_default_str();
  degrade_cmd->add_option("--scale", degrade_o.scale, "Perturbation scale")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  degrade_cmd->add_option("--mask", degrade_o.mask, "Category flags")->capture_default_str();
  degrade_cmd->add_option("--params-out", degrade_o.params_out, "Write forward params JSON");
  degrade_cmd->add_option("--depth", degrade_o.depth, "Output bit depth")
      ->check(CLI::IsMember({8, 16}));
  add_seed(degrade_cmd, common);
  add_threads(degrade_cmd, common);

  GenOptions gen_o;
  auto* gen_cmd = app.add_subcommand("gen", "Generate parameter pairs and a manifest");
  gen_cmd->add_option("--corpus", gen_o.corpus, "Directory of PNG images")->required();
  gen_cmd->add_option("--out-dir", gen_o.out_dir, "Output directory")->required();
  gen_cmd->add_option("-n,--count", gen_o.count, "Number of pairs")->required();
  gen_cmd->add_option("--masks", gen_o.masks, "Masks to cycle (default all seven)")
      ->delimiter(',');
  gen_cmd->add_option("--scale", gen_o.scale, "Perturbation scale")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_seed(gen_cmd, common);
  add_threads(gen_cmd, common);

  DistillOptions distill_o;
  auto* distill_cmd = app.add_subcommand("distill", "Distill the operators into the renderer");
  distill_cmd->add_option("--corpus", distill_o.corpus,
                          "Directory of PNG images (default: synthetic corpus)");
  distill_cmd->add_option("--synthetic", distill_o.synthetic, "Synthetic corpus size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  distill_cmd->add_option("--synthetic-size", distill_o.synthetic_size, "Synthetic image side")
      ->capture_default_str()
      ->check(CLI::Range(1, 4096));
  distill_cmd->add_option("--out", distill_o.out, "Checkpoint to write")->required();
  distill_cmd->add_option("--steps", distill_o.config.steps, "Training steps")
      ->capture_default_str();
  distill_cmd->add_option("--batch", distill_o.config.batch, "Crops per step")
      ->capture_default_str();
  distill_cmd->add_option("--crop", distill_o.config.crop, "Crop side")->capture_default_str();
  distill_cmd->add_option("--lr", distill_o.config.lr, "Peak learning rate")
      ->capture_default_str();
  distill_cmd->add_option("--lr-final", distill_o.config.lr_final, "Final learning rate")
      ->capture_default_str();
  distill_cmd->add_option("--scale", distill_o.config.scale, "Parameter sampling scale")
      ->capture_default_str();
  distill_cmd->add_option("--mode", distill_o.mode, "auto | param")->capture_default_str();
  distill_cmd->add_option("--masks", distill_o.masks, "Mask curriculum (default all seven)")
      ->delimiter(',');
  distill_cmd->add_option("--log-every", distill_o.config.log_every, "Logging interval")
      ->capture_default_str();
  add_seed(distill_cmd, common);

  EvalOptions eval_o;
  auto* eval_cmd = app.add_subcommand("eval", "Metric and reward report");
  auto* output_opt = eval_cmd->add_option("--output", eval_o.output, "Output PNG");
  auto* target_opt = eval_cmd->add_option("--target", eval_o.target, "Target PNG");
  auto* manifest_opt = eval_cmd->add_option("--manifest", eval_o.manifest, "manifest.jsonl");
  output_opt->needs(target_opt)->excludes(manifest_opt);
  target_opt->needs(output_opt)->excludes(manifest_opt);
  eval_cmd->add_option("--net", eval_o.net, "Render manifest inputs through this checkpoint")
      ->needs(manifest_opt);
  eval_cmd->add_option("--reasoning", eval_o.reasoning, "Reasoning text for the format reward");
  eval_cmd->add_option("--task", eval_o.task, "auto | style | param")->capture_default_str();
  eval_cmd->add_option("--gamma", eval_o.rewards.gamma, "Similarity blend")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--alpha", eval_o.rewards.alpha, "First aesthetic weight")
      ->capture_default_str();
  eval_cmd->add_option("--beta", eval_o.rewards.beta, "Second aesthetic weight")
      ->capture_default_str();
  add_threads(eval_cmd, common);

  std::vector<std::string> argv_storage = {"retouch"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());

  try {
    common.threads = default_threads();
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (render_cmd->parsed() && render_o.latent.empty() && render_o.params.empty()) {
      throw CLI::ValidationError("render", "needs one of --latent and --params");
    }
    if (eval_cmd->parsed() && eval_o.manifest.empty() && eval_o.output.empty()) {
      throw CLI::ValidationError("eval", "needs --output and --target, or --manifest");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    if (render_cmd->parsed()) return cmd_render(render_o, common, out);
    if (fit_cmd->parsed()) return cmd_fit(fit_o, common, out);
    if (video_cmd->parsed()) return cmd_video(video_o, common, out);
    if (multi_cmd->parsed()) return cmd_multiround(multi_o, common, out);
    if (degrade_cmd->parsed()) return cmd_degrade(degrade_o, common, out);
    if (gen_cmd->parsed()) return cmd_gen(gen_o, common, out);
    if (distill_cmd->parsed()) return cmd_distill(distill_o, common, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval_o, common, out);
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error [IoError]: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const nlohmann::json::exception& e) {
    err << "error [CorruptData]: " << e.what() << '\n';
    return exit_code::kFormat;
  }
  return exit_code::kUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace retouch

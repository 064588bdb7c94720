// audex — attribution toolkit for the frame-based audio character classifier.
//
// Subcommands:
//   attribute    WAV + model -> attribution tensor, aggregation, heatmap
//   compare      two attribution files -> stats-difference report
//   verify       property suites (gradients, LRP conservation, Shapley)
//   train-demo   train the synthetic demo model shipped with the repo
//   features     WAV -> MFCC matrix as CSV
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "audex/aggregate.hpp"
#include "audex/attribution.hpp"
#include "audex/audio.hpp"
#include "audex/charset.hpp"
#include "audex/error.hpp"
#include "audex/hash.hpp"
#include "audex/io.hpp"
#include "audex/mfcc.hpp"
#include "audex/model.hpp"
#include "audex/render.hpp"
#include "audex/rng.hpp"
#include "audex/window.hpp"

namespace {

namespace fs = std::filesystem;

struct AttributeArgs {
  std::string input;
  std::string model;
  std::string method = "saliency";
  std::string display = "per-window";
  std::string target = "argmax";
  std::string background = "letters";
  std::string out_dir = "out";
  double epsilon = 1e-4;
  std::size_t permutations = 2000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double clip_percentile = 99.0;
};

struct CompareArgs {
  std::string path_a;
  std::string path_b;
  std::size_t head_frames = 10;
  std::string json_out;
};

struct VerifyArgs {
  std::string only;    // empty = all suites
  std::string inject;  // test hook: perturb a computation to prove detection
};

struct TrainDemoArgs {
  std::string out = "demo_model.json";
  std::vector<std::size_t> hidden = {128, 128};
  std::size_t epochs = 150;
  double learning_rate = 1e-4;
  std::uint64_t seed = 42;
};

struct FeaturesArgs {
  std::string input;
  std::string out = "mfcc.csv";
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw audex::Error(audex::ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw audex::Error(audex::ErrorCode::IoError, "write failed for " + path);
}

// --- attribute --------------------------------------------------------------

std::size_t parse_target_char(const std::string& value) {
  const std::string name = value.substr(std::string("char:").size());
  if (name == "space") return audex::CharSet::kSpaceIndex;
  if (name.size() == 1) {
    const int idx = audex::CharSet::index_of(name[0]);
    if (idx >= 0) return static_cast<std::size_t>(idx);
  }
  throw audex::Error(audex::ErrorCode::InvalidArgument,
                     "no such character in the charset: '" + name + "'");
}

int cmd_attribute(const AttributeArgs& args) {
  const audex::AudioClip clip = audex::read_wav(args.input);
  const audex::MfccMatrix mfcc = audex::compute_mfcc(clip);
  const std::vector<audex::FrameWindow> windows = audex::make_windows(mfcc);
  const audex::ModelParams model = audex::load_model(args.model);

  // per-window predictions: argmax targets and the x-axis labels
  std::vector<std::size_t> predicted(windows.size());
  std::string predicted_chars(windows.size(), '?');
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::vector<double> logits =
        audex::forward_logits(model, windows[i].flatten());
    predicted[i] = audex::argmax(logits);
    predicted_chars[i] = audex::CharSet::char_at(predicted[i]);
  }

  std::vector<std::size_t> targets = predicted;
  if (args.target != "argmax") {
    std::fill(targets.begin(), targets.end(), parse_target_char(args.target));
  }

  const audex::Method method = audex::method_from_name(args.method);
  audex::LrpConfig lrp_config;
  lrp_config.epsilon = args.epsilon;

  audex::ShapConfig shap_config;
  shap_config.num_permutations = args.permutations;
  shap_config.seed = args.seed;
  std::string background_source = "none";
  if (method == audex::Method::Shap) {
    std::vector<audex::Mat> pool;
    if (args.background == "letters") {
      for (std::size_t i = 0; i < windows.size(); ++i) {
        if (audex::CharSet::is_letter(predicted[i])) {
          pool.push_back(windows[i].values);
        }
      }
      background_source = "letters";
    }
    if (pool.empty()) {
      // no letter-classified windows (or --background all): use every window
      for (const audex::FrameWindow& w : windows) pool.push_back(w.values);
      background_source = "all";
    }
    shap_config.background = audex::build_background(pool);
  }

  const audex::AttributionTensor tensor = audex::attribute_all(
      model, windows, targets, method, lrp_config, shap_config);

  audex::AggregatedAttribution aggregated;
  if (args.display == "per-window") {
    aggregated = audex::sum_per_window(tensor);
  } else if (args.display == "per-frame") {
    aggregated = audex::sum_per_frame(tensor);
  } else {
    const std::size_t j = static_cast<std::size_t>(
        std::stoul(args.display.substr(std::string("relative:").size())));
    aggregated = audex::slice_relative_frame(tensor, j);
  }

  audex::RenderSpec render_spec;
  render_spec.clip_percentile = args.clip_percentile;
  render_spec.axis_labels = predicted_chars;
  const audex::Heatmap heatmap =
      audex::render_heatmap(aggregated.values, render_spec);

  fs::create_directories(args.out_dir);
  const std::string json_path = (fs::path(args.out_dir) / "attribution.json").string();
  const std::string csv_path = (fs::path(args.out_dir) / "attribution.csv").string();
  const std::string agg_path = (fs::path(args.out_dir) / "aggregated.csv").string();
  const std::string svg_path = (fs::path(args.out_dir) / "heatmap.svg").string();
  const std::string manifest_path = (fs::path(args.out_dir) / "manifest.json").string();

  audex::AttributionFile file;
  file.tensor = tensor;
  file.lrp = lrp_config;
  file.shap = shap_config;
  audex::write_attribution_json(file, json_path);
  audex::write_attribution_csv(tensor, csv_path);
  audex::export_csv(aggregated.values, agg_path);
  write_text_file(svg_path, heatmap.svg);

  nlohmann::json manifest;
  manifest["command"] = "attribute";
  manifest["input"] = args.input;
  manifest["input_fnv1a64"] = audex::hash_hex(audex::fnv1a64_file(args.input));
  manifest["model"] = args.model;
  manifest["model_fnv1a64"] = audex::hash_hex(audex::fnv1a64_file(args.model));
  manifest["method"] = args.method;
  manifest["display"] = args.display;
  manifest["target"] = args.target;
  manifest["clip_percentile"] = args.clip_percentile;
  manifest["clip_value"] = heatmap.clip;
  manifest["num_windows"] = windows.size();
  manifest["threads"] = audex::default_thread_count();
  if (method == audex::Method::Lrp) {
    manifest["epsilon"] = args.epsilon;
  }
  if (method == audex::Method::Shap) {
    manifest["permutations"] = args.permutations;
    manifest["seed"] = args.seed;
    manifest["background_source"] = background_source;
  }
  nlohmann::json outputs;
  for (const std::string& p : {json_path, csv_path, agg_path, svg_path}) {
    outputs[fs::path(p).filename().string()] =
        audex::hash_hex(audex::fnv1a64_file(p));
  }
  manifest["outputs"] = std::move(outputs);
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  std::cout << "windows: " << windows.size() << "\n";
  std::cout << "predicted: " << predicted_chars << "\n";
  std::cout << "wrote " << json_path << ", " << csv_path << ", " << agg_path
            << ", " << svg_path << ", " << manifest_path << "\n";
  return 0;
}

// --- compare ----------------------------------------------------------------

nlohmann::json stats_json(const audex::AttributionStats& stats) {
  nlohmann::json j;
  j["head_frames"] = stats.head_frames;
  j["per_bin_mean_magnitude"] = stats.per_bin_mean_magnitude;
  j["per_position_mean_magnitude"] = stats.per_position_mean_magnitude;
  j["head_energy_fraction"] = stats.head_energy_fraction;
  return j;
}

int cmd_compare(const CompareArgs& args) {
  const audex::AttributionFile a = audex::read_attribution_json(args.path_a);
  const audex::AttributionFile b = audex::read_attribution_json(args.path_b);
  if (a.tensor.method != b.tensor.method ||
      a.tensor.num_windows() != b.tensor.num_windows()) {
    throw audex::Error(audex::ErrorCode::ShapeMismatch,
                       "attribution files differ in method or window count");
  }

  const audex::AttributionStats stats_a =
      audex::attribution_stats(a.tensor, args.head_frames);
  const audex::AttributionStats stats_b =
      audex::attribution_stats(b.tensor, args.head_frames);
  const audex::StatsDelta delta = audex::compare_stats(stats_a, stats_b);

  std::printf("method: %s   windows: %zu   head frames: %zu\n",
              audex::method_name(a.tensor.method), a.tensor.num_windows(),
              args.head_frames);
  std::printf("%-6s %14s %14s %14s\n", "bin", "mean|A| (a)", "mean|A| (b)",
              "delta");
  for (std::size_t k = 0; k < delta.per_bin_delta.size(); ++k) {
    std::printf("%-6zu %14.6g %14.6g %14.6g\n", k,
                stats_a.per_bin_mean_magnitude[k],
                stats_b.per_bin_mean_magnitude[k], delta.per_bin_delta[k]);
  }
  std::printf("head energy fraction: a=%.6g b=%.6g delta=%.6g\n",
              stats_a.head_energy_fraction, stats_b.head_energy_fraction,
              delta.head_energy_fraction_delta);

  if (!args.json_out.empty()) {
    nlohmann::json report;
    report["a"] = args.path_a;
    report["b"] = args.path_b;
    report["method"] = audex::method_name(a.tensor.method);
    report["head_frames"] = args.head_frames;
    report["stats_a"] = stats_json(stats_a);
    report["stats_b"] = stats_json(stats_b);
    report["delta"]["per_bin"] = delta.per_bin_delta;
    report["delta"]["per_position"] = delta.per_position_delta;
    report["delta"]["head_energy_fraction"] = delta.head_energy_fraction_delta;
    write_text_file(args.json_out, report.dump(2) + "\n");
    std::cout << "wrote " << args.json_out << "\n";
  }
  return 0;
}

// --- verify -----------------------------------------------------------------

audex::FrameWindow random_window(audex::Rng& rng) {
  audex::FrameWindow window;
  window.values = audex::Mat(audex::kWindowRows, audex::kNumCoefficients);
  for (double& v : window.values.data) v = rng.uniform(-2.0, 2.0);
  return window;
}

audex::ModelParams random_model(std::uint64_t seed, bool random_bias) {
  audex::ModelParams model = audex::init_model({64, 64}, seed);
  if (random_bias) {
    audex::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (audex::Layer& layer : model.layers) {
      for (double& b : layer.bias) b = rng.uniform(-0.5, 0.5);
    }
  }
  return model;
}

bool verify_gradient() {
  constexpr double kStep = 1e-5;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    audex::Rng rng(1000 + trial);
    const audex::ModelParams model = random_model(2000 + trial, true);
    audex::FrameWindow window = random_window(rng);
    const std::size_t target = rng.bounded(audex::CharSet::kSize);
    const audex::Mat grad = audex::input_gradient(model, window, target);
    for (int c = 0; c < 20; ++c) {
      const std::size_t idx = rng.bounded(audex::kWindowFeatures);
      const double saved = window.values.data[idx];
      window.values.data[idx] = saved + kStep;
      const double hi = audex::forward_logits(model, window.flatten())[target];
      window.values.data[idx] = saved - kStep;
      const double lo = audex::forward_logits(model, window.flatten())[target];
      window.values.data[idx] = saved;
      const double fd = (hi - lo) / (2.0 * kStep);
      const double analytic = grad.data[idx];
      const double scale = std::max(std::abs(analytic), std::abs(fd));
      if (scale <= 1e-4) continue;  // below the finite-difference noise floor
      if (std::abs(analytic - fd) / scale >= 1e-5) return false;
    }
  }
  return true;
}

bool verify_lrp(bool inject) {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    audex::Rng rng(3000 + trial);
    const audex::ModelParams model = random_model(4000 + trial, false);
    const audex::FrameWindow window = random_window(rng);
    const std::size_t target = rng.bounded(audex::CharSet::kSize);
    const double logit =
        audex::forward_logits(model, window.flatten())[target];
    if (std::abs(logit) < 1e-6) continue;

    // conservation at epsilon = 0 with zero biases
    audex::LrpConfig config;
    config.epsilon = inject ? 1e-3 : 0.0;  // hook: a perturbed denominator
    const audex::Mat relevance =
        audex::compute_lrp(model, window, target, config);
    double total = 0.0;
    for (double v : relevance.data) total += v;
    if (std::abs(total - logit) / std::abs(logit) >= 1e-9) return false;

    // epsilon absorption: total = logit / (1+eps)^L
    audex::LrpConfig eps_config;
    eps_config.epsilon = 1e-4;
    const audex::Mat damped =
        audex::compute_lrp(model, window, target, eps_config);
    double damped_total = 0.0;
    for (double v : damped.data) damped_total += v;
    const double expected =
        logit / std::pow(1.0 + eps_config.epsilon,
                         static_cast<double>(model.layers.size()));
    if (std::abs(damped_total - expected) / std::abs(expected) >= 1e-9) {
      return false;
    }
  }
  return true;
}

bool verify_shapley() {
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    audex::Rng rng(5000 + trial);
    const audex::ModelParams model = random_model(6000 + trial, true);
    const std::size_t target = rng.bounded(audex::CharSet::kSize);

    // window = background except at 10 active features
    audex::ShapConfig config;
    config.num_permutations = 2000;
    config.seed = 7000 + trial;
    for (double& v : config.background.values.data) v = rng.uniform(-1.0, 1.0);
    audex::FrameWindow window;
    window.values = config.background.values;
    std::vector<std::size_t> active(audex::kWindowFeatures);
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
    rng.shuffle(active);
    active.resize(10);
    for (const std::size_t p : active) {
      window.values.data[p] += rng.uniform(0.5, 1.5);
    }

    audex::Mat se;
    const audex::Mat phi =
        audex::compute_shap(model, window, target, config, &se);

    // efficiency: contributions sum to f(window) - f(background)
    const double fx = audex::forward_logits(model, window.flatten())[target];
    const double fb =
        audex::forward_logits(model, config.background.values.data)[target];
    double total = 0.0;
    for (double v : phi.data) total += v;
    if (std::abs(total - (fx - fb)) > 1e-9 * std::max(1.0, std::abs(fx - fb))) {
      return false;
    }

    // exact oracle over the active features
    const auto value = [&](std::uint32_t mask) {
      std::vector<double> input = config.background.values.data;
      for (std::size_t p = 0; p < active.size(); ++p) {
        if (mask & (1u << p)) input[active[p]] = window.values.data[active[p]];
      }
      return audex::forward_logits(model, input)[target];
    };
    const std::vector<double> exact =
        audex::exact_shapley(value, active.size());

    int outside = 0;
    for (std::size_t p = 0; p < active.size(); ++p) {
      const double tolerance = 3.0 * se.data[active[p]] + 1e-12;
      if (std::abs(phi.data[active[p]] - exact[p]) > tolerance) ++outside;
    }
    if (outside > 1) return false;  // ~99.7% expected inside 3 SE
  }
  return true;
}

int cmd_verify(const VerifyArgs& args) {
  const bool inject_lrp = args.inject == "lrp-denominator";
  bool all_passed = true;
  const auto run = [&](const std::string& name,
                       const std::function<bool()>& suite) {
    if (!args.only.empty() && args.only != name) return;
    const bool ok = suite();
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
    all_passed = all_passed && ok;
  };

  run("gradient", verify_gradient);
  run("lrp", [&] { return verify_lrp(inject_lrp); });
  run("shapley", verify_shapley);
  return all_passed ? 0 : 1;
}

// --- train-demo -------------------------------------------------------------

audex::AudioClip tone_clip(std::size_t character, double seconds) {
  audex::AudioClip clip;
  clip.sample_rate = 16000;
  const std::size_t count =
      static_cast<std::size_t>(seconds * clip.sample_rate);
  clip.samples.resize(count);
  const double base = 200.0 + 250.0 * static_cast<double>(character);
  for (std::size_t n = 0; n < count; ++n) {
    const double t = static_cast<double>(n) / clip.sample_rate;
    clip.samples[n] = 0.4 * std::sin(2.0 * M_PI * base * t) +
                      0.1 * std::sin(2.0 * M_PI * 2.0 * base * t);
  }
  return clip;
}

int cmd_train_demo(const TrainDemoArgs& args) {
  std::vector<audex::FrameWindow> windows;
  std::vector<int> labels;
  for (std::size_t c = 0; c < audex::CharSet::kSize; ++c) {
    const audex::MfccMatrix mfcc = audex::compute_mfcc(tone_clip(c, 0.5));
    for (audex::FrameWindow& w : audex::make_windows(mfcc)) {
      windows.push_back(std::move(w));
      labels.push_back(static_cast<int>(c));
    }
  }
  std::cout << "training on " << windows.size() << " windows, "
            << static_cast<int>(audex::CharSet::kSize) << " classes\n";

  audex::ModelParams model = audex::init_model(args.hidden, args.seed);
  for (std::size_t epoch = 0; epoch < args.epochs; ++epoch) {
    audex::TrainResult result = audex::train_epoch(
        model, windows, labels, args.learning_rate, args.seed + epoch + 1);
    model = std::move(result.model);
    std::printf("epoch %3zu  mean loss %.6f\n", epoch + 1, result.mean_loss);
  }

  std::size_t correct = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::vector<double> logits =
        audex::forward_logits(model, windows[i].flatten());
    if (audex::argmax(logits) == static_cast<std::size_t>(labels[i])) ++correct;
  }
  std::printf("train accuracy %.1f%%\n",
              100.0 * static_cast<double>(correct) /
                  static_cast<double>(windows.size()));

  audex::save_model(model, args.out);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

// --- features ---------------------------------------------------------------

int cmd_features(const FeaturesArgs& args) {
  const audex::AudioClip clip = audex::read_wav(args.input);
  const audex::MfccMatrix mfcc = audex::compute_mfcc(clip);
  audex::export_csv(mfcc.values, args.out);
  std::cout << "frames: " << mfcc.num_frames() << "\n";
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

const CLI::Validator DisplayValidator(
    [](std::string& value) -> std::string {
      if (value == "per-frame" || value == "per-window") return {};
      if (value.rfind("relative:", 0) == 0) {
        const std::string rest = value.substr(9);
        if (!rest.empty() &&
            rest.find_first_not_of("0123456789") == std::string::npos &&
            rest.size() <= 2 && std::stoul(rest) < 19) {
          return {};
        }
        return "relative position must be an integer in [0,19)";
      }
      return "display must be per-frame, per-window, or relative:<j>";
    },
    "DISPLAY");

const CLI::Validator TargetValidator(
    [](std::string& value) -> std::string {
      if (value == "argmax") return {};
      if (value.rfind("char:", 0) == 0) {
        const std::string rest = value.substr(5);
        if (rest == "space" ||
            (rest.size() == 1 && audex::CharSet::index_of(rest[0]) >= 0)) {
          return {};
        }
        return "char must name a charset character (a-z, space, -)";
      }
      return "target must be argmax or char:<c>";
    },
    "TARGET");

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attribution toolkit for the audio character classifier"};
  app.require_subcommand(1);

  AttributeArgs attr;
  CLI::App* attribute = app.add_subcommand(
      "attribute", "compute attributions for a WAV clip and render a heatmap");
  attribute->add_option("--input", attr.input, "input WAV (16 kHz mono PCM)")
      ->required();
  attribute->add_option("--model", attr.model, "model JSON file")->required();
  attribute->add_option("--method", attr.method, "attribution method")
      ->check(CLI::IsMember({"saliency", "lrp", "shap"}));
  attribute->add_option("--display", attr.display,
                        "aggregation: per-window, per-frame, or relative:<j>")
      ->check(DisplayValidator);
  attribute->add_option("--target", attr.target,
                        "explained output: argmax or char:<c>")
      ->check(TargetValidator);
  attribute->add_option("--epsilon", attr.epsilon, "LRP stabilizer")
      ->check(CLI::NonNegativeNumber);
  attribute->add_option("--permutations", attr.permutations,
                        "SHAP permutation count")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed_opt =
      attribute->add_option("--seed", attr.seed, "SHAP sampling seed");
  attribute->add_option("--background", attr.background,
                        "SHAP background: letter-classified or all windows")
      ->check(CLI::IsMember({"letters", "all"}));
  attribute->add_option("--clip-percentile", attr.clip_percentile,
                        "heatmap clip percentile in (50,100]");
  attribute->add_option("--out", attr.out_dir, "output directory");

  CompareArgs cmp;
  CLI::App* compare = app.add_subcommand(
      "compare", "difference report between two attribution files");
  compare->add_option("a", cmp.path_a, "first attribution JSON")->required();
  compare->add_option("b", cmp.path_b, "second attribution JSON")->required();
  compare->add_option("--head-frames", cmp.head_frames,
                      "leading-window count for the head energy fraction");
  compare->add_option("--json", cmp.json_out, "also write a JSON report here");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the gradient/LRP/Shapley property suites");
  verify->add_option("--only", ver.only, "run a single suite")
      ->check(CLI::IsMember({"gradient", "lrp", "shapley"}));
  verify->add_option("--inject", ver.inject, "fault-injection hook for tests")
      ->check(CLI::IsMember({"lrp-denominator"}))
      ->group("");

  TrainDemoArgs train;
  CLI::App* train_demo = app.add_subcommand(
      "train-demo", "train the synthetic tone-classifier demo model");
  train_demo->add_option("--out", train.out, "model output path");
  train_demo->add_option("--hidden", train.hidden, "hidden layer sizes")
      ->delimiter(',');
  train_demo->add_option("--epochs", train.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  train_demo->add_option("--lr", train.learning_rate, "learning rate")
      ->check(CLI::NonNegativeNumber);
  train_demo->add_option("--seed", train.seed, "init/shuffle seed");

  FeaturesArgs feat;
  CLI::App* features =
      app.add_subcommand("features", "extract the MFCC matrix as CSV");
  features->add_option("--input", feat.input, "input WAV")->required();
  features->add_option("--out", feat.out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  attr.seed_given = seed_opt->count() > 0;
  if (*attribute && attr.method == "shap" && !attr.seed_given) {
    std::cerr << "error: --seed is required when --method shap\n";
    return 2;
  }

  try {
    if (*attribute) return cmd_attribute(attr);
    if (*compare) return cmd_compare(cmp);
    if (*verify) return cmd_verify(ver);
    if (*train_demo) return cmd_train_demo(train);
    if (*features) return cmd_features(feat);
  } catch (const audex::Error& e) {
    std::cerr << "error [" << audex::error_code_name(e.code()) << "] "
              << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

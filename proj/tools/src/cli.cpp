// Copyright 2026 The netaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "netaug/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "netaug/augment.hpp"
#include "netaug/cli/gradcheck.hpp"
#include "netaug/cli/manifest.hpp"
#include "netaug/distribution.hpp"
#include "netaug/error.hpp"
#include "netaug/evaluation.hpp"
#include "netaug/learner.hpp"
#include "netaug/synthgen.hpp"
#include "netaug/trace_io.hpp"

namespace netaug::cli {
namespace {

namespace fs = std::filesystem;

/// Bad flag values that CLI11 cannot see (cross-field or domain checks).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A check command found a violation.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------------------
// Shared flag groups

struct Common {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string config;
  std::string out;
};

void add_common(CLI::App* sub, Common& c, bool out_required = true) {
  sub->add_option("--seed", c.seed, "Run seed");
  sub->add_option("--threads", c.threads, "Worker cap")->check(CLI::PositiveNumber);
  sub->add_option("--config", c.config, "key=value file; flags given here win");
  auto* out = sub->add_option("--out", c.out, "Output directory");
  if (out_required) out->required();
}

void add_augment(CLI::App* sub, AugmentConfig& a) {
  sub->add_option("--shift-max", a.shift_max);
  sub->add_option("--r-upsample", a.r_upsample);
  sub->add_option("--r-downsample", a.r_downsample);
  sub->add_option("--r-insert", a.r_insert);
  sub->add_option("--burst-threshold", a.burst_size_threshold);
  sub->add_option("--n-merge", a.n_merge);
  sub->add_option("--r-merge", a.r_merge);
  sub->add_option("--preserve-prefix", a.preserve_prefix);
  sub->add_option("--p-flip", a.p_flip, "FlipAugment probability");
  sub->add_option("--low-cells", a.low_cells);
  sub->add_option("--high-cells", a.high_cells);
}

struct TrainFlags {
  std::size_t epochs = 30;
  std::size_t batch = 64;
  double lr = 1e-3;
  std::string optimizer = "adam";
  bool cosine = false;
};

void add_train(CLI::App* sub, TrainFlags& t) {
  sub->add_option("--epochs", t.epochs);
  sub->add_option("--batch", t.batch)->check(CLI::PositiveNumber);
  sub->add_option("--lr", t.lr)->check(CLI::NonNegativeNumber);
  sub->add_option("--optimizer", t.optimizer)->check(CLI::IsMember({"adam", "sgd"}));
  sub->add_flag("--cosine", t.cosine, "Cosine learning-rate decay to 0");
}

TrainConfig train_config(const TrainFlags& t, const Common& c) {
  TrainConfig cfg;
  cfg.epochs = t.epochs;
  cfg.batch = t.batch;
  cfg.optimizer.learning_rate = t.lr;
  cfg.optimizer.kind = t.optimizer == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdam;
  cfg.optimizer.cosine = t.cosine;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return cfg;
}

void add_dims(CLI::App* sub, ModelDims& d) {
  sub->add_option("--hidden", d.hidden, "Encoder hidden sizes, comma separated")
      ->delimiter(',');
  sub->add_option("--embedding", d.embedding)->check(CLI::PositiveNumber);
  sub->add_option("--projection-hidden", d.projection_hidden)->check(CLI::PositiveNumber);
}

void check_augment(const AugmentConfig& a) {
  try {
    a.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::map<std::string, std::string> snapshot(const CLI::App* sub) {
  std::map<std::string, std::string> out;
  for (const auto* opt : sub->get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    out[names.front()] = value;
  }
  return out;
}

std::vector<DirectionTrace> keep_augmentable(std::vector<DirectionTrace> traces,
                                             const AugmentConfig& a) {
  FilterPolicy p{WorldMode::kOpen, 0.2, a.preserve_prefix + 1};
  const auto before = traces.size();
  auto kept = filter_traces(traces, p);
  if (kept.size() != before) {
    std::cerr << "skipped " << before - kept.size() << " traces with at most "
              << a.preserve_prefix << " nonzero cells\n";
  }
  return kept;
}

/// Labeled traces of monitored classes; unmonitored and unlabeled dropped.
std::vector<DirectionTrace> monitored_only(std::vector<DirectionTrace> traces) {
  std::vector<DirectionTrace> out;
  for (auto& t : traces) {
    if (t.label() && *t.label() >= 0) out.push_back(std::move(t));
  }
  if (out.size() != traces.size()) {
    std::cerr << "ignored " << traces.size() - out.size()
              << " unlabeled or unmonitored traces\n";
  }
  return out;
}

std::size_t infer_classes(std::span<const DirectionTrace> traces, std::size_t given) {
  if (given) return given;
  int top = -1;
  for (const auto& t : traces) top = std::max(top, *t.label());
  if (top < 0) throw InsufficientData("no labeled traces");
  return std::size_t(top) + 1;
}

std::string loss_table(const TrainHistory& h) {
  std::string s = "epoch\tloss\n";
  for (std::size_t e = 0; e < h.epoch_loss.size(); ++e) {
    s += std::to_string(e) + '\t' + fmt(h.epoch_loss[e]) + '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands. Each fills the manifest's inputs/outputs; run() writes it.

struct GenFlags {
  std::size_t classes = 20;
  std::size_t visits = 100;
  std::vector<std::string> profiles = {"superior", "inferior"};
  double noise = 0.25;
};

void cmd_gen(const GenFlags& g, const Common& c, RunManifest& m) {
  if (g.classes < 2) throw UsageError("--classes must be at least 2");
  if (g.visits < 1) throw UsageError("--visits must be at least 1");
  std::vector<ConditionProfile> profiles;
  for (const auto& name : g.profiles) {
    profiles.push_back(name == "superior" ? superior_profile() : inferior_profile());
  }
  RandomSource rng(c.seed);
  TemplateOptions opt;
  opt.noise_scale = g.noise;
  const auto templates = make_templates(g.classes, rng, opt);
  const auto data = make_dataset(templates, profiles, g.visits, rng);
  const auto dir = prepare_out(c.out);
  io::save_ttrace(dir / "traces.ttrace", data);
  m.add_output(dir / "traces.ttrace");
  std::cout << "traces " << data.size() << '\n';
}

struct SplitFlags {
  std::string in;
  double threshold = kDefaultNcmThreshold;
  std::size_t trace_len = 5000;
};

void cmd_ncm_split(const SplitFlags& s, const Common& c, RunManifest& m) {
  m.add_input(s.in);
  const auto traces = io::load_ttrace(s.in);
  std::vector<TimedTrace> usable;
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    try {
      compute_ncm(traces[i]);
      usable.push_back(traces[i]);
    } catch (const DegenerateTrace& e) {
      std::cerr << "warning: trace " << i << " skipped: " << e.what() << '\n';
      ++degenerate;
    }
  }
  const auto part = partition_by_ncm(usable, s.threshold);
  auto convert = [&](const std::vector<TimedTrace>& v) {
    std::vector<DirectionTrace> out;
    out.reserve(v.size());
    for (const auto& t : v) out.push_back(to_direction_trace(t, s.trace_len));
    return out;
  };
  const auto dir = prepare_out(c.out);
  io::save_dtrace(dir / "superior.dtrace", convert(part.superior));
  io::save_dtrace(dir / "inferior.dtrace", convert(part.inferior));
  m.add_output(dir / "superior.dtrace");
  m.add_output(dir / "inferior.dtrace");
  std::cout << "superior " << part.superior.size() << "\ninferior " << part.inferior.size()
            << "\ndegenerate " << degenerate << '\n';
}

struct AugmentFlags {
  std::string in;
  std::string dist;
  std::string method = "net";
  std::size_t views = 1;
  std::size_t trace_len = 0;
  AugmentConfig aug;
};

void cmd_augment(const AugmentFlags& a, const Common& c, RunManifest& m) {
  check_augment(a.aug);
  if (a.views < 1) throw UsageError("--views must be at least 1");
  m.add_input(a.in);
  auto traces = io::load_dtrace(
      a.in, a.trace_len ? std::optional<std::size_t>(a.trace_len) : std::nullopt);
  std::optional<BurstSizeDistribution> dist;
  if (a.method == "net") {
    if (!a.dist.empty()) {
      m.add_input(a.dist);
      dist = load_bdist(a.dist);
    } else {
      dist = build_distribution(traces);
    }
  }
  std::vector<DirectionTrace> out(traces.size() * a.views);
  std::size_t passthrough = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t v = 0; v < a.views; ++v) {
      auto rng = RandomSource::derive(c.seed, i, v);
      auto& dst = out[i * a.views + v];
      if (a.method == "flip") {
        dst = flip_augment(traces[i], a.aug.p_flip, rng);
      } else if (traces[i].nonzero_count() > a.aug.preserve_prefix) {
        dst = net_augment(traces[i], a.aug, *dist, rng);
      } else {
        dst = traces[i];
        ++passthrough;
      }
    }
  }
  if (passthrough) {
    std::cerr << "warning: " << passthrough << " views copied unchanged (trace too short)\n";
  }
  const auto dir = prepare_out(c.out);
  io::save_dtrace(dir / "augmented.dtrace", out);
  m.add_output(dir / "augmented.dtrace");
  std::cout << "views " << out.size() << '\n';
}

struct StatsFlags {
  std::string in;
};

void cmd_stats(const StatsFlags& s, const Common& c, RunManifest& m) {
  m.add_input(s.in);
  const auto traces = io::load_dtrace(s.in);
  const auto dist = build_distribution(traces);

  // Per-label incoming-cell count, population mean and standard deviation.
  std::map<std::optional<Label>, std::vector<double>> incoming;
  for (const auto& t : traces) incoming[t.label()].push_back(double(t.incoming_count()));
  std::string table = "label\tcount\tmean\tstd\n";
  for (const auto& [label, v] : incoming) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= double(v.size());
    table += (label ? std::to_string(*label) : std::string("-")) + '\t' +
             std::to_string(v.size()) + '\t' + fmt(mean) + '\t' + fmt(std::sqrt(var)) + '\n';
  }

  const auto dir = prepare_out(c.out);
  save_bdist(dir / "outgoing.bdist", dist);
  write_text(dir / "incoming.tsv", table);
  m.add_output(dir / "outgoing.bdist");
  m.add_output(dir / "incoming.tsv");
  std::cout << "outgoing bursts " << dist.total() << " over " << dist.support().size()
            << " sizes\n";
}

struct PretrainFlags {
  std::string in;
  std::string dist;
  std::string augment = "net";
  std::size_t trace_len = 500;
  double tau_s = 0.5;
  TrainFlags train;
  ModelDims dims;
  AugmentConfig aug;
};

void cmd_pretrain(const PretrainFlags& p, const Common& c, RunManifest& m) {
  check_augment(p.aug);
  m.add_input(p.in);
  auto traces = io::load_dtrace(p.in, p.trace_len);
  if (p.augment == "net") traces = keep_augmentable(std::move(traces), p.aug);
  UnlabeledCorpus corpus(std::move(traces));

  auto view = ViewAugmenter::flip(p.aug.p_flip);
  if (p.augment == "net") {
    std::optional<BurstSizeDistribution> dist;
    if (!p.dist.empty()) {
      m.add_input(p.dist);
      dist = load_bdist(p.dist);
    } else {
      dist = build_distribution(corpus.traces());
    }
    view = ViewAugmenter::net_augment(p.aug, *dist);
  }
  auto dims = p.dims;
  dims.input = p.trace_len;
  SslConfig ssl;
  ssl.tau_s = p.tau_s;
  const auto result = pretrain(corpus, init_pretrain_model(dims, c.seed),
                               train_config(p.train, c), view, ssl);

  const auto dir = prepare_out(c.out);
  save_checkpoint(dir / "model.ckpt", result.params);
  write_text(dir / "loss.tsv", loss_table(result.history));
  m.add_output(dir / "model.ckpt");
  m.add_output(dir / "loss.tsv");
  std::cout << "loss " << fmt(result.history.epoch_loss.empty()
                                  ? 0.0
                                  : result.history.epoch_loss.back())
            << '\n';
}

/// Encoder to start supervised training from: a checkpoint, or a fresh one.
ModelParams starting_model(const std::string& path, ModelDims dims, std::size_t trace_len,
                           std::uint64_t seed, RunManifest& m) {
  if (!path.empty()) {
    m.add_input(path);
    return load_checkpoint(path);
  }
  dims.input = trace_len;
  return init_pretrain_model(dims, seed);
}

struct FinetuneFlags {
  std::string in;
  std::string model;
  std::size_t trace_len = 500;
  std::size_t n_labeled = 0;
  std::size_t classes = 0;
  std::optional<double> weak_flip;
  TrainFlags train;
  ModelDims dims;
};

void cmd_finetune(const FinetuneFlags& f, const Common& c, RunManifest& m) {
  const auto init = starting_model(f.model, f.dims, f.trace_len, c.seed, m);
  m.add_input(f.in);
  auto labeled = monitored_only(io::load_dtrace(f.in, init.input_length()));
  labeled = select_per_class(labeled, f.n_labeled, c.seed);
  const auto classes = infer_classes(labeled, f.classes);
  const auto result =
      finetune(init, labeled, classes, train_config(f.train, c), FinetuneOptions{f.weak_flip});

  const auto dir = prepare_out(c.out);
  save_checkpoint(dir / "model.ckpt", result.params);
  write_text(dir / "loss.tsv", loss_table(result.history));
  m.add_output(dir / "model.ckpt");
  m.add_output(dir / "loss.tsv");
  std::cout << "labeled " << labeled.size() << " classes " << classes << '\n';
}

struct NetFmFlags {
  FinetuneFlags base;
  std::string unlabeled;
  std::string dist;
  SslConfig ssl;
  AugmentConfig aug;
};

void cmd_netfm(const NetFmFlags& f, const Common& c, RunManifest& m) {
  check_augment(f.aug);
  try {
    f.ssl.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto init = starting_model(f.base.model, f.base.dims, f.base.trace_len, c.seed, m);
  m.add_input(f.base.in);
  auto labeled = monitored_only(io::load_dtrace(f.base.in, init.input_length()));
  labeled = select_per_class(labeled, f.base.n_labeled, c.seed);
  const auto classes = infer_classes(labeled, f.base.classes);
  m.add_input(f.unlabeled);
  UnlabeledCorpus pool(
      keep_augmentable(io::load_dtrace(f.unlabeled, init.input_length()), f.aug));
  std::optional<BurstSizeDistribution> dist;
  if (!f.dist.empty()) {
    m.add_input(f.dist);
    dist = load_bdist(f.dist);
  } else {
    dist = build_distribution(pool.traces());
  }
  const auto result = train_netfm(init, labeled, pool, classes, train_config(f.base.train, c),
                                  f.ssl, f.aug, *dist, f.aug.p_flip);

  std::string table = "step\tloss\tsupervised\tunlabeled\tretained\n";
  const auto& h = result.history;
  for (std::size_t s = 0; s < h.step_loss.size(); ++s) {
    table += std::to_string(s) + '\t' + fmt(h.step_loss[s]) + '\t' + fmt(h.supervised_loss[s]) +
             '\t' + fmt(h.unlabeled_loss[s]) + '\t' + std::to_string(h.retained[s]) + '\n';
  }
  const auto dir = prepare_out(c.out);
  save_checkpoint(dir / "model.ckpt", result.params);
  write_text(dir / "loss.tsv", table);
  m.add_output(dir / "model.ckpt");
  m.add_output(dir / "loss.tsv");
  std::cout << "labeled " << labeled.size() << " unlabeled " << pool.size() << '\n';
}

struct EvalFlags {
  std::string in;
  std::string model;
  std::vector<double> thresholds;
  std::string rule = "any";
};

void cmd_eval_cw(const EvalFlags& e, const Common& c, RunManifest& m) {
  m.add_input(e.model);
  m.add_input(e.in);
  const auto params = load_checkpoint(e.model);
  const auto traces = monitored_only(io::load_dtrace(e.in, params.input_length()));
  const auto acc = closed_world_accuracy(predict_batch(params, traces), labels_of(traces));
  const auto dir = prepare_out(c.out);
  write_text(dir / "accuracy.txt",
             "accuracy " + fmt(acc) + "\ntraces " + std::to_string(traces.size()) + '\n');
  m.add_output(dir / "accuracy.txt");
  std::cout << "accuracy " << fmt(acc) << '\n';
}

void cmd_eval_ow(const EvalFlags& e, const Common& c, RunManifest& m) {
  auto thresholds = e.thresholds;
  if (thresholds.empty()) {
    for (int i = 0; i <= 20; ++i) thresholds.push_back(i / 20.0);
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
      throw UsageError("--thresholds values must lie in [0, 1]");
    }
    if (i > 0 && thresholds[i] < thresholds[i - 1]) {
      throw UsageError("--thresholds must be ascending");
    }
  }
  m.add_input(e.model);
  m.add_input(e.in);
  const auto params = load_checkpoint(e.model);
  const auto traces = io::load_dtrace(e.in, params.input_length());
  const auto classes = params.num_classes();
  std::unique_ptr<bool[]> monitored(new bool[traces.size()]);
  std::vector<int> labels(traces.size(), -1);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& l = traces[i].label();
    monitored[i] = l && *l >= 0 && std::size_t(*l) < classes;
    if (monitored[i]) labels[i] = *l;
  }
  const Matrix preds = predict_batch(params, traces);
  OpenWorldInput in{&preds, std::span<const bool>(monitored.get(), traces.size()), labels, 0,
                    e.rule == "class" ? TruePositiveRule::kClassCorrect
                                      : TruePositiveRule::kAnyMonitored};
  const auto curve = pr_curve(in, thresholds);
  std::ostringstream out;
  write_pr_records(out, curve);
  const auto dir = prepare_out(c.out);
  write_text(dir / "pr.txt", out.str());
  m.add_output(dir / "pr.txt");
  std::cout << out.str();
}

struct GradFlags {
  std::size_t instances = 20;
  double tolerance = 1e-4;
};

void cmd_gradcheck(const GradFlags& g, const Common& c, RunManifest& m) {
  const auto results = run_gradcheck(c.seed, g.instances);
  std::string report;
  bool ok = true;
  for (const auto& r : results) {
    report += r.name + '\t' + std::to_string(r.instances) + '\t' + fmt(r.max_rel_error) + '\n';
    ok = ok && r.max_rel_error < g.tolerance;
  }
  std::cout << report;
  if (!c.out.empty()) {
    const auto dir = prepare_out(c.out);
    write_text(dir / "gradcheck.tsv", report);
    m.add_output(dir / "gradcheck.tsv");
  }
  if (!ok) throw CheckFailed("gradient check exceeded tolerance " + fmt(g.tolerance));
}

// ---------------------------------------------------------------------------

/// Appends `--key=value` for every config-file entry whose flag is not
/// already on the command line. `--config default` means no file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string file;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const auto key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) {
        file = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        file = args[i + 1];
      }
    }
  }
  if (file.empty() || file == "default") return args;
  std::ifstream in(file);
  if (!in) throw Error("cannot open config " + file);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(file + ": expected key=value", lineno);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(file + ": empty key", lineno);
    if (!given.count(key)) args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  CLI::App app{"Tor trace augmentation, contrastive pre-training and evaluation.", "netaug"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  Common common;
  GenFlags gen;
  SplitFlags split;
  AugmentFlags augment;
  StatsFlags stats;
  PretrainFlags pre;
  FinetuneFlags fine;
  NetFmFlags fm;
  EvalFlags eval;
  GradFlags grad;

  auto* s_gen = app.add_subcommand("gen", "Generate a synthetic .ttrace corpus");
  add_common(s_gen, common);
  s_gen->add_option("--classes", gen.classes, "Number of sites");
  s_gen->add_option("--visits", gen.visits, "Visits per site and condition");
  s_gen->add_option("--profiles", gen.profiles, "Conditions to render")
      ->delimiter(',')
      ->check(CLI::IsMember({"superior", "inferior"}));
  s_gen->add_option("--noise", gen.noise, "Lognormal sigma of burst sizes")
      ->check(CLI::NonNegativeNumber);

  auto* s_split = app.add_subcommand("ncm-split", "Split a .ttrace corpus by NCM");
  add_common(s_split, common);
  s_split->add_option("--in", split.in, ".ttrace input")->required()->check(CLI::ExistingFile);
  s_split->add_option("--threshold", split.threshold, "NCM threshold, bytes per second");
  s_split->add_option("--trace-len", split.trace_len)->check(CLI::PositiveNumber);

  auto* s_aug = app.add_subcommand("augment", "Write augmented views of a .dtrace file");
  add_common(s_aug, common);
  add_augment(s_aug, augment.aug);
  s_aug->add_option("--in", augment.in)->required()->check(CLI::ExistingFile);
  s_aug->add_option("--dist", augment.dist, ".bdist; built from the input when absent")
      ->check(CLI::ExistingFile);
  s_aug->add_option("--method", augment.method)->check(CLI::IsMember({"net", "flip"}));
  s_aug->add_option("--views", augment.views, "Views per trace");
  s_aug->add_option("--trace-len", augment.trace_len, "Normalize on load; 0 keeps lengths");

  auto* s_stats = app.add_subcommand("stats", "Burst-size histogram and incoming-cell stats");
  add_common(s_stats, common);
  s_stats->add_option("--in", stats.in)->required()->check(CLI::ExistingFile);

  auto* s_pre = app.add_subcommand("pretrain", "Contrastive pre-training on unlabeled traces");
  add_common(s_pre, common);
  add_train(s_pre, pre.train);
  add_dims(s_pre, pre.dims);
  add_augment(s_pre, pre.aug);
  s_pre->add_option("--in", pre.in)->required()->check(CLI::ExistingFile);
  s_pre->add_option("--dist", pre.dist)->check(CLI::ExistingFile);
  s_pre->add_option("--augment", pre.augment)->check(CLI::IsMember({"net", "flip"}));
  s_pre->add_option("--trace-len", pre.trace_len)->check(CLI::PositiveNumber);
  s_pre->add_option("--tau-s", pre.tau_s, "NT-Xent temperature")->check(CLI::PositiveNumber);

  auto add_supervised = [](CLI::App* sub, FinetuneFlags& f) {
    add_train(sub, f.train);
    add_dims(sub, f.dims);
    sub->add_option("--in", f.in, "Labeled .dtrace")->required()->check(CLI::ExistingFile);
    sub->add_option("--model", f.model, "Checkpoint; a fresh encoder when absent")
        ->check(CLI::ExistingFile);
    sub->add_option("--trace-len", f.trace_len, "Input length of a fresh encoder")
        ->check(CLI::PositiveNumber);
    sub->add_option("--n-labeled", f.n_labeled, "Labeled traces per class; 0 keeps all");
    sub->add_option("--classes", f.classes, "0 infers max label + 1");
  };

  auto* s_fine = app.add_subcommand("finetune", "Supervised training of encoder and classifier");
  add_common(s_fine, common);
  add_supervised(s_fine, fine);
  s_fine->add_option("--weak-flip", fine.weak_flip, "Flip labeled batches with this p");

  auto* s_fm = app.add_subcommand("netfm", "Pseudo-label training with NetAugment strong views");
  add_common(s_fm, common);
  add_supervised(s_fm, fm.base);
  add_augment(s_fm, fm.aug);
  s_fm->add_option("--unlabeled", fm.unlabeled)->required()->check(CLI::ExistingFile);
  s_fm->add_option("--dist", fm.dist)->check(CLI::ExistingFile);
  s_fm->add_option("--mu", fm.ssl.mu, "Unlabeled traces per labeled trace");
  s_fm->add_option("--lambda-u", fm.ssl.lambda_u, "Weight of the unlabeled loss");
  s_fm->add_option("--tau-f", fm.ssl.tau_f, "Pseudo-label confidence threshold");

  auto* s_cw = app.add_subcommand("eval-cw", "Closed-world accuracy");
  add_common(s_cw, common);
  s_cw->add_option("--model", eval.model)->required()->check(CLI::ExistingFile);
  s_cw->add_option("--in", eval.in)->required()->check(CLI::ExistingFile);

  auto* s_ow = app.add_subcommand("eval-ow", "Open-world precision/recall per threshold");
  add_common(s_ow, common);
  s_ow->add_option("--model", eval.model)->required()->check(CLI::ExistingFile);
  s_ow->add_option("--in", eval.in, "Labels -1 mark unmonitored traces")
      ->required()
      ->check(CLI::ExistingFile);
  s_ow->add_option("--thresholds", eval.thresholds, "Ascending, comma separated")
      ->delimiter(',');
  s_ow->add_option("--rule", eval.rule, "any: any monitored class; class: correct class")
      ->check(CLI::IsMember({"any", "class"}));

  auto* s_grad = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  add_common(s_grad, common, false);
  s_grad->add_option("--instances", grad.instances)->check(CLI::PositiveNumber);
  s_grad->add_option("--tolerance", grad.tolerance)->check(CLI::PositiveNumber);

  auto usage = [&](const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  };

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  auto* sub = app.get_subcommands().front();
  RunManifest manifest(sub->get_name(), std::vector<std::string>(args.begin() + 1, args.end()));
  manifest.set_seed(common.seed);
  manifest.set_config(snapshot(sub));
  try {
    const auto& name = sub->get_name();
    if (name == "gen") cmd_gen(gen, common, manifest);
    if (name == "ncm-split") cmd_ncm_split(split, common, manifest);
    if (name == "augment") cmd_augment(augment, common, manifest);
    if (name == "stats") cmd_stats(stats, common, manifest);
    if (name == "pretrain") cmd_pretrain(pre, common, manifest);
    if (name == "finetune") cmd_finetune(fine, common, manifest);
    if (name == "netfm") cmd_netfm(fm, common, manifest);
    if (name == "eval-cw") cmd_eval_cw(eval, common, manifest);
    if (name == "eval-ow") cmd_eval_ow(eval, common, manifest);
    if (name == "gradcheck") cmd_gradcheck(grad, common, manifest);
    if (!common.out.empty()) manifest.write(fs::path(common.out) / "manifest.json");
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace netaug::cli

// Copyright 2026 The ordrec Authors
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

#include "ordrec/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "ordrec/checkpoint.hpp"
#include "ordrec/data.hpp"
#include "ordrec/decouple.hpp"
#include "ordrec/error.hpp"
#include "ordrec/graph.hpp"

namespace ordrec {
namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ValidationError("config key '" + key + "': '" + value + "' is not a number");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ValidationError("config key '" + key + "': '" + value + "' is not a nonnegative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config key '" + key + "': '" + value + "' is not a boolean");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& fmt) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ",";
    out += fmt(values[k]);
  }
  return out;
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  bool model = false;  // contributes to config_hash
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    auto str = [](std::string RunConfig::*m) {
      return Field{[m](const RunConfig& c) { return c.*m; },
                   [m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
    };
    t["dataset"] = str(&RunConfig::dataset);
    t["input"] = str(&RunConfig::input);
    t["split_dir"] = str(&RunConfig::split_dir);
    t["outdir"] = str(&RunConfig::outdir);
    t["checkpoint"] = str(&RunConfig::checkpoint);
    t["format"] = {[](const RunConfig& c) { return c.format; },
                   [](RunConfig& c, const std::string& k, const std::string& v) {
                     if (v != "tsv" && v != "csv") throw ValidationError("config key '" + k + "': format is tsv or csv");
                     c.format = v;
                   }};
    t["header"] = {[](const RunConfig& c) { return from_bool(c.header); },
                   [](RunConfig& c, const std::string& k, const std::string& v) { c.header = to_bool(k, v); }};
    t["ratios"] = {[](const RunConfig& c) { return join(std::vector<double>(c.ratios.begin(), c.ratios.end()), format_double); },
                   [](RunConfig& c, const std::string& k, const std::string& v) {
                     const auto parts = split_list(v);
                     if (parts.size() != 3) throw ValidationError("config key 'ratios' needs three values");
                     for (std::size_t i = 0; i < 3; ++i) c.ratios[i] = to_double(k, parts[i]);
                   }};
    t["noise_ratio"] = {[](const RunConfig& c) { return format_double(c.noise_ratio); },
                        [](RunConfig& c, const std::string& k, const std::string& v) { c.noise_ratio = to_double(k, v); }};
    t["k"] = {[](const RunConfig& c) { return std::to_string(c.k); },
              [](RunConfig& c, const std::string& k, const std::string& v) { c.k = to_u64(k, v); }};
    t["phase"] = {[](const RunConfig& c) { return to_string(c.phase); },
                  [](RunConfig& c, const std::string&, const std::string& v) { c.phase = parse_phase(v); }};
    t["dump_matrices"] = {[](const RunConfig& c) { return from_bool(c.dump_matrices); },
                          [](RunConfig& c, const std::string& k, const std::string& v) { c.dump_matrices = to_bool(k, v); }};
    t["memory_budget_gib"] = {
        [](const RunConfig& c) { return format_double(c.memory_budget_gib); },
        [](RunConfig& c, const std::string& k, const std::string& v) { c.memory_budget_gib = to_double(k, v); }};
    t["axis"] = {[](const RunConfig& c) { return c.axis; },
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   if (v != "noise" && v != "beta" && v != "layers")
                     throw ValidationError("config key '" + k + "': axis is noise, beta or layers");
                   c.axis = v;
                 }};
    t["axis_values"] = {[](const RunConfig& c) { return join(c.axis_values, format_double); },
                        [](RunConfig& c, const std::string& k, const std::string& v) {
                          c.axis_values.clear();
                          for (const auto& p : split_list(v)) c.axis_values.push_back(to_double(k, p));
                        }};
    t["seeds"] = {[](const RunConfig& c) { return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }); },
                  [](RunConfig& c, const std::string& k, const std::string& v) {
                    c.seeds.clear();
                    for (const auto& p : split_list(v)) c.seeds.push_back(to_u64(k, p));
                    if (c.seeds.empty()) throw ValidationError("config key 'seeds' needs at least one seed");
                  }};

    // Model and optimizer settings.
    auto model_double = [](double TrainConfig::*m) {
      return Field{[m](const RunConfig& c) { return format_double(c.train.*m); },
                   [m](RunConfig& c, const std::string& k, const std::string& v) { c.train.*m = to_double(k, v); },
                   true};
    };
    auto model_size = [](std::size_t TrainConfig::*m) {
      return Field{[m](const RunConfig& c) { return std::to_string(c.train.*m); },
                   [m](RunConfig& c, const std::string& k, const std::string& v) { c.train.*m = to_u64(k, v); }, true};
    };
    auto model_int = [](int TrainConfig::*m) {
      return Field{[m](const RunConfig& c) { return std::to_string(c.train.*m); },
                   [m](RunConfig& c, const std::string& k, const std::string& v) {
                     c.train.*m = static_cast<int>(to_u64(k, v));
                   },
                   true};
    };
    auto model_bool = [](bool TrainConfig::*m) {
      return Field{[m](const RunConfig& c) { return from_bool(c.train.*m); },
                   [m](RunConfig& c, const std::string& k, const std::string& v) { c.train.*m = to_bool(k, v); }, true};
    };
    t["d"] = model_size(&TrainConfig::d);
    t["batch_size"] = model_size(&TrainConfig::batch_size);
    t["L"] = model_int(&TrainConfig::order_count);
    t["learning_rate"] = model_double(&TrainConfig::learning_rate);
    t["beta"] = model_double(&TrainConfig::beta);
    t["lambda"] = model_double(&TrainConfig::lambda);
    t["tau"] = model_double(&TrainConfig::tau);
    t["patience"] = model_int(&TrainConfig::patience);
    t["max_epochs"] = model_int(&TrainConfig::max_epochs);
    t["init_std"] = model_double(&TrainConfig::init_std);
    t["eval_k"] = model_size(&TrainConfig::eval_k);
    t["hard"] = model_bool(&TrainConfig::hard);
    t["binary_values"] = model_bool(&TrainConfig::binary_values);
    t["seed"] = {[](const RunConfig& c) { return std::to_string(c.train.seed); },
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.train.seed = to_u64(k, v); }, true};
    t["mode"] = {[](const RunConfig& c) { return to_string(c.train.mode); },
                 [](RunConfig& c, const std::string&, const std::string& v) { c.train.mode = parse_mode(v); }, true};
    t["hidden"] = {[](const RunConfig& c) { return to_string(c.train.hidden); },
                   [](RunConfig& c, const std::string&, const std::string& v) { c.train.hidden = parse_hidden_mode(v); },
                   true};
    t["reg_scope"] = {[](const RunConfig& c) { return to_string(c.train.reg_scope); },
                      [](RunConfig& c, const std::string&, const std::string& v) { c.train.reg_scope = parse_reg_scope(v); },
                      true};
    t["ld_scale"] = {[](const RunConfig& c) { return to_string(c.train.ld_scale); },
                     [](RunConfig& c, const std::string&, const std::string& v) { c.train.ld_scale = parse_ld_scale(v); },
                     true};
    t["cap"] = {[](const RunConfig& c) { return c.train.cap ? std::to_string(*c.train.cap) : std::string("none"); },
                [](RunConfig& c, const std::string& k, const std::string& v) {
                  if (v == "none") {
                    c.train.cap.reset();
                  } else {
                    const auto cap = to_u64(k, v);
                    if (cap == 0) throw ValidationError("config key 'cap' must be positive or none");
                    c.train.cap = cap;
                  }
                },
                true};
    return t;
  }();
  return table;
}

void prepare_outdir(const fs::path& dir, bool force) {
  if (fs::exists(dir) && !fs::is_empty(dir) && !force)
    throw ValidationError("output directory " + dir.string() + " already exists; pass --force to overwrite");
  fs::create_directories(dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

RunConfig child(const RunConfig& cfg, const fs::path& outdir) {
  RunConfig c = cfg;
  c.outdir = outdir.string();
  c.force = true;
  return c;
}

// train -> evaluate on an existing split directory.
Metrics train_and_test(const RunConfig& cfg, std::ostream* progress) {
  cmd_train(cfg, progress);
  RunConfig eval_cfg = cfg;
  eval_cfg.checkpoint = (fs::path(cfg.outdir) / "checkpoint.json").string();
  eval_cfg.phase = Phase::test;
  const EvalReport r = cmd_evaluate(eval_cfg);
  return {r.recall, r.ndcg, r.precision};
}

void note(std::ostream* progress, const std::string& line) {
  if (progress) *progress << line << std::endl;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dataset", "input", "format", "header", "ratios", "noise_ratio", "seed", "split_dir", "outdir",
      "checkpoint", "k", "phase", "d", "batch_size", "L", "learning_rate", "beta", "lambda", "reg_scope",
      "ld_scale", "tau", "patience", "max_epochs", "mode", "hidden", "hard", "cap", "binary_values",
      "init_std", "eval_k", "memory_budget_gib", "dump_matrices", "axis", "axis_values", "seeds"};
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ValidationError("unknown config key '" + key + "'");
  it->second.set(cfg, key, trim(value));
}

std::string get_config_value(const RunConfig& cfg, const std::string& key) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ValidationError("unknown config key '" + key + "'");
  return it->second.get(cfg);
}

std::string format_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& key : config_keys()) out += key + " = " + get_config_value(cfg, key) + "\n";
  return out;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line is not 'key = value'", line_no);
    set_config_value(base, trim(std::string_view(line).substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const fs::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& key : config_keys()) {
    const auto& f = fields().at(key);
    if (!f.model) continue;
    for (char c : key + "=" + f.get(cfg) + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelContext build_context(const SplitDataset& split, const TrainConfig& train, double memory_budget_gib) {
  InteractionGraph g = build_bipartite(split.train);
  DecoupleOptions opts;
  opts.cap = train.cap;
  opts.binary_values = train.binary_values;
  opts.memory_budget_bytes = static_cast<std::size_t>(memory_budget_gib * static_cast<double>(std::size_t{1} << 30));
  switch (train.mode) {
    case Mode::mf:
      return ModelContext(std::move(g), DecoupledStack{}, 0);
    case Mode::no_decouple: {
      DecoupledStack stack = decouple(g, 1, opts);
      return ModelContext(std::move(g), std::move(stack), train.order_count);
    }
    case Mode::full:
    case Mode::no_denoise:
      break;
  }
  const auto cache = cache_dir_from_env();
  DecoupledStack stack = cache ? decouple_cached(g, train.order_count, opts, *cache)
                               : decouple(g, train.order_count, opts);
  return ModelContext(std::move(g), std::move(stack));
}

void cmd_prepare(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ValidationError("prepare needs --input");
  LoadOptions lo;
  lo.format = cfg.format == "csv" ? InteractionFormat::csv : InteractionFormat::tsv;
  lo.header = cfg.header;
  const InteractionSet data = load_interactions(cfg.input, lo);
  SplitDataset s = split(data, cfg.ratios, cfg.train.seed);
  if (cfg.noise_ratio > 0.0) s = inject_noise(s, cfg.noise_ratio, cfg.train.seed);
  const fs::path out(cfg.outdir);
  prepare_outdir(out, cfg.force);
  write_split(s, out);
  write_text(out / "config.txt", format_config(cfg));
}

FitResult cmd_train(const RunConfig& cfg, std::ostream* progress) {
  if (cfg.split_dir.empty()) throw ValidationError("train needs --split_dir");
  cfg.train.validate();
  const SplitDataset s = read_split(cfg.split_dir);
  const fs::path out(cfg.outdir);
  prepare_outdir(out, cfg.force);
  write_text(out / "config.txt", format_config(cfg));
  const ModelContext ctx = build_context(s, cfg.train, cfg.memory_budget_gib);
  if (cfg.dump_matrices) {
    write_matrix_dump(ctx.graph().adjacency, out / "adjacency.txt");
    for (int l = 1; l <= ctx.order_count(); ++l)
      write_matrix_dump(ctx.order(l).adjacency, out / ("order" + std::to_string(l) + ".txt"));
  }

  std::ofstream log(out / "train_log.csv", std::ios::binary | std::ios::trunc);
  if (!log) throw IoError("cannot write " + (out / "train_log.csv").string());
  log << log_csv_header();
  FitHooks hooks;
  hooks.on_epoch = [&](const EpochLog& row) {
    const std::string line = log_csv_row(row);
    log << line << std::flush;
    if (progress) *progress << line << std::flush;
  };
  FitResult result = fit(s, ctx, cfg.train, hooks);
  result.best.header.config_hash = config_hash(cfg);
  save_checkpoint(result.best, out / "checkpoint.json");
  return result;
}

EvalReport cmd_evaluate(const RunConfig& cfg) {
  if (cfg.checkpoint.empty()) throw ValidationError("evaluate needs --checkpoint");
  if (cfg.split_dir.empty()) throw ValidationError("evaluate needs --split_dir");
  const Checkpoint ckpt = load_checkpoint(cfg.checkpoint);
  const SplitDataset s = read_split(cfg.split_dir);
  const auto& h = ckpt.header;
  if (h.n_users != s.train.n_users || h.n_items != s.train.n_items)
    throw ValidationError("checkpoint is " + std::to_string(h.n_users) + " users x " + std::to_string(h.n_items) +
                          " items but the split is " + std::to_string(s.train.n_users) + " x " +
                          std::to_string(s.train.n_items));
  TrainConfig tc;
  tc.mode = h.mode;
  tc.order_count = h.order_count;
  tc.cap = h.cap;
  tc.binary_values = h.binary_values;
  const ModelContext ctx = build_context(s, tc, cfg.memory_budget_gib);
  const EvalReport report = evaluate(ckpt, ctx, s, cfg.k, cfg.phase);
  const fs::path out(cfg.outdir);
  fs::create_directories(out);
  write_text(out / "report.json", report_json(report, cfg.dataset, to_string(h.mode), h.seed, cfg.phase));
  write_text(out / "report.csv", report_csv(report, cfg.dataset, to_string(h.mode), h.seed));
  return report;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, std::ostream* progress) {
  if (cfg.input.empty()) throw ValidationError("sweep needs --input");
  if (cfg.axis != "noise" && cfg.axis != "beta" && cfg.axis != "layers")
    throw ValidationError("unknown sweep axis '" + cfg.axis + "' (expected noise, beta or layers)");
  std::vector<double> values = cfg.axis_values;
  if (values.empty()) {
    if (cfg.axis == "noise") values = {0.0, 0.05, 0.10, 0.15, 0.20};
    if (cfg.axis == "beta") values = {0.3, 0.4, 0.5};
    if (cfg.axis == "layers") values = {2, 3};
  }
  const fs::path root(cfg.outdir);
  prepare_outdir(root, cfg.force);
  write_text(root / "config.txt", format_config(cfg));

  std::vector<SweepRow> rows;
  for (double value : values) {
    for (std::uint64_t seed : cfg.seeds) {
      SweepRow row;
      row.key = format_double(value);
      row.seed = seed;
      const fs::path dir = root / (cfg.axis + "_" + row.key) / ("seed" + std::to_string(seed));
      try {
        RunConfig run = child(cfg, dir / "split");
        run.train.seed = seed;
        if (cfg.axis == "noise") run.noise_ratio = value;
        if (cfg.axis == "beta") run.train.beta = value;
        if (cfg.axis == "layers") run.train.order_count = static_cast<int>(value);
        cmd_prepare(run);
        run.split_dir = run.outdir;
        run.outdir = (dir / "run").string();
        row.metrics = train_and_test(run, nullptr);
      } catch (const std::exception& e) {
        row.status = "error: " + csv_safe(e.what());
      }
      note(progress, cfg.axis + "=" + row.key + " seed=" + std::to_string(seed) + " " + row.status);
      rows.push_back(row);
      write_text(root / "sweep.csv", sweep_csv(rows, "axis_value"));
    }
  }
  return rows;
}

std::vector<SweepRow> cmd_ablate(const RunConfig& cfg, std::ostream* progress) {
  const fs::path root(cfg.outdir);
  prepare_outdir(root, cfg.force);
  write_text(root / "config.txt", format_config(cfg));
  std::string split_dir = cfg.split_dir;
  if (split_dir.empty()) {
    RunConfig prep = child(cfg, root / "split");
    cmd_prepare(prep);
    split_dir = prep.outdir;
  }

  std::vector<SweepRow> rows;
  for (Mode mode : {Mode::full, Mode::no_denoise, Mode::no_decouple}) {
    for (std::uint64_t seed : cfg.seeds) {
      SweepRow row;
      row.key = to_string(mode);
      row.seed = seed;
      try {
        RunConfig run = child(cfg, root / row.key / ("seed" + std::to_string(seed)));
        run.split_dir = split_dir;
        run.train.mode = mode;
        run.train.seed = seed;
        row.metrics = train_and_test(run, nullptr);
      } catch (const std::exception& e) {
        row.status = "error: " + csv_safe(e.what());
      }
      note(progress, "mode=" + row.key + " seed=" + std::to_string(seed) + " " + row.status);
      rows.push_back(row);
      write_text(root / "ablate.csv", sweep_csv(rows, "mode"));
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& key_column) {
  std::string out = key_column + ",seed,recall,ndcg,precision,status\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,", r.metrics.recall, r.metrics.ndcg, r.metrics.precision);
    out += r.key + "," + std::to_string(r.seed) + buf + r.status + "\n";
  }
  return out;
}

}  // namespace ordrec

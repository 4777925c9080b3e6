#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kemeny/error.hpp"
#include "kemeny/exact.hpp"
#include "kemeny/generators.hpp"
#include "kemeny/heuristics.hpp"
#include "kemeny/io.hpp"
#include "kemeny/model.hpp"
#include "kemeny/ranking.hpp"
#include "kemeny/rng.hpp"
#include "kemeny/train.hpp"

using namespace kemeny;

namespace {

// Exit codes, also listed in --help footers: 0 success, 1 partial or
// runtime failure, 2 usage, 3 capacity, 4 config mismatch, 5 I/O,
// 6 ingestion.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitConfigMismatch = 4;
constexpr int kExitIo = 5;
constexpr int kExitIngest = 6;

const std::vector<std::string> kMethodNames = {
    "exact",      "kiwisort", "mc4",        "max-agreement",
    "min-regret", "decor",    "transformer"};

bool known_method(const std::string& name) {
  return std::find(kMethodNames.begin(), kMethodNames.end(), name) !=
         kMethodNames.end();
}

// JSON's shortest round-trip formatting, reused for CSV cells so the two
// report formats carry byte-identical numbers.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void write_text_file(const std::string& path, const std::string& text,
                     const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(std::string("cannot open ") + what + " for writing: " + path);
  out << text;
  if (!out.good()) throw IoError(std::string("short write on ") + what + ": " + path);
}

void progress(const nlohmann::json& record) { std::cerr << record.dump() << '\n'; }

struct MethodRun {
  Ranking ranking;
  std::int64_t cost_numerator = 0;
  double cost = 0.0;
  double seconds = 0.0;
};

MethodRun run_method(const std::string& method, const Profile& profile,
                     std::uint64_t seed, const Parameters<float>* checkpoint) {
  MethodRun out;
  if (method == "exact") {
    ExactResult r = solve_subset_dp(profile);
    out.ranking = std::move(r.ranking);
    out.cost_numerator = r.cost_numerator;
    out.cost = r.cost;
    out.seconds = r.elapsed.count();
    return out;
  }
  if (method == "transformer") {
    if (!checkpoint) {
      throw InvalidInputError("--checkpoint is required for method 'transformer'");
    }
    if (profile.m() > checkpoint->config.max_m) {
      throw ConfigMismatchError(
          "instance has m=" + std::to_string(profile.m()) +
          " voters but the checkpoint supports max_m=" +
          std::to_string(checkpoint->config.max_m));
    }
    Tape<float> tape;
    OnTapeParams<float> refs = register_params(tape, *checkpoint);
    const auto t0 = std::chrono::steady_clock::now();
    Trajectory t = rollout(tape, refs, *checkpoint, profile,
                           RolloutMode::kGreedy, 0);
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.cost_numerator = kemeny_numerator(t.ranking, profile);
    out.cost = static_cast<double>(out.cost_numerator) / profile.m();
    out.ranking = std::move(t.ranking);
    return out;
  }
  HeuristicResult r;
  if (method == "kiwisort") {
    r = kiwisort(profile, seed);
  } else if (method == "mc4") {
    r = markov_chain(profile);
  } else if (method == "max-agreement") {
    r = greedy_max_agreement(profile);
  } else if (method == "min-regret") {
    r = greedy_min_regret(profile);
  } else if (method == "decor") {
    DecorConfig cfg;
    cfg.seed = seed;
    r = decor(profile, cfg);
  } else {
    throw InvalidInputError("unknown method '" + method + "'");
  }
  out.ranking = std::move(r.ranking);
  out.cost_numerator = r.cost_numerator;
  out.cost = r.cost;
  out.seconds = r.elapsed.count();
  return out;
}

int worker_count() {
  const char* env = std::getenv("KEMENY_WORKERS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 256) {
    throw InvalidInputError("KEMENY_WORKERS must be an integer in [1, 256]");
  }
  return static_cast<int>(v);
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string type = "random";
  int n = 10;
  int m = 8;
  int count = 1;
  std::uint64_t seed = 1234;
  std::string out = ".";
  int repeat_count = -1;  // -1: leave unset
  double scale_m = 1.0;
  int swap_passes = 1;
};

int cmd_gen(const GenArgs& args) {
  GeneratorSpec spec;
  spec.kind = gen_kind_from_string(args.type);
  spec.n = args.n;
  spec.m = args.m;
  spec.scale_m = args.scale_m;
  spec.swap_passes = args.swap_passes;
  if (args.repeat_count >= 0) spec.repeat_count = args.repeat_count;
  if (args.count < 1) throw InvalidInputError("--count must be positive");

  std::filesystem::create_directories(args.out);
  for (int i = 0; i < args.count; ++i) {
    spec.seed = derive_seed(args.seed, i);
    const Profile profile = generate(spec);
    char index[16];
    std::snprintf(index, sizeof index, "%04d", i);
    const std::string name = args.type + "_n" + std::to_string(args.n) + "_m" +
                             std::to_string(args.m) + "_seed" +
                             std::to_string(args.seed) + "_" + index + ".json";
    const std::string path = (std::filesystem::path(args.out) / name).string();
    write_instance_file(profile, generator_spec_to_json(spec).dump(), path);
    progress({{"event", "gen"}, {"file", name}, {"index", i}});
  }
  progress({{"event", "gen-done"}, {"count", args.count}, {"dir", args.out}});
  return kExitOk;
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
  std::string method;
  std::vector<std::string> inputs;
  std::string out;
  std::string checkpoint;
  std::uint64_t seed = 1234;
};

int cmd_solve(const SolveArgs& args) {
  if (!known_method(args.method)) {
    throw InvalidInputError("unknown method '" + args.method + "'");
  }
  std::optional<Parameters<float>> ckpt;
  if (args.method == "transformer") {
    if (args.checkpoint.empty()) {
      throw InvalidInputError("--checkpoint is required for --method transformer");
    }
    ckpt = load_checkpoint(args.checkpoint).params;
  }

  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    const InstanceFile file = read_instance_file(args.inputs[i]);
    const MethodRun run =
        run_method(args.method, file.profile, derive_seed(args.seed, i),
                   ckpt ? &*ckpt : nullptr);
    nlohmann::json row;
    row["file"] = args.inputs[i];
    row["instance"] = std::filesystem::path(args.inputs[i]).stem().string();
    row["n"] = file.profile.n;
    row["m"] = file.profile.m();
    row["method"] = args.method;
    row["ranking"] = run.ranking.order;
    row["cost"] = run.cost;
    row["cost_numerator"] = run.cost_numerator;
    row["seconds"] = run.seconds;
    rows.push_back(row);
    progress({{"event", "solve"},
              {"instance", row["instance"]},
              {"method", args.method},
              {"cost", run.cost}});
  }

  const std::string text = rows.dump(1) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(args.out, text, "solve report");
  }
  return kExitOk;
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string resume;
  std::string out;
  std::string report;
  std::string save_state;
};

nlohmann::json report_to_json(const TrainReport& report) {
  nlohmann::json j;
  j["initial_greedy_mean"] = report.initial_greedy_mean;
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochStats& es : report.epochs) {
    nlohmann::json e;
    e["epoch"] = es.epoch;
    e["mean_sampled_cost"] = es.mean_sampled_cost;
    e["mean_greedy_cost"] = es.mean_greedy_cost;
    e["mean_baseline_cost"] = es.mean_baseline_cost;
    if (es.degenerate) {
      e["t"] = nullptr;
      e["p"] = nullptr;
    } else {
      e["t"] = es.t_statistic;
      e["p"] = es.p_value;
    }
    e["degenerate"] = es.degenerate;
    e["replaced"] = es.baseline_replaced;
    e["wall_seconds"] = es.wall_seconds;
    epochs.push_back(e);
  }
  j["epochs"] = std::move(epochs);
  return j;
}

int cmd_train(const TrainArgs& args) {
  TrainState state = args.resume.empty()
                         ? init_train_state(read_train_config(args.config))
                         : load_train_state(args.resume);
  run_epochs(state, state.config.epochs, &std::cerr);

  CheckpointMeta meta;
  meta.epochs_seen = state.epochs_done;
  meta.seed = state.config.seed;
  save_checkpoint(state.theta, meta, args.out);
  progress({{"event", "checkpoint"}, {"file", args.out}});

  if (!args.save_state.empty()) {
    save_train_state(state, args.save_state);
    progress({{"event", "state"}, {"file", args.save_state}});
  }
  if (!args.report.empty()) {
    write_text_file(args.report, report_to_json(state.report).dump(1) + "\n",
                    "train report");
    progress({{"event", "report"}, {"file", args.report}});
  }
  return kExitOk;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> methods;
  std::string dataset;
  std::string oracle = "exact";
  std::string out;
  std::string format = "csv";
  std::string checkpoint;
  std::uint64_t seed = 1234;
  bool omit_times = false;
};

struct BenchRow {
  std::string instance;
  int n = 0;
  int m = 0;
  std::string method;
  bool ok = false;
  double cost = 0.0;
  std::optional<double> gap;
  std::optional<bool> oracle_exact;
  double seconds = 0.0;
  std::string error;
};

struct OracleInfo {
  double cost = 0.0;
  bool exact = false;
};

std::string derived_path(const std::string& out, const char* suffix) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  return (p.parent_path() / (stem + suffix + ext)).string();
}

std::string bench_results_csv(const std::vector<BenchRow>& rows, bool omit_times) {
  std::ostringstream out;
  out << "instance,n,m,method,ok,cost,gap,oracle_exact";
  if (!omit_times) out << ",seconds";
  out << ",error\n";
  for (const BenchRow& r : rows) {
    out << csv_quote(r.instance) << ',' << r.n << ',' << r.m << ','
        << r.method << ',' << (r.ok ? "true" : "false") << ','
        << (r.ok ? num(r.cost) : "") << ','
        << (r.ok && r.gap ? num(*r.gap) : "") << ','
        << (r.oracle_exact ? (*r.oracle_exact ? "true" : "false") : "");
    if (!omit_times) out << ',' << (r.ok ? num(r.seconds) : "");
    out << ',' << csv_quote(r.error) << '\n';
  }
  return out.str();
}

struct MethodSummary {
  std::string method;
  int instances = 0;
  int failures = 0;
  std::optional<double> mean_cost;
  std::optional<double> mean_gap;
  std::optional<double> relative_gap;
  double total_seconds = 0.0;
};

struct TimingCell {
  std::string method;
  int n = 0;
  int instances = 0;
  double mean_seconds = 0.0;
};

std::vector<MethodSummary> summarize(const std::vector<std::string>& methods,
                                     const std::vector<BenchRow>& rows,
                                     const std::vector<OracleInfo>* oracle,
                                     const std::vector<std::string>& ids) {
  std::vector<MethodSummary> out;
  for (const std::string& method : methods) {
    MethodSummary s;
    s.method = method;
    double cost_sum = 0.0;
    double gap_sum = 0.0;
    double oracle_sum = 0.0;
    int ok_count = 0;
    for (const BenchRow& r : rows) {
      if (r.method != method) continue;
      ++s.instances;
      if (!r.ok) {
        ++s.failures;
        continue;
      }
      ++ok_count;
      cost_sum += r.cost;
      s.total_seconds += r.seconds;
      if (oracle && r.gap) {
        gap_sum += *r.gap;
        const auto it = std::find(ids.begin(), ids.end(), r.instance);
        oracle_sum += (*oracle)[it - ids.begin()].cost;
      }
    }
    if (ok_count > 0) {
      s.mean_cost = cost_sum / ok_count;
      if (oracle) {
        s.mean_gap = gap_sum / ok_count;
        if (oracle_sum > 0.0) {
          s.relative_gap = gap_sum / oracle_sum;
        }
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<TimingCell> timing_by_n(const std::vector<std::string>& methods,
                                    const std::vector<BenchRow>& rows) {
  std::vector<TimingCell> out;
  for (const std::string& method : methods) {
    std::vector<int> sizes;
    for (const BenchRow& r : rows) {
      if (r.method == method && r.ok &&
          std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) {
        sizes.push_back(r.n);
      }
    }
    std::sort(sizes.begin(), sizes.end());
    for (int n : sizes) {
      TimingCell cell;
      cell.method = method;
      cell.n = n;
      double total = 0.0;
      for (const BenchRow& r : rows) {
        if (r.method == method && r.ok && r.n == n) {
          ++cell.instances;
          total += r.seconds;
        }
      }
      cell.mean_seconds = total / cell.instances;
      out.push_back(cell);
    }
  }
  return out;
}

int cmd_bench(const BenchArgs& args) {
  for (const std::string& m : args.methods) {
    if (!known_method(m)) throw InvalidInputError("unknown method '" + m + "'");
  }
  if (args.methods.empty()) throw InvalidInputError("no methods given");
  if (args.oracle != "exact" && args.oracle != "none") {
    throw InvalidInputError("--oracle must be 'exact' or 'none'");
  }
  if (args.format != "csv" && args.format != "json") {
    throw InvalidInputError("--format must be 'csv' or 'json'");
  }
  const int workers = worker_count();

  std::vector<std::string> files;
  if (!std::filesystem::is_directory(args.dataset)) {
    throw IoError("dataset directory not found: " + args.dataset);
  }
  for (const auto& entry : std::filesystem::directory_iterator(args.dataset)) {
    if (entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw InvalidInputError("no instance files (*.json) in " + args.dataset);
  }

  std::vector<Profile> instances;
  std::vector<std::string> ids;
  for (const std::string& f : files) {
    instances.push_back(read_instance_file(f).profile);
    ids.push_back(std::filesystem::path(f).stem().string());
  }

  std::optional<Parameters<float>> ckpt;
  const bool wants_transformer =
      std::find(args.methods.begin(), args.methods.end(), "transformer") !=
      args.methods.end();
  if (wants_transformer) {
    if (args.checkpoint.empty()) {
      throw InvalidInputError("--checkpoint is required when benchmarking 'transformer'");
    }
    ckpt = load_checkpoint(args.checkpoint).params;
  }

  const bool use_oracle = args.oracle == "exact";
  std::vector<OracleInfo> oracle(instances.size());
  if (use_oracle) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].n <= kSubsetDpMaxItems) {
        oracle[i].cost = solve_subset_dp(instances[i]).cost;
        oracle[i].exact = true;
      } else {
        const PrecedenceMatrix w = precedence_matrix(instances[i]);
        oracle[i].cost =
            static_cast<double>(lower_bound(w)) / instances[i].m();
        oracle[i].exact = false;
      }
    }
  }

  struct Task {
    std::size_t method_index;
    std::size_t instance_index;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < args.methods.size(); ++mi) {
    for (std::size_t ii = 0; ii < instances.size(); ++ii) {
      tasks.push_back({mi, ii});
    }
  }

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex log_mutex;
  const auto work = [&] {
    while (true) {
      const std::size_t t = cursor.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      const Profile& profile = instances[task.instance_index];
      BenchRow& row = rows[t];
      row.instance = ids[task.instance_index];
      row.n = profile.n;
      row.m = profile.m();
      row.method = args.methods[task.method_index];
      try {
        const MethodRun run = run_method(
            row.method, profile,
            derive_seed(args.seed, task.method_index, task.instance_index),
            ckpt ? &*ckpt : nullptr);
        row.ok = true;
        row.cost = run.cost;
        row.seconds = run.seconds;
        if (use_oracle) {
          row.gap = run.cost - oracle[task.instance_index].cost;
          row.oracle_exact = oracle[task.instance_index].exact;
        }
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
      std::lock_guard<std::mutex> guard(log_mutex);
      progress({{"event", "bench"},
                {"instance", row.instance},
                {"method", row.method},
                {"ok", row.ok}});
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  // Deterministic order regardless of worker scheduling.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BenchRow& a, const BenchRow& b) {
                     if (a.instance != b.instance) return a.instance < b.instance;
                     return a.method < b.method;
                   });

  const std::vector<MethodSummary> summary =
      summarize(args.methods, rows, use_oracle ? &oracle : nullptr, ids);
  const std::vector<TimingCell> timing = timing_by_n(args.methods, rows);

  if (args.format == "json") {
    nlohmann::json j;
    nlohmann::json results = nlohmann::json::array();
    for (const BenchRow& r : rows) {
      nlohmann::json row;
      row["instance"] = r.instance;
      row["n"] = r.n;
      row["m"] = r.m;
      row["method"] = r.method;
      row["ok"] = r.ok;
      row["cost"] = r.ok ? nlohmann::json(r.cost) : nlohmann::json(nullptr);
      row["gap"] = r.ok && r.gap ? nlohmann::json(*r.gap) : nlohmann::json(nullptr);
      row["oracle_exact"] =
          r.oracle_exact ? nlohmann::json(*r.oracle_exact) : nlohmann::json(nullptr);
      if (!args.omit_times) {
        row["seconds"] = r.ok ? nlohmann::json(r.seconds) : nlohmann::json(nullptr);
      }
      row["error"] = r.error;
      results.push_back(row);
    }
    j["results"] = std::move(results);
    nlohmann::json sums = nlohmann::json::array();
    for (const MethodSummary& s : summary) {
      nlohmann::json row;
      row["method"] = s.method;
      row["instances"] = s.instances;
      row["failures"] = s.failures;
      row["mean_cost"] = s.mean_cost ? nlohmann::json(*s.mean_cost) : nlohmann::json(nullptr);
      row["mean_gap"] = s.mean_gap ? nlohmann::json(*s.mean_gap) : nlohmann::json(nullptr);
      row["relative_gap"] =
          s.relative_gap ? nlohmann::json(*s.relative_gap) : nlohmann::json(nullptr);
      if (!args.omit_times) row["total_seconds"] = s.total_seconds;
      sums.push_back(row);
    }
    j["method_summary"] = std::move(sums);
    if (!args.omit_times) {
      nlohmann::json cells = nlohmann::json::array();
      for (const TimingCell& c : timing) {
        nlohmann::json row;
        row["method"] = c.method;
        row["n"] = c.n;
        row["instances"] = c.instances;
        row["mean_seconds"] = c.mean_seconds;
        cells.push_back(row);
      }
      j["timing_by_n"] = std::move(cells);
    }
    write_text_file(args.out, j.dump(1) + "\n", "bench report");
  } else {
    write_text_file(args.out, bench_results_csv(rows, args.omit_times),
                    "bench report");
    std::ostringstream sums;
    sums << "method,instances,failures,mean_cost,mean_gap,relative_gap";
    if (!args.omit_times) sums << ",total_seconds";
    sums << '\n';
    for (const MethodSummary& s : summary) {
      sums << s.method << ',' << s.instances << ',' << s.failures << ','
           << (s.mean_cost ? num(*s.mean_cost) : "") << ','
           << (s.mean_gap ? num(*s.mean_gap) : "") << ','
           << (s.relative_gap ? num(*s.relative_gap) : "");
      if (!args.omit_times) sums << ',' << num(s.total_seconds);
      sums << '\n';
    }
    write_text_file(derived_path(args.out, "_summary"), sums.str(),
                    "bench summary");
    if (!args.omit_times) {
      std::ostringstream cells;
      cells << "method,n,instances,mean_seconds\n";
      for (const TimingCell& c : timing) {
        cells << c.method << ',' << c.n << ',' << c.instances << ','
              << num(c.mean_seconds) << '\n';
      }
      write_text_file(derived_path(args.out, "_timing"), cells.str(),
                      "bench timing");
    }
  }

  const bool any_failed =
      std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return !r.ok; });
  progress({{"event", "bench-done"},
            {"tasks", tasks.size()},
            {"failed", any_failed}});
  return any_failed ? kExitFailure : kExitOk;
}

// --- ingest ------------------------------------------------------------------

struct IngestArgs {
  std::string format;
  std::string in;
  std::string directions;
  std::string out;
};

int cmd_ingest(const IngestArgs& args) {
  Profile profile;
  if (args.format == "features-csv") {
    const MetricTable table = read_metric_table_csv(args.in);
    const std::vector<SortDirection> dirs = parse_directions(args.directions);
    if (dirs.empty()) {
      throw InvalidInputError("--directions is required for features-csv");
    }
    profile = rankings_from_metric_table(table, dirs);
  } else if (args.format == "preflib-soc") {
    profile = read_preflib_soc(args.in);
  } else {
    throw InvalidInputError("--format must be 'features-csv' or 'preflib-soc'");
  }
  write_instance_file(profile, args.format + ":" + args.in, args.out);
  progress({{"event", "ingest"},
            {"file", args.out},
            {"n", profile.n},
            {"m", profile.m()}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kemeny consensus-ranking toolkit"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 failure, 2 usage, 3 capacity, 4 config mismatch,\n"
      "5 I/O, 6 ingestion. KEMENY_WORKERS sets the bench worker count.");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate instance files");
  gen_cmd->add_option("--type", gen.type, "random | repeat | jiggling")
      ->default_val("random");
  gen_cmd->add_option("--n", gen.n, "items per instance")->required();
  gen_cmd->add_option("--m", gen.m, "voters per instance")->required();
  gen_cmd->add_option("--count", gen.count, "instances to write")->default_val(1);
  gen_cmd->add_option("--seed", gen.seed, "master seed")->default_val(1234);
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--repeat-count", gen.repeat_count,
                      "repeat kind: rankings copying the reference");
  gen_cmd->add_option("--scale-m", gen.scale_m, "jiggling scaling constant M");
  gen_cmd->add_option("--swap-passes", gen.swap_passes, "jiggling passes");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve instance files");
  solve_cmd->add_option("--method", solve.method,
                        "exact | kiwisort | mc4 | max-agreement | min-regret | "
                        "decor | transformer")
      ->required();
  solve_cmd->add_option("--in", solve.inputs, "instance file(s)")
      ->required()
      ->expected(-1);
  solve_cmd->add_option("--out", solve.out, "report path (default: stdout)");
  solve_cmd->add_option("--checkpoint", solve.checkpoint,
                        "model checkpoint (transformer only)");
  solve_cmd->add_option("--seed", solve.seed, "seed for randomized methods")
      ->default_val(1234);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the model");
  CLI::Option* cfg_opt =
      train_cmd->add_option("--config", train.config, "train config JSON");
  CLI::Option* resume_opt = train_cmd->add_option(
      "--resume", train.resume, "resume from a saved train state");
  cfg_opt->excludes(resume_opt);
  train_cmd->add_option("--out", train.out, "checkpoint output path")->required();
  train_cmd->add_option("--report", train.report, "report JSON output path");
  train_cmd->add_option("--save-state", train.save_state,
                        "write the resumable train state here");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Benchmark methods");
  bench_cmd->add_option("--methods", bench.methods, "comma-separated methods")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--dataset", bench.dataset, "instance directory")
      ->required();
  bench_cmd->add_option("--oracle", bench.oracle, "exact | none")
      ->default_val("exact");
  bench_cmd->add_option("--out", bench.out, "report output path")->required();
  bench_cmd->add_option("--format", bench.format, "csv | json")
      ->default_val("csv");
  bench_cmd->add_option("--checkpoint", bench.checkpoint,
                        "model checkpoint (transformer only)");
  bench_cmd->add_option("--seed", bench.seed, "seed for randomized methods")
      ->default_val(1234);
  bench_cmd->add_flag("--omit-times", bench.omit_times,
                      "drop timing fields for byte-stable reports");

  IngestArgs ingest;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "Convert external data");
  ingest_cmd->add_option("--format", ingest.format, "features-csv | preflib-soc")
      ->required();
  ingest_cmd->add_option("--in", ingest.in, "input path")->required();
  ingest_cmd->add_option("--directions", ingest.directions,
                         "asc/desc per metric column (features-csv)");
  ingest_cmd->add_option("--out", ingest.out, "instance file output path")
      ->required();

  try {
    app.parse(argc, argv);
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(solve);
    if (*train_cmd) {
      if (train.config.empty() && train.resume.empty()) {
        throw InvalidInputError("pass --config or --resume");
      }
      return cmd_train(train);
    }
    if (*bench_cmd) return cmd_bench(bench);
    if (*ingest_cmd) return cmd_ingest(ingest);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ConfigMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigMismatch;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

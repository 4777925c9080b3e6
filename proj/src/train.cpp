#include "kemeny/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <utility>

#include "json.hpp"
#include "kemeny/error.hpp"
#include "kemeny/io.hpp"
#include "kemeny/stats.hpp"

namespace kemeny {

namespace {

constexpr std::uint64_t kStreamValidation = 0xA11;
constexpr std::uint64_t kStreamBatch = 0xB47;
constexpr std::uint64_t kStreamRollout = 0xC0DE;

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

std::vector<Profile> draw_batch(const TrainConfig& cfg, std::uint64_t global_step) {
  Rng rng(derive_seed(cfg.seed, kStreamBatch, global_step));
  std::vector<Profile> batch;
  batch.reserve(cfg.batch_size);
  for (int i = 0; i < cfg.batch_size; ++i) {
    GeneratorSpec spec =
        cfg.instance_mix[rng.next_below(cfg.instance_mix.size())];
    spec.seed = rng.next_u64();
    batch.push_back(generate(spec));
  }
  return batch;
}

std::vector<double> greedy_validation_costs(Tape<float>& tape,
                                            const OnTapeParams<float>& refs,
                                            const Parameters<float>& params,
                                            const std::vector<Profile>& val) {
  std::vector<double> costs;
  costs.reserve(val.size());
  for (const Profile& profile : val) {
    tape.reset();
    Trajectory t = rollout(tape, refs, params, profile, RolloutMode::kGreedy, 0);
    costs.push_back(kemeny_distance(t.ranking, profile));
  }
  return costs;
}

void sync_from_tape(Parameters<float>& params, const Tape<float>& tape,
                    const OnTapeParams<float>& refs) {
  for (int i = 0; i < params.count(); ++i) {
    params.data[i] = tape.value(refs.refs[i]);
  }
}

void load_onto_tape(Tape<float>& tape, const OnTapeParams<float>& refs,
                    const Parameters<float>& params) {
  for (int i = 0; i < params.count(); ++i) {
    tape.mutable_value(refs.refs[i]) = params.data[i];
  }
}

void emit_progress(std::ostream* progress, const EpochStats& es) {
  if (!progress) return;
  nlohmann::json j;
  j["epoch"] = es.epoch;
  j["mean_sampled_cost"] = es.mean_sampled_cost;
  j["mean_greedy_cost"] = es.mean_greedy_cost;
  j["mean_baseline_cost"] = es.mean_baseline_cost;
  if (es.degenerate) {
    j["t"] = nullptr;
    j["p"] = nullptr;
  } else {
    j["t"] = es.t_statistic;
    j["p"] = es.p_value;
  }
  j["degenerate"] = es.degenerate;
  j["replaced"] = es.baseline_replaced;
  j["wall_seconds"] = es.wall_seconds;
  *progress << j.dump() << '\n' << std::flush;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw InvalidInputError("train config: epochs must be >= 0");
  if (steps_per_epoch < 1) {
    throw InvalidInputError("train config: steps_per_epoch must be positive");
  }
  if (batch_size < 1) {
    throw InvalidInputError("train config: batch_size must be positive");
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidInputError("train config: alpha must lie in (0, 1)");
  }
  if (!(learning_rate >= 0.0)) {
    throw InvalidInputError("train config: learning_rate must be >= 0");
  }
  if (instance_mix.empty()) {
    throw InvalidInputError("train config: instance_mix must name at least one generator spec");
  }
  for (const GeneratorSpec& spec : instance_mix) spec.validate();
  if (validation_size < 2) {
    throw InvalidInputError("train config: validation_size must be >= 2");
  }
  model.validate();
  for (const GeneratorSpec& spec : instance_mix) {
    if (spec.m > model.max_m) {
      throw InvalidInputError(
          "train config: instance_mix m=" + std::to_string(spec.m) +
          " exceeds model max_m=" + std::to_string(model.max_m));
    }
  }
}

std::vector<Profile> validation_profiles(const TrainConfig& config) {
  config.validate();
  std::vector<Profile> out;
  out.reserve(config.validation_size);
  for (int i = 0; i < config.validation_size; ++i) {
    GeneratorSpec spec = config.instance_mix[i % config.instance_mix.size()];
    spec.seed = derive_seed(config.seed, kStreamValidation, i);
    out.push_back(generate(spec));
  }
  return out;
}

template <typename T>
TensorRef reinforce_surrogate(Tape<T>& tape, const OnTapeParams<T>& p,
                              const Parameters<T>& params,
                              const std::vector<Profile>& batch,
                              const std::vector<Ranking>& actions,
                              const std::vector<double>& advantages) {
  if (batch.empty()) {
    throw InvalidInputError("reinforce_surrogate: empty batch");
  }
  if (batch.size() != actions.size() || batch.size() != advantages.size()) {
    throw InvalidInputError("reinforce_surrogate: batch, actions, advantages sizes disagree");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  TensorRef total{-1};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    TensorRef lp = log_prob_on_tape(tape, p, params, batch[i], actions[i]);
    TensorRef term = tape.scale(lp, advantages[i] * inv_b);
    total = i == 0 ? term : tape.add(total, term);
  }
  return total;
}

StepResult reinforce_step(Tape<float>& tape, const OnTapeParams<float>& theta_refs,
                          const Parameters<float>& theta,
                          Tape<float>& baseline_tape,
                          const OnTapeParams<float>& baseline_refs,
                          const Parameters<float>& theta_baseline,
                          const std::vector<Profile>& batch, std::uint64_t seed) {
  if (batch.empty()) throw InvalidInputError("reinforce_step: empty batch");
  StepResult result;
  const std::size_t b = batch.size();
  result.actions.reserve(b);
  result.baseline_actions.reserve(b);
  result.sampled_costs.reserve(b);
  result.baseline_costs.reserve(b);
  result.advantages.reserve(b);

  for (std::size_t i = 0; i < b; ++i) {
    tape.reset();
    Trajectory sampled = rollout(tape, theta_refs, theta, batch[i],
                                 RolloutMode::kSample, derive_seed(seed, i));
    baseline_tape.reset();
    Trajectory base = rollout(baseline_tape, baseline_refs, theta_baseline,
                              batch[i], RolloutMode::kGreedy, 0);
    const double sampled_cost = kemeny_distance(sampled.ranking, batch[i]);
    const double baseline_cost = kemeny_distance(base.ranking, batch[i]);
    result.actions.push_back(std::move(sampled.ranking));
    result.baseline_actions.push_back(std::move(base.ranking));
    result.sampled_costs.push_back(sampled_cost);
    result.baseline_costs.push_back(baseline_cost);
    result.advantages.push_back(sampled_cost - baseline_cost);
  }

  tape.reset();
  TensorRef loss = reinforce_surrogate(tape, theta_refs, theta, batch,
                                       result.actions, result.advantages);
  tape.backward(loss);
  result.surrogate = static_cast<double>(tape.scalar_value(loss));
  return result;
}

EvalSummary evaluate(const Parameters<float>& params,
                     const std::vector<Profile>& profiles, RolloutMode mode,
                     const std::vector<double>* oracle_costs, std::uint64_t seed) {
  params.config.validate();
  if (profiles.empty()) throw InvalidInputError("evaluate: no profiles");
  if (oracle_costs && oracle_costs->size() != profiles.size()) {
    throw InvalidInputError("evaluate: oracle costs do not align with profiles");
  }
  for (const Profile& p : profiles) {
    if (p.m() > params.config.max_m) {
      throw ConfigMismatchError("evaluate: profile has m=" + std::to_string(p.m()) +
                                " voters but the checkpoint supports max_m=" +
                                std::to_string(params.config.max_m));
    }
  }

  Tape<float> tape;
  OnTapeParams<float> refs = register_params(tape, params);
  EvalSummary out;
  out.costs.reserve(profiles.size());
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    tape.reset();
    Trajectory t = rollout(tape, refs, params, profiles[i], mode,
                           derive_seed(seed, i));
    out.costs.push_back(kemeny_distance(t.ranking, profiles[i]));
  }
  out.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.mean_cost = mean_of(out.costs);
  if (oracle_costs) {
    double gap = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      gap += out.costs[i] - (*oracle_costs)[i];
    }
    out.mean_gap = gap / static_cast<double>(profiles.size());
  }
  return out;
}

TrainState init_train_state(const TrainConfig& config) {
  config.validate();
  TrainState state;
  state.config = config;
  state.theta = Parameters<float>::init(config.model, config.seed);
  state.theta_baseline = state.theta;
  std::vector<std::size_t> sizes;
  sizes.reserve(state.theta.data.size());
  for (const auto& d : state.theta.data) sizes.push_back(d.size());
  state.adam.init(sizes);
  state.adam.learning_rate = config.learning_rate;

  Tape<float> tape;
  OnTapeParams<float> refs = register_params(tape, state.theta);
  const std::vector<Profile> val = validation_profiles(config);
  state.report.initial_greedy_mean =
      mean_of(greedy_validation_costs(tape, refs, state.theta, val));
  return state;
}

void run_epochs(TrainState& state, int until_epoch, std::ostream* progress) {
  const TrainConfig& cfg = state.config;
  cfg.validate();
  const int stop = std::min(until_epoch, cfg.epochs);
  if (state.epochs_done >= stop) return;

  Tape<float> tape;
  OnTapeParams<float> refs = register_params(tape, state.theta);
  Tape<float> bl_tape;
  OnTapeParams<float> bl_refs = register_params(bl_tape, state.theta_baseline);
  state.adam.learning_rate = cfg.learning_rate;

  const std::vector<Profile> val = validation_profiles(cfg);

  for (int epoch = state.epochs_done; epoch < stop; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double sampled_sum = 0.0;
    std::int64_t sampled_count = 0;

    for (int step = 0; step < cfg.steps_per_epoch; ++step) {
      const std::uint64_t global_step =
          static_cast<std::uint64_t>(epoch) * cfg.steps_per_epoch + step;
      const std::vector<Profile> batch = draw_batch(cfg, global_step);
      StepResult r =
          reinforce_step(tape, refs, state.theta, bl_tape, bl_refs,
                         state.theta_baseline, batch,
                         derive_seed(cfg.seed, kStreamRollout, global_step));
      for (double c : r.sampled_costs) sampled_sum += c;
      sampled_count += static_cast<std::int64_t>(r.sampled_costs.size());
      // Node storage may reallocate as graphs grow, so the array pointers are
      // collected anew for every update.
      std::vector<std::vector<float>*> param_arrays;
      std::vector<const std::vector<float>*> grad_arrays;
      param_arrays.reserve(refs.refs.size());
      grad_arrays.reserve(refs.refs.size());
      for (TensorRef ref : refs.refs) {
        param_arrays.push_back(&tape.mutable_value(ref));
        grad_arrays.push_back(&tape.grad(ref));
      }
      adam_step(param_arrays, grad_arrays, state.adam);
    }

    sync_from_tape(state.theta, tape, refs);

    const std::vector<double> cand =
        greedy_validation_costs(tape, refs, state.theta, val);
    const std::vector<double> base =
        greedy_validation_costs(bl_tape, bl_refs, state.theta_baseline, val);

    EpochStats es;
    es.epoch = epoch;
    es.mean_sampled_cost = sampled_sum / static_cast<double>(sampled_count);
    es.mean_greedy_cost = mean_of(cand);
    es.mean_baseline_cost = mean_of(base);
    bool replace = false;
    try {
      const PairedTTest tt = paired_t_test_one_sided(cand, base);
      es.t_statistic = tt.t;
      es.p_value = tt.p;
      replace = tt.p < cfg.alpha;
    } catch (const ZeroVarianceError&) {
      es.degenerate = true;
      es.t_statistic = std::numeric_limits<double>::quiet_NaN();
      es.p_value = std::numeric_limits<double>::quiet_NaN();
      replace = true;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        if (!(cand[i] - base[i] < 0.0)) {
          replace = false;
          break;
        }
      }
    }
    es.baseline_replaced = replace;
    if (replace) {
      state.theta_baseline = state.theta;
      load_onto_tape(bl_tape, bl_refs, state.theta_baseline);
    }
    es.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    state.report.epochs.push_back(es);
    state.epochs_done = epoch + 1;
    emit_progress(progress, es);
  }
}

std::pair<Checkpoint, TrainReport> train(const TrainConfig& config,
                                         std::ostream* progress) {
  TrainState state = init_train_state(config);
  run_epochs(state, config.epochs, progress);
  Checkpoint ck;
  ck.params = std::move(state.theta);
  ck.meta.epochs_seen = state.epochs_done;
  ck.meta.seed = config.seed;
  return {std::move(ck), std::move(state.report)};
}

// --- train-state document ----------------------------------------------------

namespace {

constexpr int kTrainStateFormatVersion = 1;

nlohmann::json epoch_stats_to_json(const EpochStats& es) {
  nlohmann::json j;
  j["epoch"] = es.epoch;
  j["mean_sampled_cost"] = es.mean_sampled_cost;
  j["mean_greedy_cost"] = es.mean_greedy_cost;
  j["mean_baseline_cost"] = es.mean_baseline_cost;
  j["t"] = es.degenerate ? nlohmann::json(nullptr) : nlohmann::json(es.t_statistic);
  j["p"] = es.degenerate ? nlohmann::json(nullptr) : nlohmann::json(es.p_value);
  j["degenerate"] = es.degenerate;
  j["replaced"] = es.baseline_replaced;
  j["wall_seconds"] = es.wall_seconds;
  return j;
}

EpochStats epoch_stats_from_json(const nlohmann::json& j) {
  EpochStats es;
  es.epoch = j.at("epoch").get<int>();
  es.mean_sampled_cost = j.at("mean_sampled_cost").get<double>();
  es.mean_greedy_cost = j.at("mean_greedy_cost").get<double>();
  es.mean_baseline_cost = j.at("mean_baseline_cost").get<double>();
  es.degenerate = j.at("degenerate").get<bool>();
  if (es.degenerate) {
    es.t_statistic = std::numeric_limits<double>::quiet_NaN();
    es.p_value = std::numeric_limits<double>::quiet_NaN();
  } else {
    es.t_statistic = j.at("t").get<double>();
    es.p_value = j.at("p").get<double>();
  }
  es.baseline_replaced = j.at("replaced").get<bool>();
  es.wall_seconds = j.at("wall_seconds").get<double>();
  return es;
}

}  // namespace

void save_train_state(const TrainState& state, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kTrainStateFormatVersion;
  j["kind"] = "kemeny-train-state";
  j["config"] = train_config_to_json(state.config);
  j["epochs_done"] = state.epochs_done;
  j["theta"] = parameters_to_json(state.theta);
  j["theta_baseline"] = parameters_to_json(state.theta_baseline);
  nlohmann::json adam;
  adam["step"] = state.adam.step;
  adam["m"] = state.adam.m;
  adam["v"] = state.adam.v;
  j["adam"] = std::move(adam);
  nlohmann::json report;
  report["initial_greedy_mean"] = state.report.initial_greedy_mean;
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochStats& es : state.report.epochs) {
    epochs.push_back(epoch_stats_to_json(es));
  }
  report["epochs"] = std::move(epochs);
  j["report"] = std::move(report);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open train state for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out.good()) throw IoError("short write on train state: " + path);
}

TrainState load_train_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open train state: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw IoError("corrupt train state (not valid JSON): " + path);
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kTrainStateFormatVersion) {
      throw ConfigMismatchError("train state format version " +
                                std::to_string(version) + " is not supported (" +
                                std::to_string(kTrainStateFormatVersion) + ")");
    }
    if (j.at("kind").get<std::string>() != "kemeny-train-state") {
      throw ConfigMismatchError("not a train-state document: " + path);
    }
    TrainState state;
    state.config = train_config_from_json(j.at("config"));
    state.config.validate();
    state.epochs_done = j.at("epochs_done").get<int>();

    state.theta = Parameters<float>::init(state.config.model, 0);
    parameters_from_json(j.at("theta"), state.theta);
    state.theta_baseline = Parameters<float>::init(state.config.model, 0);
    parameters_from_json(j.at("theta_baseline"), state.theta_baseline);

    const auto& adam = j.at("adam");
    std::vector<std::size_t> sizes;
    for (const auto& d : state.theta.data) sizes.push_back(d.size());
    state.adam.init(sizes);
    state.adam.learning_rate = state.config.learning_rate;
    state.adam.step = adam.at("step").get<std::int64_t>();
    const auto m = adam.at("m").get<std::vector<std::vector<double>>>();
    const auto v = adam.at("v").get<std::vector<std::vector<double>>>();
    if (m.size() != state.adam.m.size() || v.size() != state.adam.v.size()) {
      throw ConfigMismatchError("train state moments do not match the config");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].size() != state.adam.m[i].size() ||
          v[i].size() != state.adam.v[i].size()) {
        throw ConfigMismatchError("train state moment " + std::to_string(i) +
                                  " has the wrong size");
      }
    }
    state.adam.m = std::move(m);
    state.adam.v = std::move(v);

    const auto& report = j.at("report");
    state.report.initial_greedy_mean =
        report.at("initial_greedy_mean").get<double>();
    for (const auto& es : report.at("epochs")) {
      state.report.epochs.push_back(epoch_stats_from_json(es));
    }
    if (static_cast<int>(state.report.epochs.size()) != state.epochs_done) {
      throw ConfigMismatchError("train state epoch count disagrees with report");
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt train state (" + std::string(e.what()) + "): " + path);
  }
}

template TensorRef reinforce_surrogate(Tape<float>&, const OnTapeParams<float>&,
                                       const Parameters<float>&,
                                       const std::vector<Profile>&,
                                       const std::vector<Ranking>&,
                                       const std::vector<double>&);
template TensorRef reinforce_surrogate(Tape<double>&, const OnTapeParams<double>&,
                                       const Parameters<double>&,
                                       const std::vector<Profile>&,
                                       const std::vector<Ranking>&,
                                       const std::vector<double>&);

}  // namespace kemeny

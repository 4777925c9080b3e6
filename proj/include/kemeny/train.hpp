#pragma once

// REINFORCE with a self-critical greedy-rollout baseline, paired one-sided
// t-test baseline replacement, fixed seeded validation, and resumable
// training state.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kemeny/generators.hpp"
#include "kemeny/model.hpp"
#include "kemeny/ranking.hpp"
#include "kemeny/tensor.hpp"

namespace kemeny {

struct TrainConfig {
  int epochs = 20;            // E
  int steps_per_epoch = 100;  // T
  int batch_size = 64;        // B
  double alpha = 0.05;        // baseline-replacement significance level
  double learning_rate = 1e-4;
  // Instance distribution: each training/validation instance is drawn from
  // one of these specs (seed fields are ignored; streams derive from `seed`).
  std::vector<GeneratorSpec> instance_mix;
  int validation_size = 256;
  std::uint64_t seed = 1234;
  ModelConfig model;

  void validate() const;  // throws InvalidInputError naming the field
};

struct EpochStats {
  int epoch = 0;                    // 0-based
  double mean_sampled_cost = 0.0;   // training rollouts across the epoch
  double mean_greedy_cost = 0.0;    // candidate greedy validation mean
  double mean_baseline_cost = 0.0;  // baseline greedy validation mean
  double t_statistic = 0.0;         // NaN when the test degenerated
  double p_value = 0.0;             // NaN when the test degenerated
  bool degenerate = false;
  bool baseline_replaced = false;
  double wall_seconds = 0.0;
};

struct TrainReport {
  // Greedy validation mean of the freshly initialized model, before any
  // update (the epoch-0 reference for improvement ratios).
  double initial_greedy_mean = 0.0;
  std::vector<EpochStats> epochs;
};

// The fixed validation set for a config: deterministic in config.seed,
// generated once per run (and identically on resume).
std::vector<Profile> validation_profiles(const TrainConfig& config);

// The REINFORCE surrogate (1/B) * sum_i advantage_i * log p(actions_i) built
// on the tape from teacher-forced passes. Advantages are constants: no
// gradient flows through them.
template <typename T>
TensorRef reinforce_surrogate(Tape<T>& tape, const OnTapeParams<T>& p,
                              const Parameters<T>& params,
                              const std::vector<Profile>& batch,
                              const std::vector<Ranking>& actions,
                              const std::vector<double>& advantages);

struct StepResult {
  std::vector<Ranking> actions;           // sampled rollouts under theta
  std::vector<Ranking> baseline_actions;  // greedy rollouts under theta_bl
  std::vector<double> sampled_costs;
  std::vector<double> baseline_costs;
  std::vector<double> advantages;  // sampled - baseline, per instance
  double surrogate = 0.0;
};

// One training step: per instance a sampled rollout under theta and a
// greedy rollout under the baseline (both no-grad), then one backward pass
// through the surrogate. Gradients are left on `tape`'s parameter handles
// until the next tape operation. Numeric parameter values are read from the
// tapes (the Parameters structs supply layout and config).
StepResult reinforce_step(Tape<float>& tape, const OnTapeParams<float>& theta_refs,
                          const Parameters<float>& theta,
                          Tape<float>& baseline_tape,
                          const OnTapeParams<float>& baseline_refs,
                          const Parameters<float>& theta_baseline,
                          const std::vector<Profile>& batch, std::uint64_t seed);

struct EvalSummary {
  std::vector<double> costs;  // per instance, in input order
  double mean_cost = 0.0;
  std::optional<double> mean_gap;  // vs. supplied oracle costs
  double total_seconds = 0.0;      // rollout time only
};

// Greedy (default) or sampled rollouts over the profiles. oracle_costs,
// when given, must align with profiles; mean_gap is the mean cost difference
// (model minus oracle). Throws ConfigMismatchError when a profile exceeds
// max_m.
EvalSummary evaluate(const Parameters<float>& params,
                     const std::vector<Profile>& profiles,
                     RolloutMode mode = RolloutMode::kGreedy,
                     const std::vector<double>* oracle_costs = nullptr,
                     std::uint64_t seed = 0);

// Everything needed to continue a run at an epoch boundary: both parameter
// sets, optimizer moments, and the report so far. RNG streams are stateless
// (derived from config.seed and the epoch/step indices), so no generator
// state is stored.
struct TrainState {
  TrainConfig config;
  Parameters<float> theta;
  Parameters<float> theta_baseline;
  AdamState<float> adam;
  int epochs_done = 0;
  TrainReport report;
};

// Fresh state: theta from config.model/config.seed, baseline a copy of
// theta, zero moments, and the initial validation mean filled in.
TrainState init_train_state(const TrainConfig& config);

// Runs epochs [state.epochs_done, min(until_epoch, config.epochs)).
// Progress, when non-null, receives one JSON record per epoch.
void run_epochs(TrainState& state, int until_epoch, std::ostream* progress);

// Full run: init + all epochs. Returns the final candidate checkpoint and
// the report.
std::pair<Checkpoint, TrainReport> train(const TrainConfig& config,
                                         std::ostream* progress = nullptr);

// Resumable-state document (JSON). Distinct from the inference checkpoint:
// it additionally holds the baseline and optimizer moments.
void save_train_state(const TrainState& state, const std::string& path);
TrainState load_train_state(const std::string& path);

extern template TensorRef reinforce_surrogate(Tape<float>&, const OnTapeParams<float>&,
                                              const Parameters<float>&,
                                              const std::vector<Profile>&,
                                              const std::vector<Ranking>&,
                                              const std::vector<double>&);
extern template TensorRef reinforce_surrogate(Tape<double>&,
                                              const OnTapeParams<double>&,
                                              const Parameters<double>&,
                                              const std::vector<Profile>&,
                                              const std::vector<Ranking>&,
                                              const std::vector<double>&);

}  // namespace kemeny

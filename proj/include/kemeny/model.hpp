#pragma once

// The consensus-ranking transformer: tokenization, permutation-equivariant
// encoder, autoregressive pointer-style decoder with a growing query cache,
// rollout policies, and checkpoint serialization.

#include <cstdint>
#include <string>
#include <vector>

#include "kemeny/ranking.hpp"
#include "kemeny/rng.hpp"
#include "kemeny/tensor.hpp"

namespace kemeny {

struct ModelConfig {
  int d_model = 64;
  int n_heads = 4;
  int d_ff = 256;
  int encoder_layers = 2;
  int decoder_layers = 1;
  int max_m = 8;  // voter capacity of the input projection
  double pe_base = 10000.0;

  void validate() const;  // throws InvalidInputError
  bool operator==(const ModelConfig&) const = default;
};

// Table-1 scale configuration.
ModelConfig paper_config();

// Named parameter arrays in a fixed construction order. The layout indices
// below address into `data` so the forward pass never does string lookups.
template <typename T>
struct Parameters {
  struct AttnIdx {
    int wq_w, wq_b, wk_w, wk_b, wv_w, wv_b, wo_w, wo_b;
  };
  struct LnIdx {
    int gain, bias;
  };
  struct FfIdx {
    int w1_w, w1_b, w2_w, w2_b;
  };
  struct EncLayerIdx {
    AttnIdx attn;
    LnIdx ln1;
    FfIdx ff;
    LnIdx ln2;
  };
  struct DecLayerIdx {
    AttnIdx self_attn;
    LnIdx ln1;
    AttnIdx cross_attn;
    LnIdx ln2;
    FfIdx ff;
    LnIdx ln3;
  };
  struct Layout {
    int input_w, input_b;
    std::vector<EncLayerIdx> enc;
    int start;
    std::vector<DecLayerIdx> dec;
    int score_q_w, score_q_b, score_k_w, score_k_b;
  };

  ModelConfig config;
  std::vector<std::string> names;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<std::vector<T>> data;
  Layout layout;

  int count() const { return static_cast<int>(data.size()); }
  std::size_t scalar_count() const;
  int index_of(const std::string& name) const;  // -1 when absent

  // Xavier-uniform weights, zero biases, unit layer-norm gains; the draw
  // order is fixed so one seed reproduces identical parameters at either
  // precision.
  static Parameters init(const ModelConfig& config, std::uint64_t seed);
};

// Tape handles for one registered parameter set, parallel to
// Parameters::data. Register once, then freeze_persistent() so reset()
// keeps the parameters alive between forward passes.
template <typename T>
struct OnTapeParams {
  std::vector<TensorRef> refs;
};

template <typename T>
OnTapeParams<T> register_params(Tape<T>& tape, const Parameters<T>& params);

// Sinusoidal positional encoding, 1-based step index.
std::vector<double> positional_encoding(int t, int d_model, double base = 10000.0);

// H^in: n rows of 1-based voter positions divided by n. Columns beyond the
// profile's m repeat the per-item mean position so one projection serves any
// m <= max_m. Throws CapacityError when m exceeds max_m.
template <typename T>
std::vector<T> tokenize(const Profile& profile, const ModelConfig& config);

// Encoder stack; h_in is n x max_m on the tape. Returns H^enc (n x d_model).
template <typename T>
TensorRef encode(Tape<T>& tape, TensorRef h_in, const OnTapeParams<T>& p,
                 const Parameters<T>& params);

// Autoregressive decode state: the query cache H^sel plus selection mask.
template <typename T>
struct DecodeState {
  TensorRef h_sel{-1};  // t x d_model after t steps
  int t = 0;            // completed steps
  std::vector<T> mask;  // additive logits mask, 0 or -1e9 per item
  // Cross-attention keys/values and the scoring keys depend only on H^enc;
  // computed once per rollout.
  std::vector<TensorRef> cross_k, cross_v;  // per decoder layer
  TensorRef score_k{-1};
};

template <typename T>
DecodeState<T> init_decode(Tape<T>& tape, TensorRef h_enc,
                           const OnTapeParams<T>& p, const Parameters<T>& params);

// One decode step. prev_item is the item selected at the previous step (-1
// at t = 1, where the learned start vector stands in). Returns masked logits
// (1 x n): already-selected items carry -1e9. Throws InvalidStateError when
// the mask population differs from the cache length.
template <typename T>
TensorRef decode_step(Tape<T>& tape, DecodeState<T>& state, TensorRef h_enc,
                      int prev_item, const OnTapeParams<T>& p,
                      const Parameters<T>& params);

// Marks an item as selected in the state (mask + step counter bookkeeping).
template <typename T>
void commit_selection(DecodeState<T>& state, int item);

enum class RolloutMode { kSample, kGreedy };

struct Trajectory {
  Ranking ranking;
  std::vector<double> step_log_probs;
  double total_log_prob = 0.0;
};

// Full rollout: encode + n decode steps. Sample mode draws from the
// categorical softmax using the seeded generator; greedy takes the argmax
// (ties to the lowest item index). The caller owns tape.reset().
template <typename T>
Trajectory rollout(Tape<T>& tape, const OnTapeParams<T>& p,
                   const Parameters<T>& params, const Profile& profile,
                   RolloutMode mode, std::uint64_t seed);

// Teacher-forced log probability of a given permutation. Returns the on-tape
// scalar (for backward()) and fills trajectory_out when non-null.
template <typename T>
TensorRef log_prob_on_tape(Tape<T>& tape, const OnTapeParams<T>& p,
                           const Parameters<T>& params, const Profile& profile,
                           const Ranking& pi, Trajectory* trajectory_out = nullptr);

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMeta {
  std::int64_t epochs_seen = 0;
  std::uint64_t seed = 0;
};

// Deterministic JSON checkpoint (sorted parameter names, lossless numeric
// payload). Throws IoError on unreadable/corrupt files, ConfigMismatchError
// on version/shape/name disagreements.
void save_checkpoint(const Parameters<float>& params, const CheckpointMeta& meta,
                     const std::string& path);
struct Checkpoint {
  Parameters<float> params;
  CheckpointMeta meta;
};
// expect, when non-null, is the configuration the caller is about to run
// with; a checkpoint written under any other configuration is rejected.
Checkpoint load_checkpoint(const std::string& path,
                           const ModelConfig* expect = nullptr);

extern template struct Parameters<float>;
extern template struct Parameters<double>;
extern template OnTapeParams<float> register_params(Tape<float>&,
                                                    const Parameters<float>&);
extern template OnTapeParams<double> register_params(Tape<double>&,
                                                     const Parameters<double>&);
extern template std::vector<float> tokenize(const Profile&, const ModelConfig&);
extern template std::vector<double> tokenize(const Profile&, const ModelConfig&);
extern template TensorRef encode(Tape<float>&, TensorRef, const OnTapeParams<float>&,
                                 const Parameters<float>&);
extern template TensorRef encode(Tape<double>&, TensorRef,
                                 const OnTapeParams<double>&,
                                 const Parameters<double>&);
extern template DecodeState<float> init_decode(Tape<float>&, TensorRef,
                                               const OnTapeParams<float>&,
                                               const Parameters<float>&);
extern template DecodeState<double> init_decode(Tape<double>&, TensorRef,
                                                const OnTapeParams<double>&,
                                                const Parameters<double>&);
extern template TensorRef decode_step(Tape<float>&, DecodeState<float>&, TensorRef,
                                      int, const OnTapeParams<float>&,
                                      const Parameters<float>&);
extern template TensorRef decode_step(Tape<double>&, DecodeState<double>&,
                                      TensorRef, int, const OnTapeParams<double>&,
                                      const Parameters<double>&);
extern template void commit_selection(DecodeState<float>&, int);
extern template void commit_selection(DecodeState<double>&, int);
extern template Trajectory rollout(Tape<float>&, const OnTapeParams<float>&,
                                   const Parameters<float>&, const Profile&,
                                   RolloutMode, std::uint64_t);
extern template Trajectory rollout(Tape<double>&, const OnTapeParams<double>&,
                                   const Parameters<double>&, const Profile&,
                                   RolloutMode, std::uint64_t);
extern template TensorRef log_prob_on_tape(Tape<float>&, const OnTapeParams<float>&,
                                           const Parameters<float>&, const Profile&,
                                           const Ranking&, Trajectory*);
extern template TensorRef log_prob_on_tape(Tape<double>&,
                                           const OnTapeParams<double>&,
                                           const Parameters<double>&, const Profile&,
                                           const Ranking&, Trajectory*);

}  // namespace kemeny

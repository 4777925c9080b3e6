#include "kemeny/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "kemeny/error.hpp"

namespace kemeny {

void ModelConfig::validate() const {
  if (d_model < 1 || n_heads < 1 || d_ff < 1 || encoder_layers < 1 ||
      decoder_layers < 1 || max_m < 1) {
    throw InvalidInputError("model config: all sizes must be positive");
  }
  if (d_model % n_heads != 0) {
    throw InvalidInputError("model config: d_model (" + std::to_string(d_model) +
                            ") must be divisible by n_heads (" +
                            std::to_string(n_heads) + ")");
  }
  if (!(pe_base > 1.0)) {
    throw InvalidInputError("model config: pe_base must exceed 1");
  }
}

ModelConfig paper_config() {
  ModelConfig c;
  c.d_model = 128;
  c.n_heads = 8;
  c.d_ff = 512;
  c.encoder_layers = 3;
  c.decoder_layers = 2;
  return c;
}

namespace {

// Builder that appends tensors in a fixed order and hands back their index.
template <typename T>
struct ParamBuilder {
  Parameters<T>& p;

  int tensor(const std::string& name, int rows, int cols) {
    p.names.push_back(name);
    p.rows.push_back(rows);
    p.cols.push_back(cols);
    p.data.emplace_back(static_cast<std::size_t>(rows) * cols, T(0));
    return static_cast<int>(p.data.size()) - 1;
  }

  typename Parameters<T>::AttnIdx attn(const std::string& prefix, int d) {
    typename Parameters<T>::AttnIdx a;
    a.wq_w = tensor(prefix + ".wq.weight", d, d);
    a.wq_b = tensor(prefix + ".wq.bias", 1, d);
    a.wk_w = tensor(prefix + ".wk.weight", d, d);
    a.wk_b = tensor(prefix + ".wk.bias", 1, d);
    a.wv_w = tensor(prefix + ".wv.weight", d, d);
    a.wv_b = tensor(prefix + ".wv.bias", 1, d);
    a.wo_w = tensor(prefix + ".wo.weight", d, d);
    a.wo_b = tensor(prefix + ".wo.bias", 1, d);
    return a;
  }

  typename Parameters<T>::LnIdx ln(const std::string& prefix, int d) {
    typename Parameters<T>::LnIdx l;
    l.gain = tensor(prefix + ".gain", 1, d);
    l.bias = tensor(prefix + ".bias", 1, d);
    return l;
  }

  typename Parameters<T>::FfIdx ff(const std::string& prefix, int d, int dff) {
    typename Parameters<T>::FfIdx f;
    f.w1_w = tensor(prefix + ".w1.weight", d, dff);
    f.w1_b = tensor(prefix + ".w1.bias", 1, dff);
    f.w2_w = tensor(prefix + ".w2.weight", dff, d);
    f.w2_b = tensor(prefix + ".w2.bias", 1, d);
    return f;
  }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

template <typename T>
std::size_t Parameters<T>::scalar_count() const {
  std::size_t total = 0;
  for (const auto& d : data) total += d.size();
  return total;
}

template <typename T>
int Parameters<T>::index_of(const std::string& name) const {
  for (int i = 0; i < count(); ++i) {
    if (names[i] == name) return i;
  }
  return -1;
}

template <typename T>
Parameters<T> Parameters<T>::init(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Parameters<T> p;
  p.config = config;
  ParamBuilder<T> b{p};
  const int d = config.d_model;

  p.layout.input_w = b.tensor("input_proj.weight", config.max_m, d);
  p.layout.input_b = b.tensor("input_proj.bias", 1, d);
  for (int l = 0; l < config.encoder_layers; ++l) {
    const std::string pre = "encoder." + std::to_string(l);
    EncLayerIdx e;
    e.attn = b.attn(pre + ".attn", d);
    e.ln1 = b.ln(pre + ".ln1", d);
    e.ff = b.ff(pre + ".ff", d, config.d_ff);
    e.ln2 = b.ln(pre + ".ln2", d);
    p.layout.enc.push_back(e);
  }
  p.layout.start = b.tensor("decoder.start", 1, d);
  for (int l = 0; l < config.decoder_layers; ++l) {
    const std::string pre = "decoder." + std::to_string(l);
    DecLayerIdx dl;
    dl.self_attn = b.attn(pre + ".self", d);
    dl.ln1 = b.ln(pre + ".ln1", d);
    dl.cross_attn = b.attn(pre + ".cross", d);
    dl.ln2 = b.ln(pre + ".ln2", d);
    dl.ff = b.ff(pre + ".ff", d, config.d_ff);
    dl.ln3 = b.ln(pre + ".ln3", d);
    p.layout.dec.push_back(dl);
  }
  p.layout.score_q_w = b.tensor("score.wq.weight", d, d);
  p.layout.score_q_b = b.tensor("score.wq.bias", 1, d);
  p.layout.score_k_w = b.tensor("score.wk.weight", d, d);
  p.layout.score_k_b = b.tensor("score.wk.bias", 1, d);

  Rng rng(seed);
  for (int i = 0; i < p.count(); ++i) {
    const std::string& name = p.names[i];
    if (ends_with(name, ".gain")) {
      std::fill(p.data[i].begin(), p.data[i].end(), T(1));
    } else if (name == "decoder.start" || ends_with(name, ".weight")) {
      const double limit = std::sqrt(6.0 / (p.rows[i] + p.cols[i]));
      for (T& x : p.data[i]) {
        x = static_cast<T>((2.0 * rng.next_double() - 1.0) * limit);
      }
    }
  }
  return p;
}

template <typename T>
OnTapeParams<T> register_params(Tape<T>& tape, const Parameters<T>& params) {
  OnTapeParams<T> out;
  out.refs.reserve(params.count());
  for (int i = 0; i < params.count(); ++i) {
    out.refs.push_back(
        tape.input(params.rows[i], params.cols[i], params.data[i], true));
  }
  tape.freeze_persistent();
  return out;
}

std::vector<double> positional_encoding(int t, int d_model, double base) {
  if (t < 1) throw InvalidInputError("positional_encoding: t must be >= 1");
  if (d_model < 1) throw InvalidInputError("positional_encoding: d_model >= 1");
  std::vector<double> pe(d_model);
  for (int i = 0; 2 * i < d_model; ++i) {
    const double freq = std::pow(base, -2.0 * i / d_model);
    pe[2 * i] = std::sin(t * freq);
    if (2 * i + 1 < d_model) pe[2 * i + 1] = std::cos(t * freq);
  }
  return pe;
}

template <typename T>
std::vector<T> tokenize(const Profile& profile, const ModelConfig& config) {
  profile.validate();
  const int n = profile.n;
  const int m = profile.m();
  if (m > config.max_m) {
    throw CapacityError("tokenize: profile has m=" + std::to_string(m) +
                        " voters, model input supports max_m=" +
                        std::to_string(config.max_m));
  }
  std::vector<T> h(static_cast<std::size_t>(n) * config.max_m);
  for (int k = 0; k < m; ++k) {
    const auto pos = profile.rankings[k].positions();
    for (int i = 0; i < n; ++i) {
      h[static_cast<std::size_t>(i) * config.max_m + k] =
          static_cast<T>(static_cast<double>(pos[i] + 1) / n);
    }
  }
  if (m < config.max_m) {
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      for (int k = 0; k < m; ++k) {
        mean += static_cast<double>(h[static_cast<std::size_t>(i) * config.max_m + k]);
      }
      mean /= m;
      for (int k = m; k < config.max_m; ++k) {
        h[static_cast<std::size_t>(i) * config.max_m + k] = static_cast<T>(mean);
      }
    }
  }
  return h;
}

namespace {

template <typename T>
TensorRef linear(Tape<T>& tape, TensorRef x, const OnTapeParams<T>& p, int w_idx,
                 int b_idx) {
  return tape.add_rowvec(tape.matmul(x, p.refs[w_idx]), p.refs[b_idx]);
}

// Multi-head attention core. q_src (a x d) is projected to queries here;
// k and v are already-projected keys/values (b x d). The optional additive
// mask (length b) removes columns from every head's softmax.
template <typename T>
TensorRef mha(Tape<T>& tape, const ModelConfig& cfg, TensorRef q_src,
              const typename Parameters<T>::AttnIdx& a, TensorRef k, TensorRef v,
              const std::vector<T>& mask, const OnTapeParams<T>& p) {
  const int dh = cfg.d_model / cfg.n_heads;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  TensorRef q = linear(tape, q_src, p, a.wq_w, a.wq_b);
  TensorRef catted{-1};
  for (int h = 0; h < cfg.n_heads; ++h) {
    TensorRef qh = tape.slice_cols(q, h * dh, dh);
    TensorRef kh = tape.slice_cols(k, h * dh, dh);
    TensorRef vh = tape.slice_cols(v, h * dh, dh);
    TensorRef scores = tape.scale(tape.matmul_nt(qh, kh), inv_sqrt_dh);
    TensorRef probs = tape.softmax_rows(scores, mask);
    TensorRef out = tape.matmul(probs, vh);
    catted = h == 0 ? out : tape.concat_cols(catted, out);
  }
  return linear(tape, catted, p, a.wo_w, a.wo_b);
}

template <typename T>
TensorRef residual_ln(Tape<T>& tape, TensorRef x, TensorRef sub,
                      const typename Parameters<T>::LnIdx& ln,
                      const OnTapeParams<T>& p) {
  return tape.layer_norm_rows(tape.add(x, sub), p.refs[ln.gain], p.refs[ln.bias]);
}

template <typename T>
TensorRef feed_forward(Tape<T>& tape, TensorRef x,
                       const typename Parameters<T>::FfIdx& f,
                       const OnTapeParams<T>& p) {
  TensorRef h = tape.relu(linear(tape, x, p, f.w1_w, f.w1_b));
  return linear(tape, h, p, f.w2_w, f.w2_b);
}

}  // namespace

template <typename T>
TensorRef encode(Tape<T>& tape, TensorRef h_in, const OnTapeParams<T>& p,
                 const Parameters<T>& params) {
  const ModelConfig& cfg = params.config;
  if (tape.cols(h_in) != cfg.max_m) {
    throw InvalidShapeError("encode: input has " + std::to_string(tape.cols(h_in)) +
                            " columns, expected max_m=" + std::to_string(cfg.max_m));
  }
  TensorRef x = linear(tape, h_in, p, params.layout.input_w, params.layout.input_b);
  for (const auto& layer : params.layout.enc) {
    TensorRef k = linear(tape, x, p, layer.attn.wk_w, layer.attn.wk_b);
    TensorRef v = linear(tape, x, p, layer.attn.wv_w, layer.attn.wv_b);
    TensorRef attn = mha(tape, cfg, x, layer.attn, k, v, {}, p);
    x = residual_ln(tape, x, attn, layer.ln1, p);
    TensorRef f = feed_forward(tape, x, layer.ff, p);
    x = residual_ln(tape, x, f, layer.ln2, p);
  }
  return x;
}

template <typename T>
DecodeState<T> init_decode(Tape<T>& tape, TensorRef h_enc,
                           const OnTapeParams<T>& p, const Parameters<T>& params) {
  DecodeState<T> state;
  state.mask.assign(tape.rows(h_enc), T(0));
  for (const auto& layer : params.layout.dec) {
    state.cross_k.push_back(
        linear(tape, h_enc, p, layer.cross_attn.wk_w, layer.cross_attn.wk_b));
    state.cross_v.push_back(
        linear(tape, h_enc, p, layer.cross_attn.wv_w, layer.cross_attn.wv_b));
  }
  state.score_k =
      linear(tape, h_enc, p, params.layout.score_k_w, params.layout.score_k_b);
  return state;
}

template <typename T>
TensorRef decode_step(Tape<T>& tape, DecodeState<T>& state, TensorRef h_enc,
                      int prev_item, const OnTapeParams<T>& p,
                      const Parameters<T>& params) {
  const ModelConfig& cfg = params.config;
  const int n = tape.rows(h_enc);
  const int t = state.t + 1;

  int masked = 0;
  for (T x : state.mask) {
    if (x != T(0)) ++masked;
  }
  if (masked != state.t) {
    throw InvalidStateError("decode_step: mask covers " + std::to_string(masked) +
                            " items but the cache holds " +
                            std::to_string(state.t) + " steps");
  }

  TensorRef base{-1};
  if (t == 1) {
    if (prev_item != -1) {
      throw InvalidStateError("decode_step: step 1 takes no previous item");
    }
    base = p.refs[params.layout.start];
  } else {
    if (prev_item < 0 || prev_item >= n) {
      throw InvalidStateError("decode_step: previous item " +
                              std::to_string(prev_item) + " outside 0.." +
                              std::to_string(n - 1));
    }
    base = tape.gather_rows(h_enc, {prev_item});
  }

  const std::vector<double> pe_d = positional_encoding(t, cfg.d_model, cfg.pe_base);
  std::vector<T> pe(pe_d.begin(), pe_d.end());
  TensorRef q_in = tape.add(base, tape.input(1, cfg.d_model, pe, false));

  state.h_sel = t == 1 ? q_in : tape.concat_rows(state.h_sel, q_in);

  TensorRef x = q_in;
  for (std::size_t l = 0; l < params.layout.dec.size(); ++l) {
    const auto& layer = params.layout.dec[l];
    TensorRef k =
        linear(tape, state.h_sel, p, layer.self_attn.wk_w, layer.self_attn.wk_b);
    TensorRef v =
        linear(tape, state.h_sel, p, layer.self_attn.wv_w, layer.self_attn.wv_b);
    TensorRef sa = mha(tape, cfg, x, layer.self_attn, k, v, {}, p);
    x = residual_ln(tape, x, sa, layer.ln1, p);

    TensorRef ca = mha(tape, cfg, x, layer.cross_attn, state.cross_k[l],
                       state.cross_v[l], state.mask, p);
    x = residual_ln(tape, x, ca, layer.ln2, p);

    TensorRef f = feed_forward(tape, x, layer.ff, p);
    x = residual_ln(tape, x, f, layer.ln3, p);
  }

  TensorRef qf = linear(tape, x, p, params.layout.score_q_w, params.layout.score_q_b);
  TensorRef raw = tape.scale(tape.matmul_nt(qf, state.score_k),
                             1.0 / std::sqrt(static_cast<double>(cfg.d_model)));
  TensorRef logits = tape.add(raw, tape.input(1, n, state.mask, false));

  state.t = t;
  return logits;
}

template <typename T>
void commit_selection(DecodeState<T>& state, int item) {
  if (item < 0 || item >= static_cast<int>(state.mask.size())) {
    throw InvalidStateError("commit_selection: item " + std::to_string(item) +
                            " outside the mask");
  }
  if (state.mask[item] != T(0)) {
    throw InvalidStateError("commit_selection: item " + std::to_string(item) +
                            " already selected");
  }
  state.mask[item] = T(-1e9);
}

namespace {

// Shared decode loop. `forced` non-null teacher-forces that permutation and
// builds the on-tape total log-prob; otherwise items come from the sampling
// mode and only numeric log-probs are collected.
template <typename T>
Trajectory run_decode(Tape<T>& tape, const OnTapeParams<T>& p,
                      const Parameters<T>& params, const Profile& profile,
                      RolloutMode mode, std::uint64_t seed, const Ranking* forced,
                      TensorRef* logp_out) {
  const std::vector<T> h_in_data = tokenize<T>(profile, params.config);
  const int n = profile.n;
  TensorRef h_in = tape.input(n, params.config.max_m, h_in_data, false);
  TensorRef h_enc = encode(tape, h_in, p, params);
  DecodeState<T> state = init_decode(tape, h_enc, p, params);

  if (forced && !validate_ranking(forced->order, n)) {
    throw InvalidInputError("log_prob: forced order is not a permutation of n");
  }

  Rng rng(seed);
  Trajectory traj;
  traj.ranking.order.reserve(n);
  traj.step_log_probs.reserve(n);
  TensorRef logp_total{-1};

  int prev = -1;
  for (int t = 1; t <= n; ++t) {
    TensorRef logits = decode_step(tape, state, h_enc, prev, p, params);
    TensorRef probs = tape.softmax_rows(logits);
    const std::vector<T>& pv = tape.value(probs);

    int item = -1;
    if (forced) {
      item = forced->order[t - 1];
    } else if (mode == RolloutMode::kGreedy) {
      item = 0;
      for (int j = 1; j < n; ++j) {
        if (pv[j] > pv[item]) item = j;
      }
    } else {
      const double u = rng.next_double();
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += static_cast<double>(pv[j]);
        if (u < acc) {
          item = j;
          break;
        }
      }
      if (item == -1) {  // numeric tail: take the last unmasked item
        for (int j = n - 1; j >= 0; --j) {
          if (state.mask[j] == T(0)) {
            item = j;
            break;
          }
        }
      }
    }

    if (forced) {
      TensorRef lp = tape.log(tape.slice_cols(probs, item, 1));
      logp_total = t == 1 ? lp : tape.add(logp_total, lp);
    }
    traj.ranking.order.push_back(item);
    traj.step_log_probs.push_back(std::log(static_cast<double>(pv[item])));
    commit_selection(state, item);
    prev = item;
  }

  traj.total_log_prob = 0.0;
  for (double lp : traj.step_log_probs) traj.total_log_prob += lp;
  if (logp_out) *logp_out = logp_total;
  return traj;
}

}  // namespace

template <typename T>
Trajectory rollout(Tape<T>& tape, const OnTapeParams<T>& p,
                   const Parameters<T>& params, const Profile& profile,
                   RolloutMode mode, std::uint64_t seed) {
  return run_decode(tape, p, params, profile, mode, seed, nullptr, nullptr);
}

template <typename T>
TensorRef log_prob_on_tape(Tape<T>& tape, const OnTapeParams<T>& p,
                           const Parameters<T>& params, const Profile& profile,
                           const Ranking& pi, Trajectory* trajectory_out) {
  TensorRef logp{-1};
  Trajectory traj = run_decode(tape, p, params, profile, RolloutMode::kGreedy, 0,
                               &pi, &logp);
  if (trajectory_out) *trajectory_out = std::move(traj);
  return logp;
}

// --- checkpoints ------------------------------------------------------------

void save_checkpoint(const Parameters<float>& params, const CheckpointMeta& meta,
                     const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["config"] = {
      {"d_model", params.config.d_model},
      {"n_heads", params.config.n_heads},
      {"d_ff", params.config.d_ff},
      {"encoder_layers", params.config.encoder_layers},
      {"decoder_layers", params.config.decoder_layers},
      {"max_m", params.config.max_m},
      {"pe_base", params.config.pe_base},
  };
  j["meta"] = {
      {"epochs_seen", meta.epochs_seen},
      {"seed", meta.seed},
  };
  nlohmann::json tensors = nlohmann::json::object();
  for (int i = 0; i < params.count(); ++i) {
    nlohmann::json arr = nlohmann::json::array();
    for (float x : params.data[i]) arr.push_back(static_cast<double>(x));
    tensors[params.names[i]] = {
        {"rows", params.rows[i]}, {"cols", params.cols[i]}, {"data", std::move(arr)}};
  }
  j["params"] = std::move(tensors);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out.good()) throw IoError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path, const ModelConfig* expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("corrupt checkpoint (not valid JSON): " + path);

  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ConfigMismatchError("checkpoint format version " +
                                std::to_string(version) + " is not supported (" +
                                std::to_string(kCheckpointFormatVersion) + ")");
    }
    const auto& jc = j.at("config");
    ModelConfig cfg;
    cfg.d_model = jc.at("d_model").get<int>();
    cfg.n_heads = jc.at("n_heads").get<int>();
    cfg.d_ff = jc.at("d_ff").get<int>();
    cfg.encoder_layers = jc.at("encoder_layers").get<int>();
    cfg.decoder_layers = jc.at("decoder_layers").get<int>();
    cfg.max_m = jc.at("max_m").get<int>();
    cfg.pe_base = jc.at("pe_base").get<double>();
    cfg.validate();
    if (expect && !(cfg == *expect)) {
      throw ConfigMismatchError(
          "checkpoint was written under a different model configuration "
          "(stored d_model=" + std::to_string(cfg.d_model) + ", n_heads=" +
          std::to_string(cfg.n_heads) + ", d_ff=" + std::to_string(cfg.d_ff) +
          ", enc=" + std::to_string(cfg.encoder_layers) + ", dec=" +
          std::to_string(cfg.decoder_layers) + ", max_m=" +
          std::to_string(cfg.max_m) + ")");
    }

    Checkpoint ck;
    ck.params = Parameters<float>::init(cfg, 0);
    ck.meta.epochs_seen = j.at("meta").at("epochs_seen").get<std::int64_t>();
    ck.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();

    const auto& jt = j.at("params");
    if (static_cast<int>(jt.size()) != ck.params.count()) {
      throw ConfigMismatchError(
          "checkpoint holds " + std::to_string(jt.size()) + " tensors, config needs " +
          std::to_string(ck.params.count()));
    }
    for (int i = 0; i < ck.params.count(); ++i) {
      const std::string& name = ck.params.names[i];
      if (!jt.contains(name)) {
        throw ConfigMismatchError("checkpoint is missing tensor: " + name);
      }
      const auto& entry = jt.at(name);
      const int r = entry.at("rows").get<int>();
      const int c = entry.at("cols").get<int>();
      if (r != ck.params.rows[i] || c != ck.params.cols[i]) {
        throw ConfigMismatchError("checkpoint tensor " + name + " is " +
                                  std::to_string(r) + "x" + std::to_string(c) +
                                  ", expected " + std::to_string(ck.params.rows[i]) +
                                  "x" + std::to_string(ck.params.cols[i]));
      }
      const auto& arr = entry.at("data");
      if (arr.size() != ck.params.data[i].size()) {
        throw ConfigMismatchError("checkpoint tensor " + name + " holds " +
                                  std::to_string(arr.size()) + " values, expected " +
                                  std::to_string(ck.params.data[i].size()));
      }
      for (std::size_t k = 0; k < arr.size(); ++k) {
        ck.params.data[i][k] = static_cast<float>(arr[k].get<double>());
      }
    }
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt checkpoint (" + std::string(e.what()) + "): " + path);
  }
}

template struct Parameters<float>;
template struct Parameters<double>;
template OnTapeParams<float> register_params(Tape<float>&, const Parameters<float>&);
template OnTapeParams<double> register_params(Tape<double>&,
                                              const Parameters<double>&);
template std::vector<float> tokenize(const Profile&, const ModelConfig&);
template std::vector<double> tokenize(const Profile&, const ModelConfig&);
template TensorRef encode(Tape<float>&, TensorRef, const OnTapeParams<float>&,
                          const Parameters<float>&);
template TensorRef encode(Tape<double>&, TensorRef, const OnTapeParams<double>&,
                          const Parameters<double>&);
template DecodeState<float> init_decode(Tape<float>&, TensorRef,
                                        const OnTapeParams<float>&,
                                        const Parameters<float>&);
template DecodeState<double> init_decode(Tape<double>&, TensorRef,
                                         const OnTapeParams<double>&,
                                         const Parameters<double>&);
template TensorRef decode_step(Tape<float>&, DecodeState<float>&, TensorRef, int,
                               const OnTapeParams<float>&, const Parameters<float>&);
template TensorRef decode_step(Tape<double>&, DecodeState<double>&, TensorRef, int,
                               const OnTapeParams<double>&,
                               const Parameters<double>&);
template void commit_selection(DecodeState<float>&, int);
template void commit_selection(DecodeState<double>&, int);
template Trajectory rollout(Tape<float>&, const OnTapeParams<float>&,
                            const Parameters<float>&, const Profile&, RolloutMode,
                            std::uint64_t);
template Trajectory rollout(Tape<double>&, const OnTapeParams<double>&,
                            const Parameters<double>&, const Profile&, RolloutMode,
                            std::uint64_t);
template TensorRef log_prob_on_tape(Tape<float>&, const OnTapeParams<float>&,
                                    const Parameters<float>&, const Profile&,
                                    const Ranking&, Trajectory*);
template TensorRef log_prob_on_tape(Tape<double>&, const OnTapeParams<double>&,
                                    const Parameters<double>&, const Profile&,
                                    const Ranking&, Trajectory*);

}  // namespace kemeny

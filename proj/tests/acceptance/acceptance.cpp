// Acceptance gate: one pass/fail line per criterion, tolerances pinned here.
// argv[1] is the CLI binary (used by the reproducibility criterion);
// remaining arguments select individual criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kemeny/error.hpp"
#include "kemeny/exact.hpp"
#include "kemeny/generators.hpp"
#include "kemeny/heuristics.hpp"
#include "kemeny/model.hpp"
#include "kemeny/ranking.hpp"
#include "kemeny/rng.hpp"
#include "kemeny/stats.hpp"
#include "kemeny/tensor.hpp"
#include "kemeny/train.hpp"
#include "oracles.hpp"

using namespace kemeny;
using testoracle::kendall_tau_pairs;
using testoracle::random_profile;
using testoracle::random_ranking;
using testoracle::student_t_cdf_closed_form;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// --- 1: subset DP equals brute force ------------------------------------------

bool criterion1(std::string& detail) {
  const int profiles = 500;
  int mismatches = 0;
  for (int i = 0; i < profiles; ++i) {
    Rng rng(derive_seed(101, i));
    const int n = 4 + static_cast<int>(rng.next_below(5));
    const int m = 1 + static_cast<int>(rng.next_below(8));
    const Profile p = random_profile(n, m, rng);
    const ExactResult bf = solve_brute_force(p);
    const ExactResult dp = solve_subset_dp(p);
    if (bf.cost_numerator != dp.cost_numerator) ++mismatches;
  }
  detail = std::to_string(profiles) + " profiles (n 4..8, m 1..8), " +
           std::to_string(mismatches) + " numerator mismatches";
  return mismatches == 0;
}

// --- 2: kendall_tau kernel ----------------------------------------------------

bool criterion2(std::string& detail) {
  int pair_mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng(derive_seed(202, i));
    const int n = 2 + static_cast<int>(rng.next_below(199));
    const Ranking a = random_ranking(n, rng);
    const Ranking b = random_ranking(n, rng);
    if (kendall_tau(a, b) != kendall_tau_pairs(a, b)) ++pair_mismatches;
  }

  int property_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    Rng rng(derive_seed(203, i));
    const int n = 2 + static_cast<int>(rng.next_below(29));
    const Ranking a = random_ranking(n, rng);
    const Ranking b = random_ranking(n, rng);
    const Ranking c = random_ranking(n, rng);
    const std::int64_t ab = kendall_tau(a, b);
    const std::int64_t ba = kendall_tau(b, a);
    const std::int64_t bc = kendall_tau(b, c);
    const std::int64_t ac = kendall_tau(a, c);
    if (ab != ba) ++property_failures;
    if (ac > ab + bc) ++property_failures;
    if (ab < 0 || ab > static_cast<std::int64_t>(n) * (n - 1) / 2) {
      ++property_failures;
    }
  }
  detail = "1000 oracle pairs (n<=200), " + std::to_string(pair_mismatches) +
           " mismatches; 10000 triples, " + std::to_string(property_failures) +
           " property failures";
  return pair_mismatches == 0 && property_failures == 0;
}

// --- 3: heuristic dominance and quality ---------------------------------------

bool criterion3(std::string& detail) {
  const int profiles = 200;
  int dominance_failures = 0;
  double ratio_sum = 0.0;
  double kiwi_mean = 0.0;
  double decor_mean = 0.0;
  for (int i = 0; i < profiles; ++i) {
    Rng rng(derive_seed(303, i));
    const Profile p = random_profile(10, 8, rng);
    const ExactResult exact = solve_subset_dp(p);
    DecorConfig dc;
    dc.seed = derive_seed(305, i);
    const HeuristicResult runs[] = {
        kiwisort(p, derive_seed(304, i)), markov_chain(p),
        greedy_max_agreement(p), greedy_min_regret(p), decor(p, dc)};
    for (const HeuristicResult& r : runs) {
      if (r.cost_numerator < exact.cost_numerator) ++dominance_failures;
    }
    ratio_sum += static_cast<double>(runs[0].cost_numerator) /
                 static_cast<double>(exact.cost_numerator);
    kiwi_mean += runs[0].cost;
    decor_mean += runs[4].cost;
  }
  const double mean_ratio = ratio_sum / profiles;
  kiwi_mean /= profiles;
  decor_mean /= profiles;
  const bool pass = dominance_failures == 0 && mean_ratio <= 2.0 &&
                    decor_mean <= kiwi_mean;
  detail = std::to_string(dominance_failures) +
           " dominance failures; mean kiwisort/exact = " + fmt(mean_ratio) +
           " (<= 2.0); decor mean " + fmt(decor_mean) + " vs kiwisort mean " +
           fmt(kiwi_mean);
  return pass;
}

// --- 4: generator fidelity ----------------------------------------------------

bool criterion4(std::string& detail) {
  double m_invariance = 0.0;
  for (const int n : {4, 10, 100}) {
    for (const int p_i : {0, n / 2, n - 1}) {
      const std::vector<double> low = jiggling_swap_distribution(n, p_i, 1.0);
      const std::vector<double> high = jiggling_swap_distribution(n, p_i, 10.0);
      for (std::size_t j = 0; j < low.size(); ++j) {
        m_invariance = std::max(m_invariance, std::abs(low[j] - high[j]));
      }
    }
  }

  const int jig_profiles = 500;
  double dist_sum = 0.0;
  std::int64_t dist_count = 0;
  for (int i = 0; i < jig_profiles; ++i) {
    GeneratorSpec spec;
    spec.kind = GenKind::kJiggling;
    spec.n = 100;
    spec.m = 8;
    spec.seed = derive_seed(404, i);
    Ranking ref;
    const Profile p = gen_jiggling(spec, &ref);
    for (const Ranking& r : p.rankings) {
      dist_sum += static_cast<double>(kendall_tau(r, ref));
      ++dist_count;
    }
  }
  const double jig_mean = dist_sum / static_cast<double>(dist_count);
  const double jig_bound = 0.25 * 100.0 * 99.0 / 4.0;

  const int rand_profiles = 200;
  double inter_sum = 0.0;
  std::int64_t inter_count = 0;
  for (int i = 0; i < rand_profiles; ++i) {
    Rng rng(derive_seed(405, i));
    const Profile p = random_profile(100, 8, rng);
    for (int a = 0; a < p.m(); ++a) {
      for (int b = a + 1; b < p.m(); ++b) {
        inter_sum += static_cast<double>(kendall_tau(p.rankings[a], p.rankings[b]));
        ++inter_count;
      }
    }
  }
  const double inter_mean = inter_sum / static_cast<double>(inter_count);
  const double expected = 100.0 * 99.0 / 4.0;

  const bool pass = m_invariance <= 1e-12 && jig_mean < jig_bound &&
                    std::abs(inter_mean - expected) <= 0.05 * expected;
  detail = "M-invariance max |diff| = " + fmt(m_invariance) +
           "; jiggling mean dist " + fmt(jig_mean) + " (< " + fmt(jig_bound) +
           "); random inter-voter mean " + fmt(inter_mean) + " vs " +
           fmt(expected);
  return pass;
}

// --- 5: autodiff soundness ----------------------------------------------------

struct FdCase {
  const char* name;
  std::vector<std::pair<int, int>> shapes;  // gradient inputs
  std::function<TensorRef(Tape<double>&, const std::vector<TensorRef>&)> build;
};

double fd_worst_error(const FdCase& c, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> values;
  for (const auto& [r, k] : c.shapes) {
    std::vector<double> v(static_cast<std::size_t>(r) * k);
    for (double& x : v) x = 0.5 + 1.5 * rng.next_double();
    values.push_back(std::move(v));
  }
  const auto eval = [&]() {
    Tape<double> tape;
    std::vector<TensorRef> inputs;
    for (std::size_t i = 0; i < values.size(); ++i) {
      inputs.push_back(tape.input(c.shapes[i].first, c.shapes[i].second,
                                  values[i], true));
    }
    return tape.scalar_value(c.build(tape, inputs));
  };

  Tape<double> tape;
  std::vector<TensorRef> inputs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    inputs.push_back(
        tape.input(c.shapes[i].first, c.shapes[i].second, values[i], true));
  }
  const TensorRef loss = c.build(tape, inputs);
  tape.backward(loss);

  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& g = tape.grad(inputs[i]);
    for (std::size_t j = 0; j < values[i].size(); ++j) {
      const double keep = values[i][j];
      values[i][j] = keep + h;
      const double fp = eval();
      values[i][j] = keep - h;
      const double fm = eval();
      values[i][j] = keep;
      const double fd = (fp - fm) / (2.0 * h);
      const double rel =
          std::abs(g[j] - fd) / std::max({std::abs(fd), std::abs(g[j]), 1e-3});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

bool criterion5(std::string& detail) {
  const std::vector<double> mask = {0.0, -1e9, 0.0, 0.0};
  std::vector<FdCase> cases;
  cases.push_back({"matmul", {{3, 4}, {4, 2}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.matmul(in[0], in[1]));
                   }});
  cases.push_back({"matmul_nt", {{3, 4}, {2, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.matmul_nt(in[0], in[1]));
                   }});
  cases.push_back({"add", {{3, 4}, {3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.add(in[0], in[1]));
                   }});
  cases.push_back({"add_rowvec", {{3, 4}, {1, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.add_rowvec(in[0], in[1]));
                   }});
  cases.push_back({"scale", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.scale(in[0], -1.7));
                   }});
  cases.push_back({"relu", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.relu(t.scale(in[0], 1.0)));
                   }});
  cases.push_back({"softmax_rows", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.log(t.softmax_rows(in[0])));
                   }});
  cases.push_back({"softmax_rows masked", {{3, 4}},
                   [mask](Tape<double>& t, const auto& in) {
                     return t.mean(
                         t.log(t.slice_cols(t.softmax_rows(in[0], mask), 2, 2)));
                   }});
  cases.push_back({"layer_norm_rows", {{3, 4}, {1, 4}, {1, 4}},
                   [](Tape<double>& t, const auto& in) {
                     return t.mean(t.layer_norm_rows(in[0], in[1], in[2]));
                   }});
  cases.push_back({"gather_rows", {{4, 3}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.gather_rows(in[0], {2, 0, 2}));
                   }});
  cases.push_back({"concat_rows", {{2, 3}, {3, 3}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.concat_rows(in[0], in[1]));
                   }});
  cases.push_back({"concat_cols", {{3, 2}, {3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.concat_cols(in[0], in[1]));
                   }});
  cases.push_back({"slice_rows", {{5, 3}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.slice_rows(in[0], 1, 3));
                   }});
  cases.push_back({"slice_cols", {{3, 5}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.slice_cols(in[0], 2, 2));
                   }});
  cases.push_back({"log", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(t.log(in[0]));
                   }});
  cases.push_back({"sum", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.sum(in[0]);
                   }});
  cases.push_back({"mean", {{3, 4}}, [](Tape<double>& t, const auto& in) {
                     return t.mean(in[0]);
                   }});

  double worst_primitive = 0.0;
  std::string worst_name = "-";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const double err = fd_worst_error(cases[i], derive_seed(505, i));
    if (err > worst_primitive) {
      worst_primitive = err;
      worst_name = cases[i].name;
    }
  }

  ModelConfig cfg;
  cfg.d_model = 8;
  cfg.n_heads = 2;
  cfg.d_ff = 16;
  cfg.encoder_layers = 1;
  cfg.decoder_layers = 1;
  cfg.max_m = 4;
  Parameters<double> params = Parameters<double>::init(cfg, 11);
  Rng rng(12);
  const Profile prof = random_profile(5, 3, rng);
  const Ranking pi({3, 0, 4, 1, 2});
  const auto eval = [&]() {
    Tape<double> tape;
    OnTapeParams<double> refs = register_params(tape, params);
    return static_cast<double>(
        tape.scalar_value(log_prob_on_tape(tape, refs, params, prof, pi)));
  };
  Tape<double> tape;
  OnTapeParams<double> refs = register_params(tape, params);
  const TensorRef lp = log_prob_on_tape(tape, refs, params, prof, pi);
  tape.backward(lp);
  const double h = 1e-5;
  double worst_model = 0.0;
  for (int t = 0; t < params.count(); ++t) {
    const auto& g = tape.grad(refs.refs[t]);
    for (std::size_t i = 0; i < params.data[t].size(); ++i) {
      const double keep = params.data[t][i];
      params.data[t][i] = keep + h;
      const double fp = eval();
      params.data[t][i] = keep - h;
      const double fm = eval();
      params.data[t][i] = keep;
      const double fd = (fp - fm) / (2.0 * h);
      worst_model = std::max(
          worst_model,
          std::abs(g[i] - fd) / std::max({std::abs(fd), std::abs(g[i]), 1e-3}));
    }
  }

  const bool pass = worst_primitive <= 1e-6 && worst_model <= 1e-4;
  detail = "worst primitive rel err " + fmt(worst_primitive) + " (" +
           worst_name + ", <= 1e-6); full-model rel err " + fmt(worst_model) +
           " (<= 1e-4)";
  return pass;
}

// --- 6: decoder contract fuzz -------------------------------------------------

bool criterion6(std::string& detail) {
  ModelConfig cfg;
  cfg.d_model = 16;
  cfg.n_heads = 2;
  cfg.d_ff = 32;
  cfg.encoder_layers = 1;
  cfg.decoder_layers = 1;
  cfg.max_m = 4;

  const int rollouts = 10000;
  const int rollouts_per_params = 50;
  int invalid = 0;
  double worst_masked = 0.0;
  double worst_norm = 0.0;

  Tape<float> tape;
  OnTapeParams<float> refs;
  Parameters<float> params;
  for (int i = 0; i < rollouts; ++i) {
    if (i % rollouts_per_params == 0) {
      params = Parameters<float>::init(cfg, derive_seed(606, i));
      tape.clear();
      refs = register_params(tape, params);
    }
    Rng rng(derive_seed(607, i));
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const int m = 1 + static_cast<int>(rng.next_below(4));
    const Profile p = random_profile(n, m, rng);

    tape.reset();
    const std::vector<float> tokens = tokenize<float>(p, cfg);
    const TensorRef h_in = tape.input(n, cfg.max_m, tokens, false);
    const TensorRef h_enc = encode(tape, h_in, refs, params);
    DecodeState<float> state = init_decode(tape, h_enc, refs, params);
    Rng pick(derive_seed(608, i));
    std::vector<Item> order;
    int prev = -1;
    for (int t = 1; t <= n; ++t) {
      const TensorRef logits = decode_step(tape, state, h_enc, prev, refs, params);
      const TensorRef probs = tape.softmax_rows(logits);
      const auto& pv = tape.value(probs);
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        total += pv[j];
        if (state.mask[j] != 0.0f) {
          worst_masked = std::max(worst_masked, static_cast<double>(pv[j]));
        }
      }
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
      int item = -1;
      if (i % 2 == 0) {
        const double u = pick.next_double();
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          if (state.mask[j] != 0.0f) continue;
          acc += pv[j];
          item = j;
          if (u < acc) break;
        }
      } else {
        float best = -1.0f;
        for (int j = 0; j < n; ++j) {
          if (state.mask[j] != 0.0f) continue;
          if (pv[j] > best) {
            best = pv[j];
            item = j;
          }
        }
      }
      commit_selection(state, item);
      order.push_back(item);
      prev = item;
    }
    if (!validate_ranking(order, n)) ++invalid;
  }

  const bool pass = invalid == 0 && worst_masked <= 1e-12 && worst_norm <= 1e-6;
  detail = std::to_string(rollouts) + " rollouts, " + std::to_string(invalid) +
           " invalid permutations; max masked prob " + fmt(worst_masked) +
           " (<= 1e-12); worst |sum-1| " + fmt(worst_norm) + " (<= 1e-6)";
  return pass;
}

// --- 7: desk-scale training efficacy ------------------------------------------

bool criterion7(std::string& detail) {
  const double t0 = now_seconds();
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.steps_per_epoch = 100;
  cfg.batch_size = 64;
  cfg.learning_rate = 1e-4;
  GeneratorSpec spec;
  spec.kind = GenKind::kRandom;
  spec.n = 10;
  spec.m = 5;
  cfg.instance_mix = {spec};
  cfg.validation_size = 64;
  cfg.seed = 1234;
  cfg.model = ModelConfig{};  // desk config: d_model 64

  auto [ck, report] = train(cfg, &std::cerr);

  const std::vector<Profile> val = validation_profiles(cfg);
  std::vector<double> exact_costs;
  exact_costs.reserve(val.size());
  for (const Profile& p : val) exact_costs.push_back(solve_subset_dp(p).cost);
  const EvalSummary final_eval =
      evaluate(ck.params, val, RolloutMode::kGreedy, &exact_costs);

  double mc4_gap = 0.0;
  for (std::size_t i = 0; i < val.size(); ++i) {
    mc4_gap += markov_chain(val[i]).cost - exact_costs[i];
  }
  mc4_gap /= static_cast<double>(val.size());

  const double wall = now_seconds() - t0;
  const double bound = 0.8 * report.initial_greedy_mean;
  const bool improved = final_eval.mean_cost <= bound;
  const bool within_budget = wall <= 45.0 * 60.0;
  const bool mc4_ok = final_eval.mean_gap && *final_eval.mean_gap <= mc4_gap;

  detail = "final greedy mean " + fmt(final_eval.mean_cost) + " vs 0.8 x " +
           fmt(report.initial_greedy_mean) + " = " + fmt(bound) +
           (improved ? " (met)" : " (NOT met)") + "; gap " +
           fmt(final_eval.mean_gap ? *final_eval.mean_gap : -1.0) + " vs mc4 " +
           fmt(mc4_gap) + (mc4_ok ? " (met)" : " (NOT met, reported only)") +
           "; wall " + fmt(wall) + "s (<= 2700s)";
  // The improvement bound gates; the MC4 comparison is reported either way.
  return improved && within_budget;
}

// --- 8: scaling shape ---------------------------------------------------------

bool criterion8(std::string& detail) {
  const ModelConfig cfg;  // desk config
  const Parameters<float> params = Parameters<float>::init(cfg, 21);
  Tape<float> tape;
  OnTapeParams<float> refs = register_params(tape, params);

  const std::vector<int> sizes = {20, 50, 100, 150};
  std::vector<double> macs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Rng rng(derive_seed(808, i));
    const Profile p = random_profile(sizes[i], 5, rng);
    tape.reset();
    tape.reset_mac_count();
    rollout(tape, refs, params, p, RolloutMode::kGreedy, 0);
    macs.push_back(static_cast<double>(tape.mac_count()));
  }

  // Least squares for macs ~ c1 n^2 + c2 n via the 2x2 normal equations.
  double s22 = 0, s21 = 0, s11 = 0, b2 = 0, b1 = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double n = sizes[i];
    s22 += n * n * n * n;
    s21 += n * n * n;
    s11 += n * n;
    b2 += n * n * macs[i];
    b1 += n * macs[i];
  }
  const double det = s22 * s11 - s21 * s21;
  const double c1 = (b2 * s11 - b1 * s21) / det;
  const double c2 = (s22 * b1 - s21 * b2) / det;
  double ss_res = 0, ss_tot = 0, mean = 0;
  for (double v : macs) mean += v;
  mean /= macs.size();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double n = sizes[i];
    const double fit = c1 * n * n + c2 * n;
    ss_res += (macs[i] - fit) * (macs[i] - fit);
    ss_tot += (macs[i] - mean) * (macs[i] - mean);
  }
  const double r2 = 1.0 - ss_res / ss_tot;

  const auto median_seconds = [](const std::function<double()>& run) {
    std::vector<double> t = {run(), run(), run()};
    std::sort(t.begin(), t.end());
    return t[1];
  };
  Rng rng12(881);
  const Profile p12 = random_profile(12, 5, rng12);
  Rng rng18(882);
  const Profile p18 = random_profile(18, 5, rng18);
  const double dp12 = median_seconds(
      [&] { return solve_subset_dp(p12).elapsed.count(); });
  const double dp18 = median_seconds(
      [&] { return solve_subset_dp(p18).elapsed.count(); });
  const double tr12 = median_seconds([&] {
    tape.reset();
    const double s = now_seconds();
    rollout(tape, refs, params, p12, RolloutMode::kGreedy, 0);
    return now_seconds() - s;
  });
  const double tr18 = median_seconds([&] {
    tape.reset();
    const double s = now_seconds();
    rollout(tape, refs, params, p18, RolloutMode::kGreedy, 0);
    return now_seconds() - s;
  });
  const double dp_growth = dp18 / dp12;
  const double tr_growth = tr18 / tr12;
  const double ratio = dp_growth / tr_growth;

  const bool pass = r2 >= 0.99 && c1 > 0.0 && ratio > 2.0;
  detail = "quadratic MAC fit R^2 = " + fmt(r2) + " (>= 0.99), c1 = " + fmt(c1) +
           "; DP growth " + fmt(dp_growth) + " vs transformer growth " +
           fmt(tr_growth) + ", ratio " + fmt(ratio) + " (> 2)";
  return pass;
}

// --- 9: t-test correctness ----------------------------------------------------

bool criterion9(std::string& detail) {
  const std::vector<std::vector<double>> vectors = {
      {1.0, 3.0},
      {-2.0, 5.0},
      {1.0, 1.0, -1.0, 1.0},
      {1.0, 2.0, 3.0},
      {-1.0, -2.0, -3.0},
      {0.5, -0.5, 1.5},
      {2.0, 2.0, 1.0, 3.0},
      {1.0, -1.0, 0.0, 2.0},
      {10.0, 12.0, 9.0, 11.0},
      {-0.1, 0.2, -0.3, 0.4},
      {5.0, 4.0, 6.0},
      {1e-3, 2e-3, -1e-3},
      {0.0, 1.0, 0.0, -1.0, 2.0},
      {3.0, 1.0, 4.0, 1.0, 5.0},
      {-2.0, -4.0, -1.0, -3.0, -5.0},
      {0.25, 0.5, 0.75, 1.0, 1.25},
      {9.0, -9.0, 3.0, -3.0, 1.0},
      {1.0, 2.0, 4.0, 8.0, 16.0, 32.0},
      {0.0, 0.0, 0.0, 0.0, 0.0, 1.0},
      {-1.5, 2.5, -3.5, 4.5, -5.5, 6.5},
      {7.0, 7.0, 7.0, 7.0, 7.0, 6.0},
      {2.0, 3.0, 5.0, 7.0, 11.0, 13.0},
      {1.0, 4.0, 2.0},
      {6.0, -6.0, 6.0, -6.0, 5.0},
  };

  double worst = 0.0;
  int checked = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::vector<double>& d = vectors[i];
    const std::vector<double> zeros(d.size(), 0.0);
    const PairedTTest r = paired_t_test_one_sided(d, zeros);
    const double expected = student_t_cdf_closed_form(r.t, r.df);
    if (std::isnan(expected)) continue;
    worst = std::max(worst, std::abs(r.p - expected));
    ++checked;
  }

  bool degenerate_ok = false;
  try {
    const std::vector<double> equal = {2.0, 2.0, 2.0};
    const std::vector<double> zeros(equal.size(), 0.0);
    paired_t_test_one_sided(equal, zeros);
  } catch (const ZeroVarianceError&) {
    degenerate_ok = true;
  }

  const bool pass = checked >= 20 && worst <= 1e-9 && degenerate_ok;
  detail = std::to_string(checked) + " handcrafted vectors, max |dp| = " +
           fmt(worst) + " (<= 1e-9); zero-variance raises: " +
           (degenerate_ok ? "yes" : "no");
  return pass;
}

// --- 10: CLI reproducibility --------------------------------------------------

int run_cli(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status < 0) return -1;
  return (status >> 8) & 0xff;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

bool criterion10(const std::string& cli, std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "kemeny_acceptance_c10";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string q = "\"" + cli + "\"";
  const std::string quiet = " 2>/dev/null";

  const std::string gen_flags = " gen --type random --n 10 --m 8 --count 5 --seed 1234";
  if (run_cli(q + gen_flags + " --out " + (root / "d1").string() + quiet) != 0 ||
      run_cli(q + gen_flags + " --out " + (root / "d2").string() + quiet) != 0) {
    detail = "gen failed";
    return false;
  }
  for (const auto& entry : fs::directory_iterator(root / "d1")) {
    if (slurp(entry.path()) !=
        slurp(root / "d2" / entry.path().filename())) {
      detail = "gen outputs differ: " + entry.path().filename().string();
      return false;
    }
  }

  const std::string bench_flags =
      " bench --methods exact,kiwisort,mc4,max-agreement,min-regret,decor"
      " --dataset " + (root / "d1").string() +
      " --oracle exact --format csv --seed 1234 --omit-times --out ";
  if (run_cli(q + bench_flags + (root / "r1.csv").string() + quiet) != 0 ||
      run_cli(q + bench_flags + (root / "r2.csv").string() + quiet) != 0) {
    detail = "bench failed";
    return false;
  }
  const bool results_same = slurp(root / "r1.csv") == slurp(root / "r2.csv");
  const bool summary_same =
      slurp(root / "r1_summary.csv") == slurp(root / "r2_summary.csv");

  // Oracle dominance inside the same report: exact rows must carry gap 0.
  std::istringstream rows(slurp(root / "r1.csv"));
  std::string line;
  std::getline(rows, line);
  bool exact_gaps_zero = true;
  while (std::getline(rows, line)) {
    if (line.find(",exact,") == std::string::npos) continue;
    if (line.find(",true,") == std::string::npos ||
        line.find(",0.0,") == std::string::npos) {
      exact_gaps_zero = false;
    }
  }

  fs::remove_all(root);
  const bool pass = results_same && summary_same && exact_gaps_zero;
  detail = std::string("gen byte-identical: yes; bench results ") +
           (results_same ? "identical" : "DIFFER") + ", summary " +
           (summary_same ? "identical" : "DIFFER") + ", exact gaps zero: " +
           (exact_gaps_zero ? "yes" : "no");
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::vector<int> selected;
  for (int i = 2; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  const auto wanted = [&](int id) {
    return selected.empty() ||
           std::find(selected.begin(), selected.end(), id) != selected.end();
  };

  struct Entry {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "oracle equivalence", criterion1},
      {2, "metric kernels", criterion2},
      {3, "heuristic dominance and quality", criterion3},
      {4, "generator fidelity", criterion4},
      {5, "autodiff soundness", criterion5},
      {6, "decoder contract", criterion6},
      {7, "desk-scale training efficacy", criterion7},
      {8, "scaling shape", criterion8},
      {9, "t-test correctness", criterion9},
      {10, "reproducibility",
       [&cli](std::string& d) {
         if (cli.empty()) {
           d = "CLI path missing (pass it as argv[1])";
           return false;
         }
         return criterion10(cli, d);
       }},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    if (!wanted(e.id)) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = e.run(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    if (!ok) ++failures;
    std::printf("criterion %2d (%s): %s  [%s]\n", e.id, e.name,
                ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

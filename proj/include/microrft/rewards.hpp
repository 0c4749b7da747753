#pragma once

// Reward model: format reward, trajectory reward with per-second temperatures,
// knowledge reward (critic verdict + semantic similarity) and the joint total.
// All functions are pure; reward evaluation across a group may run in parallel.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "microrft/types.hpp"

namespace microrft {

// How waypoints are bucketed into the three per-second displacements. The
// trajectory has two waypoints per second; pair_mean averages both, endpoint
// keeps only the last waypoint of each second.
enum class SecondBucket { pair_mean, endpoint };

struct RewardConfig {
  double w_q{0.9};
  double w_s{0.1};
  double critic_threshold{0.5};
  std::array<double, 3> temperatures{0.7, 0.7, 0.3};
  double format_weight{1.0}; // 0 disables the format reward
  // Base of the first trajectory-reward term. The formula mixes base 5 for
  // the 1 s term with base e for the rest; e is selectable for ablation.
  double traj_base{5.0};
  SecondBucket bucket{SecondBucket::pair_mean};

  void validate() const {
    if (w_q < 0.0 || w_s < 0.0) throw std::invalid_argument("reward weights must be >= 0");
    if (!(critic_threshold > 0.0 && critic_threshold < 1.0)) {
      throw std::invalid_argument("critic_threshold must be in (0, 1)");
    }
    for (double t : temperatures) {
      if (!(t > 0.0)) throw std::invalid_argument("temperatures must be > 0");
    }
    if (format_weight != 0.0 && format_weight != 1.0) {
      throw std::invalid_argument("format_weight must be 0 or 1");
    }
    if (!(traj_base > 1.0)) throw std::invalid_argument("traj_base must be > 1");
  }
};

// 1 iff the response carries exactly one think block and one answer block.
inline double format_reward(const ReasonedResponse& r) { return r.well_formed ? 1.0 : 0.0; }

// Per-second displacements d_1..d_3 in meters between prediction and ground
// truth. Second n owns waypoints 2n-2 and 2n-1 (0-based).
inline std::array<double, 3> per_second_displacements(const Trajectory& pred,
                                                      const Trajectory& gt,
                                                      SecondBucket bucket = SecondBucket::pair_mean) {
  std::array<double, 3> d{};
  for (int n = 0; n < 3; ++n) {
    const int a = 2 * n, b = 2 * n + 1;
    const double da = std::hypot(pred.points[a].x - gt.points[a].x, pred.points[a].y - gt.points[a].y);
    const double db = std::hypot(pred.points[b].x - gt.points[b].x, pred.points[b].y - gt.points[b].y);
    d[n] = bucket == SecondBucket::pair_mean ? 0.5 * (da + db) : db;
  }
  return d;
}

// base^(-d1*T1) + e^(-d2*T2) + e^(-d3*T3), base 5 by default. Always in (0, 3].
inline double trajectory_reward(const std::array<double, 3>& d, const RewardConfig& cfg) {
  return std::pow(cfg.traj_base, -d[0] * cfg.temperatures[0]) +
         std::exp(-d[1] * cfg.temperatures[1]) +
         std::exp(-d[2] * cfg.temperatures[2]);
}

struct KnowledgeReward {
  double r_qwen3{0.0};
  double r_know{0.0};
};

// r_qwen3 thresholds the critic probability (strictly greater); r_know is the
// weighted sum of the thresholded verdict and the semantic similarity.
inline KnowledgeReward knowledge_reward(double critic_prob, double semantic_sim,
                                        const RewardConfig& cfg) {
  KnowledgeReward k;
  k.r_qwen3 = critic_prob > cfg.critic_threshold ? 1.0 : 0.0;
  k.r_know = cfg.w_q * k.r_qwen3 + cfg.w_s * semantic_sim;
  return k;
}

// Task-appropriate reward inputs. Knowledge tasks carry critic probability
// and semantic similarity; the trajectory task carries the decoded answer (a
// missing value means the answer did not parse and earns zero).
struct RewardInputs {
  std::optional<double> critic_prob;
  std::optional<double> semantic_sim;
  std::optional<Trajectory> decoded_trajectory;
};

// Joint reward. Failures never throw, they just contribute zero: a reward
// model that aborts on degenerate samples would abort the whole RL loop.
inline RewardBreakdown total_reward(const Sample& sample, const ReasonedResponse& response,
                                    const RewardInputs& in, const RewardConfig& cfg) {
  const double r_fmt = cfg.format_weight * format_reward(response);
  double r_qwen3 = 0.0, r_semantic = 0.0, r_know = 0.0, r_traj = 0.0;
  if (sample.task == TaskKind::trajectory) {
    if (in.decoded_trajectory && sample.gt_trajectory) {
      const auto d = per_second_displacements(*in.decoded_trajectory, *sample.gt_trajectory, cfg.bucket);
      r_traj = trajectory_reward(d, cfg);
    }
  } else {
    const double prob = in.critic_prob.value_or(0.0);
    double sim = in.semantic_sim.value_or(0.0);
    sim = sim < 0.0 ? 0.0 : (sim > 1.0 ? 1.0 : sim);
    const auto k = knowledge_reward(prob, sim, cfg);
    r_qwen3 = k.r_qwen3;
    r_semantic = sim;
    r_know = k.r_know;
  }
  return RewardBreakdown::make(r_qwen3, r_semantic, r_know, r_traj, r_fmt);
}

} // namespace microrft

#pragma once

#include <optional>

#include "samarl/checkpoint.hpp"
#include "samarl/metrics.hpp"

namespace samarl::eval {

enum class PolicyKind { Samarl, SamarlPpo, OrcaBaseline, Random };

/// Accepts "SAMARL", "SAMARL-PPO", "ORCA-baseline", "Random"; throws
/// MetricsError otherwise.
PolicyKind policy_from_name(const std::string& name);
std::string policy_name(PolicyKind kind);

struct EvalReport {
  PolicyKind policy = PolicyKind::Random;
  std::vector<EpisodeSummary> summaries;
  double success_rate = 0.0;
  double social_score = 0.0;  // proxy aggregation, equal weights
  std::string table;          // human-readable metrics table
  std::string csv;            // same numbers, machine-readable
};

/// Rolls out one episode under the given policy and returns its log.
/// Learned policies act deterministically (Gaussian means).
EpisodeLog run_episode(const ScenarioConfig& config, PolicyKind kind,
                       const nn::Checkpoint* ckpt, std::uint64_t seed);

/// Deterministic per-seed evaluation. Learned policies require `ckpt`.
/// When `out_dir` is set, writes case_<seed>.jsonl per episode plus
/// report.csv and report.txt.
EvalReport run_policy_eval(PolicyKind kind, const ScenarioConfig& config,
                           const std::vector<std::uint64_t>& seeds,
                           const nn::Checkpoint* ckpt,
                           const std::optional<std::string>& out_dir);

}  // namespace samarl::eval

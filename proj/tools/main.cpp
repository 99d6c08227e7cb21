#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "samarl/plot.hpp"
#include "samarl/runner.hpp"
#include "samarl/trainer.hpp"

namespace fs = std::filesystem;
using namespace samarl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckpoint = 3;

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ScenarioConfig cfg = scenario_config_from_json(text);
  cfg.validate();
  return cfg;
}

int run_train(const std::string& config_path, std::uint64_t seed, const std::string& out,
              int episodes, int d_model, int layers, int hidden, bool single_agent,
              int checkpoint_interval) {
  ScenarioConfig env_cfg = load_config(config_path);
  nn::PolicyConfig pcfg;
  pcfg.encoder.d_model = d_model;
  pcfg.encoder.layers = layers;
  pcfg.hidden = hidden;
  pcfg.single_agent = single_agent;
  marl::TrainConfig tcfg;
  tcfg.seed = seed;
  tcfg.episodes = episodes;

  fs::create_directories(out);
  std::ofstream(out + "/config.json") << scenario_config_to_json(env_cfg) << '\n';

  marl::Trainer trainer(env_cfg, pcfg, tcfg);
  auto save = [&](const std::string& name) {
    nn::save_checkpoint(out + "/" + name, pcfg, trainer.actor(), trainer.critic());
  };
  trainer.train(out + "/diagnostics.csv", [&](const marl::TrainProgress& p) {
    std::cout << "update " << p.update << "  episodes " << p.episodes_done
              << "  reward " << p.mean_episode_reward << "  success "
              << p.success_fraction << '\n';
    if (checkpoint_interval > 0 && p.update % checkpoint_interval == 0)
      save("checkpoint_" + std::to_string(p.episodes_done) + ".json");
    return false;
  });
  save("checkpoint_final.json");
  std::cout << "wrote " << out << "/checkpoint_final.json\n";
  return kExitOk;
}

int run_eval(const std::string& config_path, const std::string& policy,
             const std::string& checkpoint, int cases, std::uint64_t seed,
             const std::string& out) {
  ScenarioConfig cfg = load_config(config_path);
  eval::PolicyKind kind = eval::policy_from_name(policy);

  std::optional<nn::Checkpoint> ckpt;
  if (kind == eval::PolicyKind::Samarl || kind == eval::PolicyKind::SamarlPpo) {
    if (checkpoint.empty())
      throw nn::CheckpointError("policy " + policy + " requires --checkpoint");
    ckpt = nn::load_checkpoint(checkpoint);
  }

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cases; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
  auto report = eval::run_policy_eval(kind, cfg, seeds, ckpt ? &*ckpt : nullptr,
                                      out.empty() ? std::nullopt
                                                  : std::optional<std::string>(out));
  std::cout << report.table;
  return kExitOk;
}

int run_rollout(const std::string& config_path, const std::string& policy,
                const std::string& checkpoint, std::uint64_t seed, const std::string& out) {
  ScenarioConfig cfg = load_config(config_path);
  eval::PolicyKind kind = eval::policy_from_name(policy);
  std::optional<nn::Checkpoint> ckpt;
  if (kind == eval::PolicyKind::Samarl || kind == eval::PolicyKind::SamarlPpo) {
    if (checkpoint.empty())
      throw nn::CheckpointError("policy " + policy + " requires --checkpoint");
    ckpt = nn::load_checkpoint(checkpoint);
  }
  EpisodeLog log = eval::run_episode(cfg, kind, ckpt ? &*ckpt : nullptr, seed);
  fs::create_directories(out);
  const std::string path = out + "/episode_" + std::to_string(seed) + ".jsonl";
  write_episode_log(path, log);
  std::cout << path << "  status=" << to_string(log.final_status) << "  steps="
            << log.steps.size() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"samarl: multi-robot socially aware navigation benchmark"};
  app.require_subcommand(1);

  std::string config_path, checkpoint, out, policy = "SAMARL", log_path;
  std::uint64_t seed = 0;
  int cases = 100, episodes = 2000, d_model = 64, layers = 2, hidden = 64;
  int checkpoint_interval = 0;
  bool single_agent = false;

  auto* train = app.add_subcommand("train", "train a policy");
  train->add_option("--config", config_path, "scenario config JSON")->required();
  train->add_option("--seed", seed, "training seed");
  train->add_option("--out", out, "output directory")->required();
  train->add_option("--episodes", episodes, "total training episodes");
  train->add_option("--d-model", d_model, "encoder width");
  train->add_option("--layers", layers, "encoder depth");
  train->add_option("--hidden", hidden, "head hidden width");
  train->add_flag("--single-agent", single_agent, "single-agent ablation critics");
  train->add_option("--checkpoint-interval", checkpoint_interval,
                    "updates between checkpoints (0 = final only)");

  auto* evalc = app.add_subcommand("eval", "evaluate a policy over many cases");
  evalc->add_option("--config", config_path, "scenario config JSON")->required();
  evalc->add_option("--policy", policy, "SAMARL | SAMARL-PPO | ORCA-baseline | Random");
  evalc->add_option("--checkpoint", checkpoint, "checkpoint JSON for learned policies");
  evalc->add_option("--cases", cases, "number of evaluation cases");
  evalc->add_option("--seed", seed, "first case seed");
  evalc->add_option("--out", out, "directory for logs and reports");

  auto* rollout = app.add_subcommand("rollout", "roll out and log a single episode");
  rollout->add_option("--config", config_path, "scenario config JSON")->required();
  rollout->add_option("--policy", policy, "SAMARL | SAMARL-PPO | ORCA-baseline | Random");
  rollout->add_option("--checkpoint", checkpoint, "checkpoint JSON for learned policies");
  rollout->add_option("--seed", seed, "episode seed");
  rollout->add_option("--out", out, "output directory")->required();

  auto* plot = app.add_subcommand("plot", "render an episode log as SVG");
  plot->add_option("log", log_path, "episode JSONL path")->required();
  plot->add_option("--out", out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train)
      return run_train(config_path, seed, out, episodes, d_model, layers, hidden,
                       single_agent, checkpoint_interval);
    if (*evalc) return run_eval(config_path, policy, checkpoint, cases, seed, out);
    if (*rollout) return run_rollout(config_path, policy, checkpoint, seed, out);
    if (*plot) {
      eval::plot_episode(log_path, out);
      std::cout << out << '\n';
      return kExitOk;
    }
  } catch (const nn::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return kExitCheckpoint;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

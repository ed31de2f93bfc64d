// experiment front door: simulate | train | evaluate | oracle-check | sweep
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rasim/config.hpp"
#include "rasim/engine.hpp"
#include "rasim/metrics.hpp"
#include "rasim/oracle.hpp"
#include "rasim/rl/trainer.hpp"

namespace {

using namespace rasim;

// keeps loaded agents alive next to the policy that points at them
struct PolicyBox {
  std::vector<PpoAgent> agents;
  std::unique_ptr<Policy> policy;
};

std::string with_type(const std::string& pattern, int e) {
  const auto pos = pattern.find("{e}");
  if (pos == std::string::npos)
    throw std::invalid_argument("parallel checkpoints need a {e} placeholder in --checkpoint");
  std::string out = pattern;
  out.replace(pos, 3, std::to_string(e));
  return out;
}

std::unique_ptr<PolicyBox> make_policy(const std::string& name, const std::string& checkpoint,
                                       const ExperimentConfig& cfg, const RegionTopology& topo) {
  auto box = std::make_unique<PolicyBox>();
  if (name == "random") {
    box->policy = std::make_unique<RandomPolicy>();
  } else if (name == "uniform") {
    box->policy = std::make_unique<UniformPolicy>();
  } else if (name == "proportional") {
    box->policy = std::make_unique<ProportionalPolicy>();
  } else if (name == "agent") {
    if (checkpoint.empty()) throw std::invalid_argument("--policy agent requires --checkpoint");
    const bool parallel = cfg.rl.mode == "parallel";
    StateBuilder builder(topo, cfg.lookahead, !parallel);
    if (parallel) {
      box->agents.reserve(topo.num_types());
      for (int e = 0; e < topo.num_types(); ++e)
        box->agents.push_back(PpoAgent::load(with_type(checkpoint, e), nullptr));
    } else {
      box->agents.push_back(PpoAgent::load(checkpoint, nullptr));
    }
    for (const auto& agent : box->agents) {
      if (agent.config().state_dim != builder.dim())
        throw std::invalid_argument("checkpoint state_dim " +
                                    std::to_string(agent.config().state_dim) +
                                    " does not match config state_dim " +
                                    std::to_string(builder.dim()));
      if (agent.config().action_dim != topo.params().msbs + 1)
        throw std::invalid_argument("checkpoint action_dim " +
                                    std::to_string(agent.config().action_dim) +
                                    " does not match msbs+1 = " +
                                    std::to_string(topo.params().msbs + 1));
    }
    if (parallel)
      box->policy = std::make_unique<PerTypePolicy>(box->agents, builder);
    else
      box->policy = std::make_unique<TrainedPolicy>(box->agents[0], builder);
  } else {
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected random|uniform|proportional|agent)");
  }
  return box;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

void print_report(const EvalReport& rep) {
  std::vector<double> totals = rep.totals;
  double g2 = 0.0, g3 = 0.0;
  long long shortfall = 0;
  for (const auto& ep : rep.episodes) {
    g2 += ep.g2_violations;
    g3 += ep.g3_violations;
    shortfall += ep.shortfall_servers;
  }
  std::printf("episodes=%zu median_total=%.6f g2_violations=%.0f g3_violations=%.0f "
              "shortfall=%lld\n",
              rep.episodes.size(), median(totals), g2, g3, shortfall);
}

void write_eval_outputs(const EvalReport& rep, const std::string& out_dir, bool cdf) {
  ensure_dir(out_dir);
  write_file(out_dir + "/per_step.csv", per_step_csv(rep.episodes));
  write_file(out_dir + "/per_episode.csv", per_episode_csv(rep.episodes));
  if (cdf) write_file(out_dir + "/cdf.csv", cdf_csv(rep.totals));
}

int run_eval(const std::string& config_path, const std::string& policy_name,
             const std::string& checkpoint, const std::string& out_dir, uint64_t* seed,
             int* episodes, bool single_episode) {
  ExperimentConfig cfg = parse_config(config_path);
  if (seed) cfg.seed = *seed;
  if (episodes) cfg.episodes = *episodes;
  if (single_episode) cfg.episodes = 1;
  const RegionTopology topo = build_region(cfg.region, cfg.types);
  auto box = make_policy(policy_name, checkpoint, cfg, topo);
  const EvalReport rep =
      evaluate(*box->policy, topo, cfg.combos, engine_settings(cfg), cfg.episodes, cfg.seed);
  write_eval_outputs(rep, out_dir, !single_episode);
  print_report(rep);
  if (auto* prop = dynamic_cast<ProportionalPolicy*>(box->policy.get());
      prop && prop->fallbacks() > 0)
    std::printf("proportional_fallbacks=%d\n", prop->fallbacks());
  return 0;
}

int run_train(const std::string& config_path, const std::string& out_dir, uint64_t* seed,
              int* episodes) {
  ExperimentConfig cfg = parse_config(config_path);
  if (seed) cfg.seed = *seed;
  if (episodes) cfg.rl.episodes_per_type = *episodes;
  const RegionTopology topo = build_region(cfg.region, cfg.types);
  TrainResult res = train(cfg, topo);
  ensure_dir(out_dir);
  write_file(out_dir + "/curves.csv", curves_csv(res));
  std::map<std::string, std::string> meta{
      {"mode", cfg.rl.mode},
      {"episodes_per_type", std::to_string(cfg.rl.episodes_per_type)},
      {"seed", std::to_string(cfg.seed)},
      {"lookahead", std::to_string(cfg.lookahead)},
  };
  if (res.single_mode) {
    res.agents[0].save(out_dir + "/agent.ckpt", meta);
    std::printf("checkpoint=%s/agent.ckpt\n", out_dir.c_str());
  } else {
    for (size_t e = 0; e < res.agents.size(); ++e) {
      meta["type"] = std::to_string(e);
      res.agents[e].save(with_type(out_dir + "/agent_type{e}.ckpt", static_cast<int>(e)), meta);
    }
    std::printf("checkpoint=%s/agent_type{e}.ckpt\n", out_dir.c_str());
  }
  for (const auto& curve : res.curves) {
    const size_t n = curve.episode_reward.size();
    const size_t tail = n < 20 ? n : 20;
    double last = 0.0;
    for (size_t i = n - tail; i < n; ++i) last += curve.episode_reward[i];
    std::printf("type=%d episodes=%zu final_stage=%d tail_mean_reward=%.6f\n", curve.type, n,
                n ? curve.stage.back() : 0, tail ? last / tail : 0.0);
  }
  if (res.aborted_updates > 0) std::printf("aborted_updates=%d\n", res.aborted_updates);
  return 0;
}

int run_oracle_check(int instances, uint64_t seed, bool verbose) {
  int feasible_checked = 0;
  for (int i = 0; i < instances; ++i) {
    const TinyInstance inst = random_tiny_instance(derive_seed(seed, 0x6f7263ULL, i));
    EngineSettings s;
    s.weights = make_weights(inst.topo.params());
    s.horizon = 1;
    UniformPolicy uniform;
    const Assignment cur = allocate_slot(uniform, inst.topo, inst.demand, inst.prev, s);
    const StepMetrics m = evaluate_step(inst.topo, inst.prev, cur, inst.demand, s.weights);

    double per_type_sum = 0.0;
    for (int e = 0; e < inst.topo.num_types(); ++e)
      per_type_sum += utility_per_type(inst.topo, inst.prev, cur, inst.demand, s.weights, e);
    if (per_type_sum != m.utility)
      throw std::runtime_error("instance " + std::to_string(i) +
                               ": per-type utility decomposition mismatch");

    const OracleResult oracle = exact_single_step(inst.topo, inst.demand, inst.prev, s.weights);
    if (oracle.any_utility > m.utility + 1e-9)
      throw std::runtime_error("instance " + std::to_string(i) + ": oracle " +
                               std::to_string(oracle.any_utility) + " worse than pipeline " +
                               std::to_string(m.utility));
    const bool pipeline_feasible = m.g2_violations == 0 && m.g3_violations == 0;
    if (pipeline_feasible) {
      ++feasible_checked;
      if (!oracle.feasible_found || oracle.feasible_utility > m.utility + 1e-9)
        throw std::runtime_error("instance " + std::to_string(i) +
                                 ": feasible oracle worse than feasible pipeline");
    }
    if (verbose)
      std::printf("instance=%d servers=%d pipeline=%.3f oracle=%.3f feasible=%d\n", i,
                  inst.topo.num_servers(), m.utility, oracle.any_utility,
                  pipeline_feasible ? 1 : 0);
  }
  std::printf("oracle-check instances=%d feasible_pipeline=%d dominance=held\n", instances,
              feasible_checked);
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& policy_name,
              const std::string& checkpoint, const std::string& out_dir,
              std::vector<double> values, uint64_t* seed, int episodes) {
  ExperimentConfig cfg = parse_config(config_path);
  if (seed) cfg.seed = *seed;
  const RegionTopology topo = build_region(cfg.region, cfg.types);
  auto box = make_policy(policy_name, checkpoint, cfg, topo);
  const auto rows = sweep_movement_cost(values, *box->policy, topo, cfg.combos,
                                        engine_settings(cfg), cfg.seed, episodes);
  ensure_dir(out_dir);
  write_file(out_dir + "/sweep.csv", sweep_csv(rows));
  for (const auto& r : rows)
    std::printf("move_cost=%.6g median_total=%.6f median_movements=%.6f median_spread=%.6f "
                "median_redundancy=%.6f\n",
                r.move_cost, r.median_total, r.median_movements, r.median_spread,
                r.median_redundancy);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"region-wide capacity reservation simulator"};
  app.require_subcommand(1);

  std::string config_path, policy_name = "uniform", checkpoint, out_dir = "out";
  uint64_t seed = 0;
  int episodes = 0;
  int instances = 50;
  bool verbose = false;
  std::vector<double> sweep_values{5.0, 10.0, 25.0, 50.0};

  auto add_common = [&](CLI::App* cmd, bool with_policy) {
    cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out-dir", out_dir, "directory for CSV outputs");
    cmd->add_option("--seed", seed, "override [run] seed");
    if (with_policy) {
      cmd->add_option("--policy", policy_name, "random|uniform|proportional|agent");
      cmd->add_option("--checkpoint", checkpoint,
                      "agent checkpoint path; use {e} for per-type files");
    }
  };

  auto* sim = app.add_subcommand("simulate", "run one episode with the chosen policy");
  add_common(sim, true);

  auto* evl = app.add_subcommand("evaluate", "run N episodes and emit CDF report");
  add_common(evl, true);
  evl->add_option("--episodes", episodes, "override [run] episodes");

  auto* trn = app.add_subcommand("train", "train agents per the [rl] section");
  add_common(trn, false);
  trn->add_option("--episodes", episodes, "override rl.episodes_per_type");

  auto* orc = app.add_subcommand("oracle-check", "compare pipeline against the exact optimum");
  orc->add_option("--instances", instances, "number of tiny instances");
  orc->add_option("--seed", seed, "instance generator seed");
  orc->add_flag("--verbose", verbose, "print every instance");

  auto* swp = app.add_subcommand("sweep", "re-evaluate across movement-cost values");
  add_common(swp, true);
  swp->add_option("--values", sweep_values, "movement-cost grid");
  swp->add_option("--episodes", episodes, "episodes per value (default 5)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    uint64_t* seed_ptr = sub->count("--seed") ? &seed : nullptr;
    const CLI::Option* ep_opt = sub->get_option_no_throw("--episodes");
    int* episodes_ptr = ep_opt && ep_opt->count() > 0 ? &episodes : nullptr;
    if (sim->parsed())
      return run_eval(config_path, policy_name, checkpoint, out_dir, seed_ptr, nullptr, true);
    if (evl->parsed())
      return run_eval(config_path, policy_name, checkpoint, out_dir, seed_ptr, episodes_ptr,
                      false);
    if (trn->parsed()) return run_train(config_path, out_dir, seed_ptr, episodes_ptr);
    if (orc->parsed()) return run_oracle_check(instances, seed_ptr ? seed : 1, verbose);
    if (swp->parsed())
      return run_sweep(config_path, policy_name, checkpoint, out_dir, sweep_values, seed_ptr,
                       episodes_ptr ? episodes : 5);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

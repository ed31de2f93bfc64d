#include "rasim/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rasim {

double reward(const TypeSlotCosts& costs, int l, const RewardParams& rp, int stage) {
  const ReservationCosts& rc = costs.per_l.at(l);
  double cost = rp.w1 * costs.o1;
  if (stage >= 1) cost += rp.w2 * rc.o2;
  if (stage >= 2) cost += rp.w3 * rc.o3;
  if (stage >= 3) cost += rp.w4 * rc.o4;
  double penalty = 0.0;
  if (stage >= 4) {
    if (rc.g2_slack < 0.0) penalty += rp.p2;
    penalty += rp.p3 * rc.g3_violations;
  }
  return -cost - penalty;
}

AgentPolicy::AgentPolicy(PpoAgent& agent, StateBuilder builder, bool stochastic)
    : agent_(&agent), builder_(std::move(builder)), stochastic_(stochastic) {}

void AgentPolicy::begin_episode(uint64_t episode_seed, int) {
  rng_ = Rng(derive_seed(episode_seed, 0x616374ULL));
}

PolicyOutput AgentPolicy::decide(const DecisionContext& ctx) {
  std::vector<double> state = builder_.build(ctx);
  PolicyOutput out;
  out.raw_path = true;
  if (stochastic_) {
    Pending p;
    p.l = ctx.l;
    out.raw = agent_->act(state, rng_, false, &p.tr.logp, &p.tr.value);
    p.tr.state = std::move(state);
    p.tr.action = out.raw;
    pending_.push_back(std::move(p));
  } else {
    out.raw = agent_->act(state, rng_, true);
  }
  return out;
}

TrainedPolicy::TrainedPolicy(PpoAgent& agent, StateBuilder builder)
    : agent_(&agent), builder_(std::move(builder)) {}

PolicyOutput TrainedPolicy::decide(const DecisionContext& ctx) {
  PolicyOutput out;
  out.raw_path = true;
  out.raw = agent_->act(builder_.build(ctx), rng_, true);
  return out;
}

PerTypePolicy::PerTypePolicy(std::vector<PpoAgent>& agents, StateBuilder builder)
    : agents_(&agents), builder_(std::move(builder)) {}

PolicyOutput PerTypePolicy::decide(const DecisionContext& ctx) {
  PolicyOutput out;
  out.raw_path = true;
  out.raw = (*agents_)[ctx.e].act(builder_.build(ctx), rng_, true);
  return out;
}

double effective_reward_scale(const ExperimentConfig& cfg) {
  if (cfg.rl.reward_scale > 0.0) return cfg.rl.reward_scale;
  return cfg.region.unit_rru * cfg.region.msbs;
}

namespace {

double window_mean(const std::vector<double>& v, int end, int width) {
  // mean of v[end-width .. end-1]
  double sum = 0.0;
  for (int i = end - width; i < end; ++i) sum += v[i];
  return sum / width;
}

struct Curriculum {
  int stage = 0;
  int stage_start = 0;

  // plateau rule: MA(window) moved less than tol relative over span episodes
  bool should_advance(const std::vector<double>& rewards, const RlParams& rl, int cap) const {
    if (stage >= kCurriculumStages - 1) return false;
    const int n = static_cast<int>(rewards.size());
    const int in_stage = n - stage_start;
    if (cap > 0 && in_stage >= cap) return true;
    if (in_stage < rl.curriculum_window + rl.curriculum_span) return false;
    const double now = window_mean(rewards, n, rl.curriculum_window);
    const double before = window_mean(rewards, n - rl.curriculum_span, rl.curriculum_window);
    return std::abs(now - before) <= rl.curriculum_tol * std::max(std::abs(before), 1e-9);
  }
};

// one type's full training run against its own environment stream
void train_type(PpoAgent& agent, const StateBuilder& builder, const ExperimentConfig& cfg,
                const RegionTopology& topo, int e, uint64_t type_seed, TypeCurve& curve,
                int& aborted_updates) {
  const EngineSettings settings = engine_settings(cfg);
  RewardParams rp;
  rp.w1 = cfg.rl.w1;
  rp.w2 = cfg.rl.w2;
  rp.w3 = cfg.rl.w3;
  rp.w4 = cfg.rl.w4;
  rp.p2 = cfg.rl.p2;
  rp.p3 = cfg.rl.p3;
  rp.gamma = cfg.rl.gamma;
  const double scale = effective_reward_scale(cfg);
  const int episodes = cfg.rl.episodes_per_type;
  const int stage_cap = cfg.rl.curriculum_stage_cap > 0
                            ? cfg.rl.curriculum_stage_cap
                            : std::max(cfg.rl.curriculum_window + cfg.rl.curriculum_span,
                                       episodes / 8);

  Curriculum curriculum;
  if (!cfg.rl.curriculum) curriculum.stage = kCurriculumStages - 1;

  AgentPolicy policy(agent, builder, true);
  std::vector<Transition> batch;
  Rng update_rng(derive_seed(type_seed, 0x757064ULL));
  const std::vector<int> active{e};

  for (int ep = 0; ep < episodes; ++ep) {
    const uint64_t ep_seed = derive_seed(type_seed, 0x747261696eULL, static_cast<uint64_t>(ep));
    const EpisodeTrace trace =
        sample_trace(topo.types(), cfg.combos, cfg.horizon, topo.params().logical, ep_seed);
    policy.begin_episode(ep_seed, ep);

    double ep_reward = 0.0;
    const int stage_now = curriculum.stage;
    auto observer = [&](const SlotView& view) {
      if (policy.pending().empty()) return;
      const TypeSlotCosts costs =
          evaluate_type_slot(topo, *view.prev, *view.cur, *view.demand, settings.weights, e);
      for (auto& p : policy.pending()) {
        p.tr.reward = reward(costs, p.l, rp, stage_now) / scale;
        ep_reward += p.tr.reward;
        batch.push_back(std::move(p.tr));
      }
      policy.pending().clear();
    };

    EpisodeReport report = run_episode(policy, topo, trace, settings, &active, observer);
    if (!batch.empty()) batch.back().done = true;

    curve.episode_reward.push_back(ep_reward);
    curve.episode_utility.push_back(report.total_utility);
    curve.stage.push_back(stage_now);

    if (curriculum.should_advance(curve.episode_reward, cfg.rl, stage_cap)) {
      ++curriculum.stage;
      curriculum.stage_start = static_cast<int>(curve.episode_reward.size());
    }

    if ((ep + 1) % cfg.rl.update_every == 0 && !batch.empty()) {
      const UpdateDiagnostics diag = agent.update(batch, update_rng);
      if (diag.aborted) ++aborted_updates;
      batch.clear();
    }
  }
  if (!batch.empty()) {
    const UpdateDiagnostics diag = agent.update(batch, update_rng);
    if (diag.aborted) ++aborted_updates;
    batch.clear();
  }
}

AgentParams agent_params(const ExperimentConfig& cfg, int state_dim) {
  AgentParams p;
  p.state_dim = state_dim;
  p.action_dim = cfg.region.msbs + 1;
  p.hidden = cfg.rl.hidden;
  p.log_std_init = cfg.rl.log_std_init;
  p.clip = cfg.rl.clip;
  p.lr = cfg.rl.lr;
  p.gamma = cfg.rl.gamma;
  p.lambda = cfg.rl.lambda;
  p.epochs = cfg.rl.epochs;
  p.minibatch = cfg.rl.minibatch;
  return p;
}

}  // namespace

TrainResult train(const ExperimentConfig& cfg, const RegionTopology& topo) {
  TrainResult result;
  result.single_mode = cfg.rl.mode == "single";
  const int E = topo.num_types();

  if (result.single_mode) {
    StateBuilder builder(topo, cfg.lookahead, true);
    result.agents.emplace_back(agent_params(cfg, builder.dim()),
                               derive_seed(cfg.seed, 0x6167656eULL));
    for (int e = 0; e < E; ++e) {
      TypeCurve curve;
      curve.type = e;
      train_type(result.agents[0], builder, cfg, topo, e,
                 derive_seed(cfg.seed, 0x73696e67ULL, static_cast<uint64_t>(e)), curve,
                 result.aborted_updates);
      result.curves.push_back(std::move(curve));
    }
  } else {
    StateBuilder builder(topo, cfg.lookahead, false);
    for (int e = 0; e < E; ++e) {
      const uint64_t type_seed = derive_seed(cfg.seed, 0x706172ULL, static_cast<uint64_t>(e));
      result.agents.emplace_back(agent_params(cfg, builder.dim()),
                                 derive_seed(type_seed, 0x6167656eULL));
      TypeCurve curve;
      curve.type = e;
      train_type(result.agents.back(), builder, cfg, topo, e, type_seed, curve,
                 result.aborted_updates);
      result.curves.push_back(std::move(curve));
    }
  }
  return result;
}

std::string curves_csv(const TrainResult& result) {
  std::string out = "type,episode,reward,utility,stage\n";
  char buf[96];
  for (const auto& curve : result.curves) {
    for (size_t i = 0; i < curve.episode_reward.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%d\n", curve.type, i,
                    curve.episode_reward[i], curve.episode_utility[i], curve.stage[i]);
      out += buf;
    }
  }
  return out;
}

}  // namespace rasim

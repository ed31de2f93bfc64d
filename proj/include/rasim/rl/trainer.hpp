#pragma once

#include <string>
#include <vector>

#include "rasim/config.hpp"
#include "rasim/engine.hpp"
#include "rasim/rl/agent.hpp"
#include "rasim/rl/state.hpp"

namespace rasim {

struct RewardParams {
  double w1 = 1.0, w2 = 1.0, w3 = 1.0, w4 = 1.0;
  double p2 = 50.0;  // redundancy-violation penalty
  double p3 = 50.0;  // affinity-violation penalty per datacenter
  double gamma = 0.99;
};

// curriculum stages activate terms cumulatively: 0 movement, 1 +rack spread,
// 2 +msb spread, 3 +redundancy buffer, 4 +constraint penalties
inline constexpr int kCurriculumStages = 5;

// negated per-reservation cost of one slot for the trained type
double reward(const TypeSlotCosts& costs, int l, const RewardParams& rp, int stage);

// Policy adapter around a PPO agent. In stochastic mode it keeps the slot's
// transitions pending until the trainer assigns rewards.
class AgentPolicy : public Policy {
 public:
  struct Pending {
    Transition tr;
    int l = 0;
  };

  AgentPolicy(PpoAgent& agent, StateBuilder builder, bool stochastic);

  void begin_episode(uint64_t episode_seed, int episode_index) override;
  PolicyOutput decide(const DecisionContext& ctx) override;

  std::vector<Pending>& pending() { return pending_; }

 private:
  PpoAgent* agent_;
  StateBuilder builder_;
  bool stochastic_;
  Rng rng_{1};
  std::vector<Pending> pending_;
};

struct TypeCurve {
  int type = 0;
  std::vector<double> episode_reward;   // scaled reward total per episode
  std::vector<double> episode_utility;  // objective total (this type only)
  std::vector<int> stage;               // curriculum stage each episode ran at
};

struct TrainResult {
  bool single_mode = true;
  std::vector<PpoAgent> agents;  // one (single) or per type (parallel)
  std::vector<TypeCurve> curves;
  int aborted_updates = 0;
};

TrainResult train(const ExperimentConfig& cfg, const RegionTopology& topo);

// learning curves as CSV: type, episode, reward, utility, stage
std::string curves_csv(const TrainResult& result);

double effective_reward_scale(const ExperimentConfig& cfg);

// deterministic evaluation policy for a trained single-mode agent
class TrainedPolicy : public Policy {
 public:
  TrainedPolicy(PpoAgent& agent, StateBuilder builder);
  PolicyOutput decide(const DecisionContext& ctx) override;

 private:
  PpoAgent* agent_;
  StateBuilder builder_;
  Rng rng_{1};
};

// parallel-mode evaluation: one agent per type
class PerTypePolicy : public Policy {
 public:
  PerTypePolicy(std::vector<PpoAgent>& agents, StateBuilder builder);
  PolicyOutput decide(const DecisionContext& ctx) override;

 private:
  std::vector<PpoAgent>* agents_;
  StateBuilder builder_;
  Rng rng_{1};
};

}  // namespace rasim

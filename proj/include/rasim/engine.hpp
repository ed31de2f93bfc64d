#pragma once

#include <functional>
#include <vector>

#include "rasim/allocator.hpp"
#include "rasim/converter.hpp"
#include "rasim/objective.hpp"
#include "rasim/policies.hpp"
#include "rasim/topology.hpp"
#include "rasim/workload.hpp"

namespace rasim {

struct EngineSettings {
  ConverterParams converter;
  CostWeights weights;
  int horizon = 30;
  int lookahead = 5;
};

// everything a policy may consult when deciding for reservation l, type e, slot t
struct DecisionContext {
  const RegionTopology* topo = nullptr;
  const DemandTimeline* timeline = nullptr;
  const Assignment* prev = nullptr;       // committed assignment of slot t-1
  const Grid<double>* demand = nullptr;   // C at slot t
  // same-slot, same-type decisions already taken (index l', valid if decided)
  const std::vector<MsbRequestVector>* slot_requests = nullptr;
  const std::vector<char>* decided = nullptr;
  const std::vector<int>* availability = nullptr;  // free type-e servers per MSB
  int t = 0, l = 0, e = 0, h = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode(uint64_t episode_seed, int episode_index) {
    (void)episode_seed;
    (void)episode_index;
  }
  virtual PolicyOutput decide(const DecisionContext& ctx) = 0;
};

class RandomPolicy : public Policy {
 public:
  void begin_episode(uint64_t episode_seed, int) override {
    rng_ = Rng(derive_seed(episode_seed, 0x72616e64ULL));
  }
  PolicyOutput decide(const DecisionContext& ctx) override {
    return random_policy(rng_, ctx.topo->params().msbs);
  }

 private:
  Rng rng_{1};
};

class UniformPolicy : public Policy {
 public:
  PolicyOutput decide(const DecisionContext& ctx) override {
    return uniform_policy(ctx.topo->params().msbs);
  }
};

class ProportionalPolicy : public Policy {
 public:
  PolicyOutput decide(const DecisionContext& ctx) override {
    int total = 0;
    for (int a : *ctx.availability) total += a;
    if (total == 0) {
      // nothing free anywhere: no proportionality to express, fall back to
      // the uniform request rather than aborting the episode
      ++fallbacks_;
      return uniform_policy(ctx.topo->params().msbs);
    }
    return proportional_policy(*ctx.availability);
  }
  int fallbacks() const { return fallbacks_; }

 private:
  int fallbacks_ = 0;
};

struct TypeStepRow {
  int t = 0, e = 0;
  TypeMetrics metrics;
};

struct SlotView {
  int t = 0;
  const Assignment* prev = nullptr;
  const Assignment* cur = nullptr;
  const Grid<double>* demand = nullptr;
  const std::vector<TypeStepRow>* type_rows = nullptr;  // this slot, active types
};

using SlotObserver = std::function<void(const SlotView&)>;

struct EpisodeReport {
  std::vector<StepMetrics> steps;       // per slot, summed over active types
  std::vector<TypeStepRow> type_steps;  // slot-major, active types only
  double total_utility = 0.0;
  double total_o1 = 0.0, total_o2 = 0.0, total_o3 = 0.0, total_o4 = 0.0;
  int g2_violations = 0, g3_violations = 0;
  long long shortfall_servers = 0;  // requests no rack could hold
  long long decisions = 0;
};

// One full episode: per slot, per active type, per active reservation —
// policy, converter, rack spread; then overflow resolution and the sticky
// materialization; metrics against the previous slot.
EpisodeReport run_episode(Policy& policy, const RegionTopology& topo, const EpisodeTrace& trace,
                          const EngineSettings& settings,
                          const std::vector<int>* active_types = nullptr,
                          const SlotObserver& observer = nullptr);

// Single-slot pipeline from an arbitrary previous assignment; the oracle
// comparisons need this since run_episode always starts empty. Look-ahead
// state items read as zero (no trace behind the demand matrix).
Assignment allocate_slot(Policy& policy, const RegionTopology& topo, const Grid<double>& demand,
                         const Assignment& prev, const EngineSettings& settings,
                         long long* shortfall = nullptr);

struct EvalReport {
  std::vector<EpisodeReport> episodes;
  std::vector<double> totals;  // per-episode total utility, episode order
};

EvalReport evaluate(Policy& policy, const RegionTopology& topo,
                    const std::vector<ComboSpec>& combos, const EngineSettings& settings,
                    int episodes, uint64_t seed);

}  // namespace rasim

#pragma once

#include <string>
#include <vector>

#include "rasim/config.hpp"
#include "rasim/engine.hpp"

namespace rasim {

// CSV payloads; callers pick filenames. All numbers rendered full precision.
std::string per_step_csv(const std::vector<EpisodeReport>& episodes);
std::string per_episode_csv(const std::vector<EpisodeReport>& episodes);
std::string cdf_csv(std::vector<double> totals);  // sorted, percentile (i+1)/N

void write_file(const std::string& path, const std::string& content);

struct SweepRow {
  double move_cost = 0.0;
  double median_total = 0.0;
  double median_movements = 0.0;  // o1 / M_b, median per episode
  double median_spread = 0.0;     // o2 + o3
  double median_redundancy = 0.0;  // o4
};

// re-evaluates the policy at each movement-cost value, 5 episodes each
std::vector<SweepRow> sweep_movement_cost(const std::vector<double>& values, Policy& policy,
                                          const RegionTopology& topo,
                                          const std::vector<ComboSpec>& combos,
                                          EngineSettings settings, uint64_t seed,
                                          int episodes = 5);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace rasim

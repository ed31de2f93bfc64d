#pragma once

#include <vector>

#include "rasim/objective.hpp"
#include "rasim/topology.hpp"

namespace rasim {

// exact minimizers found by enumerating every g1-consistent assignment;
// "any" ignores g2/g3 so callers can compare against infeasible pipelines too
struct OracleResult {
  bool feasible_found = false;
  Assignment best_feasible;
  double feasible_utility = 0.0;
  Assignment best_any;
  double any_utility = 0.0;
};

// single-slot utility optimum by brute force; refuses instances beyond |B| <= 12, |L| <= 3
OracleResult exact_single_step(const RegionTopology& topo, const Grid<double>& c,
                               const Assignment& prev, const CostWeights& w);

struct HorizonResult {
  bool feasible_found = false;
  std::vector<Assignment> best_feasible;
  double feasible_total = 0.0;
  std::vector<Assignment> best_any;
  double any_total = 0.0;
};

// Exact discounted optimum over T <= 3 slots (demands[t] is the slot-t matrix);
// same size bounds plus a total path cap.
HorizonResult exact_horizon(const RegionTopology& topo, const std::vector<Grid<double>>& demands,
                            const Assignment& prev, const CostWeights& w, double gamma);

// a randomly drawn instance small enough to enumerate
struct TinyInstance {
  RegionTopology topo;
  Grid<double> demand;  // logical x 1
  Assignment prev;
};

// Single-type region within the oracle bounds: 2-3 MSBs in one datacenter,
// 4-9 servers, 1-3 reservations, demands in whole server units, random
// (possibly infeasible) previous assignment.
TinyInstance random_tiny_instance(uint64_t seed);

}  // namespace rasim

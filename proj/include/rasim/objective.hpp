#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rasim/topology.hpp"
#include "rasim/util.hpp"

namespace rasim {

// server_id -> reservation_id, kUnassigned for free servers. A dense vector
// makes the one-reservation-per-server rule structural.
using Assignment = std::vector<int32_t>;
inline constexpr int32_t kUnassigned = -1;

inline Assignment empty_assignment(const RegionTopology& topo) {
  return Assignment(topo.num_servers(), kUnassigned);
}

struct CostWeights {
  double beta = 1.0;       // spread-cost weight
  double kappa = 1.0;      // redundancy-buffer weight
  double theta = 2.0;      // affinity slack
  double move_cost = 5.0;  // per-server reassignment cost
  Fraction alpha_rack{1, 75};
  Fraction alpha_msb{1, 15};
  double affinity_default = 1.0;
  // optional per-(d,l,e) affinity targets; empty = affinity_default everywhere
  std::vector<double> affinity;
  int dims_d = 0, dims_l = 0, dims_e = 0;

  double a(int d, int l, int e) const {
    if (affinity.empty()) return affinity_default;
    return affinity[(static_cast<size_t>(d) * dims_l + l) * dims_e + e];
  }
};

CostWeights make_weights(const RegionParams& p);

// spread/redundancy picture of one (reservation, type) pair at one slot
struct ReservationCosts {
  double o2 = 0.0;        // rack spread excess, summed over racks
  double o3 = 0.0;        // msb spread excess, summed over msbs
  double o4 = 0.0;        // largest single-MSB supply
  double g2_slack = 0.0;  // supply - o4 - demand
  int g3_violations = 0;  // datacenters out of affinity tolerance
};

// all reservations of one type in a single pass, plus the type's movement cost
struct TypeSlotCosts {
  double o1 = 0.0;
  std::vector<ReservationCosts> per_l;
};

TypeSlotCosts evaluate_type_slot(const RegionTopology& topo, const Assignment& prev,
                                 const Assignment& cur, const Grid<double>& c,
                                 const CostWeights& w, int e);

struct TypeMetrics {
  double o1 = 0.0, o2 = 0.0, o3 = 0.0, o4 = 0.0;
  double utility = 0.0;
  double redundancy_slack_total = 0.0;
  int g2_violations = 0, g3_violations = 0;
};

TypeMetrics reduce_type(const TypeSlotCosts& costs, const CostWeights& w);

struct StepMetrics {
  double o1 = 0.0;  // movement
  double o2 = 0.0;  // rack spread excess
  double o3 = 0.0;  // msb spread excess
  double o4 = 0.0;  // largest single-MSB supply
  int g2_violations = 0;          // (l,e) pairs with negative redundancy slack
  int g3_violations = 0;          // (d,l,e) triples out of affinity tolerance
  Grid<double> redundancy_slack;  // per (l,e)
  double utility = 0.0;           // o1 + beta*(o2+o3) + kappa*o4
};

// cost of servers leaving reservations between slots; restricted to one type if given
double movement_cost(const RegionTopology& topo, const Assignment& prev, const Assignment& cur,
                     const CostWeights& w, std::optional<int> type_id = std::nullopt);

// per-rack supply above alpha_rack * demand, summed over racks
double rack_spread_cost(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                        int l, int e, const CostWeights& w);

// per-MSB analogue with alpha_msb
double msb_spread_cost(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                       int l, int e, const CostWeights& w);

// largest type-e RRU any single MSB supplies to l
double largest_msb(const RegionTopology& topo, const Assignment& x, int l, int e);

// supply - largest_msb - demand; negative means one MSB failure breaks the reservation
double capacity_redundancy(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                           int l, int e);

// theta - |dc share - affinity target|; theta when demand is zero
double network_affinity(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                        int d, int l, int e, const CostWeights& w);

StepMetrics evaluate_step(const RegionTopology& topo, const Assignment& prev,
                          const Assignment& cur, const Grid<double>& c, const CostWeights& w);

// Eq-13 restriction of the utility to one server type; sums exactly to the total
double utility_per_type(const RegionTopology& topo, const Assignment& prev, const Assignment& cur,
                        const Grid<double>& c, const CostWeights& w, int e);

// independent recount for safety checks: how many servers appear under more
// than one reservation in an explicit pair list
int assignment_conflicts(const std::vector<std::pair<int32_t, int32_t>>& server_reservation_pairs);

}  // namespace rasim

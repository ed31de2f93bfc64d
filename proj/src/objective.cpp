#include "rasim/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace rasim {

CostWeights make_weights(const RegionParams& p) {
  CostWeights w;
  w.beta = p.beta;
  w.kappa = p.kappa;
  w.theta = p.theta;
  w.move_cost = p.move_cost;
  w.alpha_rack = p.alpha_rack;
  w.alpha_msb = p.alpha_msb;
  w.affinity_default = p.redundancy;
  return w;
}

double movement_cost(const RegionTopology& topo, const Assignment& prev, const Assignment& cur,
                     const CostWeights& w, std::optional<int> type_id) {
  if (prev.size() != cur.size() || static_cast<int>(cur.size()) != topo.num_servers())
    throw std::invalid_argument("movement_cost: assignment size mismatch");
  double cost = 0.0;
  for (int b = 0; b < topo.num_servers(); ++b) {
    if (type_id && topo.servers()[b].type != *type_id) continue;
    if (prev[b] != kUnassigned && prev[b] != cur[b]) cost += w.move_cost;
  }
  return cost;
}

namespace {

// dense per-scope supply for one (l, e); RRU
struct Supply {
  std::vector<double> rack, msb, dc;
  double total = 0.0;
};

Supply gather(const RegionTopology& topo, const Assignment& x, int l, int e) {
  Supply s;
  s.rack.assign(topo.params().racks, 0.0);
  s.msb.assign(topo.params().msbs, 0.0);
  s.dc.assign(topo.params().datacenters, 0.0);
  const double u = topo.params().unit_rru;
  for (int b = 0; b < topo.num_servers(); ++b) {
    const auto& sv = topo.servers()[b];
    if (sv.type != e || x[b] != l) continue;
    s.rack[sv.rack] += u;
    s.msb[sv.msb] += u;
    s.dc[sv.datacenter] += u;
    s.total += u;
  }
  return s;
}

}  // namespace

double rack_spread_cost(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                        int l, int e, const CostWeights& w) {
  const Supply s = gather(topo, x, l, e);
  const double limit = w.alpha_rack.times(c(l, e));
  double cost = 0.0;
  for (double v : s.rack) cost += std::max(0.0, v - limit);
  return cost;
}

double msb_spread_cost(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                       int l, int e, const CostWeights& w) {
  const Supply s = gather(topo, x, l, e);
  const double limit = w.alpha_msb.times(c(l, e));
  double cost = 0.0;
  for (double v : s.msb) cost += std::max(0.0, v - limit);
  return cost;
}

double largest_msb(const RegionTopology& topo, const Assignment& x, int l, int e) {
  const Supply s = gather(topo, x, l, e);
  double best = 0.0;
  for (double v : s.msb) best = std::max(best, v);
  return best;
}

double capacity_redundancy(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                           int l, int e) {
  const Supply s = gather(topo, x, l, e);
  double big = 0.0;
  for (double v : s.msb) big = std::max(big, v);
  return s.total - big - c(l, e);
}

double network_affinity(const RegionTopology& topo, const Assignment& x, const Grid<double>& c,
                        int d, int l, int e, const CostWeights& w) {
  const double demand = c(l, e);
  if (demand <= 0.0) return w.theta;
  const Supply s = gather(topo, x, l, e);
  return w.theta - std::abs(s.dc[d] / demand - w.a(d, l, e));
}

TypeSlotCosts evaluate_type_slot(const RegionTopology& topo, const Assignment& prev,
                                 const Assignment& cur, const Grid<double>& c,
                                 const CostWeights& w, int e) {
  if (prev.size() != cur.size() || static_cast<int>(cur.size()) != topo.num_servers())
    throw std::invalid_argument("evaluate_type_slot: assignment size mismatch");
  const int L = topo.params().logical;
  const int K = topo.params().racks;
  const int F = topo.params().msbs;
  const int D = topo.params().datacenters;
  const double u = topo.params().unit_rru;

  TypeSlotCosts out;
  out.per_l.resize(L);
  std::vector<double> rack(static_cast<size_t>(L) * K, 0.0);
  std::vector<double> msb(static_cast<size_t>(L) * F, 0.0);
  std::vector<double> dc(static_cast<size_t>(L) * D, 0.0);
  std::vector<double> total(L, 0.0);

  // touch only this type's servers via the per-MSB index
  for (int f = 0; f < F; ++f) {
    for (int32_t b : topo.servers_in_msb(e, f)) {
      if (prev[b] != kUnassigned && prev[b] != cur[b]) out.o1 += w.move_cost;
      const int32_t l = cur[b];
      if (l == kUnassigned) continue;
      const auto& sv = topo.servers()[b];
      rack[static_cast<size_t>(l) * K + sv.rack] += u;
      msb[static_cast<size_t>(l) * F + f] += u;
      dc[static_cast<size_t>(l) * D + sv.datacenter] += u;
      total[l] += u;
    }
  }

  for (int l = 0; l < L; ++l) {
    ReservationCosts& rc = out.per_l[l];
    const double demand = c(l, e);
    const double rack_limit = w.alpha_rack.times(demand);
    const double msb_limit = w.alpha_msb.times(demand);
    for (int k = 0; k < K; ++k)
      rc.o2 += std::max(0.0, rack[static_cast<size_t>(l) * K + k] - rack_limit);
    double big = 0.0;
    for (int f = 0; f < F; ++f) {
      const double v = msb[static_cast<size_t>(l) * F + f];
      rc.o3 += std::max(0.0, v - msb_limit);
      big = std::max(big, v);
    }
    rc.o4 = big;
    rc.g2_slack = total[l] - big - demand;
    if (demand > 0.0)
      for (int d = 0; d < D; ++d)
        if (w.theta - std::abs(dc[static_cast<size_t>(l) * D + d] / demand - w.a(d, l, e)) < 0.0)
          ++rc.g3_violations;
  }
  return out;
}

TypeMetrics reduce_type(const TypeSlotCosts& costs, const CostWeights& w) {
  TypeMetrics m;
  m.o1 = costs.o1;
  for (const auto& rc : costs.per_l) {
    m.o2 += rc.o2;
    m.o3 += rc.o3;
    m.o4 += rc.o4;
    m.redundancy_slack_total += rc.g2_slack;
    if (rc.g2_slack < 0.0) ++m.g2_violations;
    m.g3_violations += rc.g3_violations;
  }
  m.utility = m.o1 + w.beta * (m.o2 + m.o3) + w.kappa * m.o4;
  return m;
}

StepMetrics evaluate_step(const RegionTopology& topo, const Assignment& prev,
                          const Assignment& cur, const Grid<double>& c, const CostWeights& w) {
  StepMetrics m;
  m.redundancy_slack = Grid<double>(topo.params().logical, topo.num_types(), 0.0);
  for (int e = 0; e < topo.num_types(); ++e) {
    const TypeSlotCosts costs = evaluate_type_slot(topo, prev, cur, c, w, e);
    const TypeMetrics tm = reduce_type(costs, w);
    m.o1 += tm.o1;
    m.o2 += tm.o2;
    m.o3 += tm.o3;
    m.o4 += tm.o4;
    m.g2_violations += tm.g2_violations;
    m.g3_violations += tm.g3_violations;
    for (int l = 0; l < topo.params().logical; ++l)
      m.redundancy_slack(l, e) = costs.per_l[l].g2_slack;
  }
  m.utility = m.o1 + w.beta * (m.o2 + m.o3) + w.kappa * m.o4;
  return m;
}

double utility_per_type(const RegionTopology& topo, const Assignment& prev, const Assignment& cur,
                        const Grid<double>& c, const CostWeights& w, int e) {
  return reduce_type(evaluate_type_slot(topo, prev, cur, c, w, e), w).utility;
}

int assignment_conflicts(const std::vector<std::pair<int32_t, int32_t>>& pairs) {
  std::unordered_map<int32_t, int32_t> seen;
  int conflicts = 0;
  for (const auto& [server, reservation] : pairs) {
    auto [it, inserted] = seen.emplace(server, reservation);
    if (!inserted && it->second != reservation) ++conflicts;
  }
  return conflicts;
}

}  // namespace rasim

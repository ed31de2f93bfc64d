#include "rasim/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rasim {

namespace {

void check_bounds(const RegionTopology& topo) {
  if (topo.num_servers() > 12 || topo.params().logical > 3)
    throw std::invalid_argument("oracle: instance too large (bounds: |B| <= 12, |L| <= 3), got " +
                                std::to_string(topo.num_servers()) + " servers, " +
                                std::to_string(topo.params().logical) + " reservations");
}

// odometer over assignments in lexicographic order, digits -1 < 0 < ... < L-1
bool next_assignment(Assignment& x, int logical) {
  for (int b = static_cast<int>(x.size()) - 1; b >= 0; --b) {
    if (x[b] + 1 < logical) {
      ++x[b];
      return true;
    }
    x[b] = kUnassigned;
  }
  return false;
}

bool feasible(const StepMetrics& m) { return m.g2_violations == 0 && m.g3_violations == 0; }

}  // namespace

OracleResult exact_single_step(const RegionTopology& topo, const Grid<double>& c,
                               const Assignment& prev, const CostWeights& w) {
  check_bounds(topo);
  const int L = topo.params().logical;
  OracleResult out;
  bool any_found = false;
  Assignment x(topo.num_servers(), kUnassigned);
  do {
    const StepMetrics m = evaluate_step(topo, prev, x, c, w);
    if (!any_found || m.utility < out.any_utility) {
      any_found = true;
      out.any_utility = m.utility;
      out.best_any = x;
    }
    if (feasible(m) && (!out.feasible_found || m.utility < out.feasible_utility)) {
      out.feasible_found = true;
      out.feasible_utility = m.utility;
      out.best_feasible = x;
    }
  } while (next_assignment(x, L));
  return out;
}

HorizonResult exact_horizon(const RegionTopology& topo, const std::vector<Grid<double>>& demands,
                            const Assignment& prev, const CostWeights& w, double gamma) {
  check_bounds(topo);
  const int T = static_cast<int>(demands.size());
  if (T < 1 || T > 3) throw std::invalid_argument("oracle: horizon must be 1..3");
  const int L = topo.params().logical;
  double per_slot = std::pow(static_cast<double>(L + 1), topo.num_servers());
  if (std::pow(per_slot, T) > 5e7)
    throw std::invalid_argument("oracle: horizon search space exceeds 5e7 paths");

  HorizonResult out;
  bool any_found = false;
  std::vector<Assignment> seq(T, Assignment(topo.num_servers(), kUnassigned));

  // depth-first over slots; lexicographic order + strict improvement keeps
  // the first (lexicographically least) optimum deterministic
  auto dfs = [&](auto&& self, int t, const Assignment& cur_prev, double acc, bool acc_feasible,
                 double discount) -> void {
    Assignment x(topo.num_servers(), kUnassigned);
    do {
      const StepMetrics m = evaluate_step(topo, cur_prev, x, demands[t], w);
      const double total = acc + discount * m.utility;
      const bool ok = acc_feasible && feasible(m);
      seq[t] = x;
      if (t + 1 == T) {
        if (!any_found || total < out.any_total) {
          any_found = true;
          out.any_total = total;
          out.best_any = seq;
        }
        if (ok && (!out.feasible_found || total < out.feasible_total)) {
          out.feasible_found = true;
          out.feasible_total = total;
          out.best_feasible = seq;
        }
      } else {
        self(self, t + 1, x, total, ok, discount * gamma);
      }
    } while (next_assignment(x, L));
  };
  dfs(dfs, 0, prev, 0.0, true, 1.0);
  return out;
}

TinyInstance random_tiny_instance(uint64_t seed) {
  Rng rng(derive_seed(seed, 0x74696e79ULL));
  RegionParams p;
  p.datacenters = 1;
  p.msbs = 2 + rng.uniform_int(2);                     // 2 or 3
  p.racks = p.msbs * (1 + rng.uniform_int(2));         // 1 or 2 racks per msb
  p.logical = 1 + rng.uniform_int(3);
  p.unit_rru = 150.0;
  p.alpha_msb = Fraction{1, p.msbs};
  p.alpha_rack = Fraction{1, p.racks};

  const int servers = p.logical == 3 ? 4 + rng.uniform_int(4)   // 4^7 paths at most
                                     : 4 + rng.uniform_int(6);  // up to 9
  RegionTopology topo = build_region(p, {ServerTypeSpec{servers, 0.0, 0}});

  Grid<double> demand(p.logical, 1, 0.0);
  bool any = false;
  for (int l = 0; l < p.logical; ++l) {
    demand(l, 0) = p.unit_rru * rng.uniform_int(3);  // 0, 150 or 300
    any = any || demand(l, 0) > 0.0;
  }
  if (!any) demand(rng.uniform_int(p.logical), 0) = p.unit_rru;

  Assignment prev(servers, kUnassigned);
  for (int b = 0; b < servers; ++b) prev[b] = rng.uniform_int(p.logical + 1) - 1;
  return TinyInstance{std::move(topo), std::move(demand), std::move(prev)};
}

}  // namespace rasim

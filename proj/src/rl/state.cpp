#include "rasim/rl/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasim {

StateBuilder::StateBuilder(const RegionTopology& topo, int lookahead, bool type_one_hot)
    : topo_(&topo), h_(lookahead), one_hot_(type_one_hot) {
  const int F = topo.params().msbs;
  dim_ = 1 + 3 * F + 4 * h_ + 2 + (one_hot_ ? topo.num_types() : 0);
}

std::vector<double> StateBuilder::build(const DecisionContext& ctx) const {
  const RegionTopology& topo = *topo_;
  const int F = topo.params().msbs;
  const int L = topo.params().logical;
  const int E = topo.num_types();
  const int e = ctx.e;
  const int l = ctx.l;
  const double scale = std::max(topo.type_capacity(e), 1.0);

  std::vector<double> out;
  out.reserve(dim_);
  out.push_back(static_cast<double>(l) / L);

  // previous holdings per (reservation, msb) in one pass over this type
  std::vector<double> counts(static_cast<size_t>(L) * F, 0.0);
  for (int f = 0; f < F; ++f)
    for (int32_t b : topo.servers_in_msb(e, f))
      if ((*ctx.prev)[b] != kUnassigned) ++counts[static_cast<size_t>((*ctx.prev)[b]) * F + f];

  // projected usage: last slot's occupancy with already-decided reservations
  // replaced by what they just requested
  for (int f = 0; f < F; ++f) {
    const double cap = topo.count_in_msb(e, f);
    if (cap <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    double used = cap - (*ctx.availability)[f];
    for (int lp = 0; lp < L; ++lp) {
      if (!(*ctx.decided)[lp]) continue;
      used -= counts[static_cast<size_t>(lp) * F + f];
      used += (*ctx.slot_requests)[lp].n[f];
    }
    out.push_back(std::clamp(used, 0.0, cap) / cap);
  }

  out.push_back((*ctx.demand)(l, e) / scale);

  for (int f = 0; f < F; ++f) {
    const double cap = topo.count_in_msb(e, f);
    out.push_back(cap > 0.0 ? counts[static_cast<size_t>(l) * F + f] / cap : 0.0);
  }

  for (int j = 1; j <= h_; ++j) out.push_back(ctx.timeline->expiring_at(l, e, ctx.t + j) / scale);
  for (int j = 1; j <= h_; ++j) out.push_back(ctx.timeline->arriving_at(l, e, ctx.t + j) / scale);

  const double others = std::max(L - 1, 1);
  double demand_sum = 0.0;
  for (int lp = 0; lp < L; ++lp) demand_sum += (*ctx.demand)(lp, e);
  out.push_back((demand_sum - (*ctx.demand)(l, e)) / others / scale);

  for (int f = 0; f < F; ++f) {
    const double cap = topo.count_in_msb(e, f);
    if (cap <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    double total = 0.0;
    for (int lp = 0; lp < L; ++lp) total += counts[static_cast<size_t>(lp) * F + f];
    out.push_back((total - counts[static_cast<size_t>(l) * F + f]) / others / cap);
  }

  for (int j = 1; j <= h_; ++j) {
    double sum = 0.0;
    for (int lp = 0; lp < L; ++lp) sum += ctx.timeline->expiring_at(lp, e, ctx.t + j);
    out.push_back((sum - ctx.timeline->expiring_at(l, e, ctx.t + j)) / others / scale);
  }
  for (int j = 1; j <= h_; ++j) {
    double sum = 0.0;
    for (int lp = 0; lp < L; ++lp) sum += ctx.timeline->arriving_at(lp, e, ctx.t + j);
    out.push_back((sum - ctx.timeline->arriving_at(l, e, ctx.t + j)) / others / scale);
  }

  if (one_hot_)
    for (int i = 0; i < E; ++i) out.push_back(i == e ? 1.0 : 0.0);

  if (static_cast<int>(out.size()) != dim_)
    throw std::logic_error("state builder produced wrong dimension");
  for (double& v : out) v = std::clamp(v, -1.0, 1.0);
  return out;
}

}  // namespace rasim

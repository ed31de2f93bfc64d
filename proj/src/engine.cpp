#include "rasim/engine.hpp"

#include <numeric>
#include <stdexcept>

namespace rasim {

namespace {

// policy -> converter -> rack spread -> overflow -> materialize for one
// (slot, type); returns the updated assignment via cur
void allocate_type_slot(Policy& policy, const RegionTopology& topo, const DemandTimeline& timeline,
                        const Grid<double>& demand, const Assignment& prev, Assignment& cur,
                        int t, int e, const EngineSettings& settings, long long& decisions,
                        long long& shortfall) {
  const int L = topo.params().logical;
  const int F = topo.params().msbs;
  const int K = topo.params().racks;
  static thread_local std::vector<MsbRequestVector> reqs;
  static thread_local std::vector<char> decided;
  static thread_local std::vector<int> avail;
  reqs.assign(L, MsbRequestVector{});
  decided.assign(L, 0);
  avail.assign(F, 0);

  for (int f = 0; f < F; ++f) {
    int used = 0;
    for (int32_t b : topo.servers_in_msb(e, f))
      if (prev[b] != kUnassigned) ++used;
    avail[f] = topo.count_in_msb(e, f) - used;
  }

  Grid<int> m(L, K, 0);
  for (int l = 0; l < L; ++l) {
    const double c_le = demand(l, e);
    if (c_le <= 0.0) continue;
    DecisionContext ctx;
    ctx.topo = &topo;
    ctx.timeline = &timeline;
    ctx.prev = &prev;
    ctx.demand = &demand;
    ctx.slot_requests = &reqs;
    ctx.decided = &decided;
    ctx.availability = &avail;
    ctx.t = t;
    ctx.l = l;
    ctx.e = e;
    ctx.h = settings.lookahead;
    const PolicyOutput out = policy.decide(ctx);
    ++decisions;
    reqs[l] = out.raw_path ? convert(out.raw, settings.converter, c_le, e, topo)
                           : to_server_counts(out.fractions, out.z, c_le, e, topo);
    decided[l] = 1;
    const auto row = spread_across_racks(reqs[l], prev, l, e, topo);
    for (int k = 0; k < K; ++k) m(l, k) = row[k];
  }
  RackRequestMatrix resolved = resolve_overflow(std::move(m), topo, e);
  for (int s : resolved.shortfall) shortfall += s;
  cur = materialize(resolved.m, cur, e, topo);
}

}  // namespace

EpisodeReport run_episode(Policy& policy, const RegionTopology& topo, const EpisodeTrace& trace,
                          const EngineSettings& settings, const std::vector<int>* active_types,
                          const SlotObserver& observer) {
  const int L = topo.params().logical;
  const int E = topo.num_types();
  const CostWeights& w = settings.weights;

  std::vector<int> types;
  if (active_types) {
    types = *active_types;
  } else {
    types.resize(E);
    std::iota(types.begin(), types.end(), 0);
  }

  const DemandTimeline timeline(trace);
  EpisodeReport report;
  Assignment prev = empty_assignment(topo);
  Grid<double> demand(L, E, 0.0);
  std::vector<TypeStepRow> slot_rows;

  for (int t = 0; t < settings.horizon; ++t) {
    for (int l = 0; l < L; ++l)
      for (int e = 0; e < E; ++e) demand(l, e) = timeline.demand(l, e, t);

    Assignment cur = prev;
    slot_rows.clear();
    for (int e : types) {
      allocate_type_slot(policy, topo, timeline, demand, prev, cur, t, e, settings,
                         report.decisions, report.shortfall_servers);
      TypeStepRow row;
      row.t = t;
      row.e = e;
      row.metrics = reduce_type(evaluate_type_slot(topo, prev, cur, demand, w, e), w);
      slot_rows.push_back(row);
    }

    StepMetrics sm;
    sm.redundancy_slack = Grid<double>(L, E, 0.0);
    for (const auto& row : slot_rows) {
      sm.o1 += row.metrics.o1;
      sm.o2 += row.metrics.o2;
      sm.o3 += row.metrics.o3;
      sm.o4 += row.metrics.o4;
      sm.g2_violations += row.metrics.g2_violations;
      sm.g3_violations += row.metrics.g3_violations;
    }
    sm.utility = sm.o1 + w.beta * (sm.o2 + sm.o3) + w.kappa * sm.o4;

    if (observer) {
      SlotView view;
      view.t = t;
      view.prev = &prev;
      view.cur = &cur;
      view.demand = &demand;
      view.type_rows = &slot_rows;
      observer(view);
    }

    report.total_o1 += sm.o1;
    report.total_o2 += sm.o2;
    report.total_o3 += sm.o3;
    report.total_o4 += sm.o4;
    report.total_utility += sm.utility;
    report.g2_violations += sm.g2_violations;
    report.g3_violations += sm.g3_violations;
    for (const auto& row : slot_rows) report.type_steps.push_back(row);
    report.steps.push_back(std::move(sm));
    prev = std::move(cur);
  }
  return report;
}

Assignment allocate_slot(Policy& policy, const RegionTopology& topo, const Grid<double>& demand,
                         const Assignment& prev, const EngineSettings& settings,
                         long long* shortfall) {
  EpisodeTrace empty;
  empty.horizon = 1;
  empty.logical = topo.params().logical;
  empty.num_types = topo.num_types();
  const DemandTimeline timeline(empty);
  Assignment cur = prev;
  long long decisions = 0, local_shortfall = 0;
  for (int e = 0; e < topo.num_types(); ++e)
    allocate_type_slot(policy, topo, timeline, demand, prev, cur, 0, e, settings, decisions,
                       local_shortfall);
  if (shortfall) *shortfall = local_shortfall;
  return cur;
}

EvalReport evaluate(Policy& policy, const RegionTopology& topo,
                    const std::vector<ComboSpec>& combos, const EngineSettings& settings,
                    int episodes, uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  EvalReport report;
  for (int i = 0; i < episodes; ++i) {
    const uint64_t ep_seed = derive_seed(seed, 0x657069ULL, static_cast<uint64_t>(i));
    const EpisodeTrace trace = sample_trace(topo.types(), combos, settings.horizon,
                                            topo.params().logical, ep_seed);
    policy.begin_episode(ep_seed, i);
    EpisodeReport ep = run_episode(policy, topo, trace, settings);
    report.totals.push_back(ep.total_utility);
    report.episodes.push_back(std::move(ep));
  }
  return report;
}

}  // namespace rasim

#include "rasim/allocator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rasim {

std::vector<int> spread_across_racks(const MsbRequestVector& req, const Assignment& prev, int l,
                                     int e, const RegionTopology& topo) {
  const int K = topo.params().racks;
  const int F = topo.params().msbs;
  const int rpm = topo.racks_per_msb();
  if (static_cast<int>(req.n.size()) != F)
    throw std::invalid_argument("spread_across_racks: request length != msbs");
  std::vector<int> row(K, 0);
  std::vector<int> order(rpm);
  std::vector<int> held(rpm);
  for (int f = 0; f < F; ++f) {
    const int n = req.n[f];
    if (n <= 0) continue;
    const int base = f * rpm;
    for (int j = 0; j < rpm; ++j) {
      order[j] = j;
      held[j] = 0;
      for (int32_t b : topo.servers_in_rack(e, base + j))
        if (prev[b] == l) ++held[j];
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (held[a] != held[b]) return held[a] > held[b];
      return a < b;
    });
    const int p = n / rpm;
    const int q = n % rpm;
    for (int j = 0; j < rpm; ++j) row[base + order[j]] = p + (j < q ? 1 : 0);
  }
  return row;
}

RackRequestMatrix resolve_overflow(Grid<int> m, const RegionTopology& topo, int e) {
  const int L = m.rows();
  const int K = topo.params().racks;
  const int rpm = topo.racks_per_msb();
  if (m.cols() != K) throw std::invalid_argument("resolve_overflow: matrix width != racks");

  std::vector<int> cap(K), load(K, 0);
  for (int k = 0; k < K; ++k) cap[k] = topo.count_in_rack(e, k);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) load[k] += m(l, k);

  RackRequestMatrix out;
  out.shortfall.assign(L, 0);

  // greedy placement of w displaced servers for reservation l into candidate
  // racks ordered by vacancy descending, rack id ascending; returns leftover
  auto place = [&](int l, int w, int lo, int hi, int skip) {
    while (w > 0) {
      int best = -1, best_vac = 0;
      for (int k = lo; k < hi; ++k) {
        if (k == skip) continue;
        const int vac = cap[k] - load[k];
        if (vac > best_vac) {
          best_vac = vac;
          best = k;
        }
      }
      if (best < 0) break;
      const int take = std::min(w, best_vac);
      m(l, best) += take;
      load[best] += take;
      w -= take;
    }
    return w;
  };

  for (int k = 0; k < K; ++k) {
    int overflow = load[k] - cap[k];
    if (overflow <= 0) continue;
    const int msb_lo = (k / rpm) * rpm;
    for (int l = L - 1; l >= 0 && overflow > 0; --l) {
      const int w = std::min(m(l, k), overflow);
      if (w == 0) continue;
      m(l, k) -= w;
      load[k] -= w;
      overflow -= w;
      int rest = place(l, w, msb_lo, msb_lo + rpm, k);  // same MSB first
      if (rest > 0) rest = place(l, rest, 0, K, k);
      out.shortfall[l] += rest;
    }
  }
  out.m = std::move(m);
  return out;
}

Assignment materialize(const Grid<int>& m, const Assignment& prev, int e,
                       const RegionTopology& topo) {
  const int L = m.rows();
  const int K = topo.params().racks;
  Assignment out = prev;
  std::vector<int> quota(L);
  std::vector<int32_t> holders, pool;
  for (int k = 0; k < K; ++k) {
    const auto& servers = topo.servers_in_rack(e, k);
    int remaining = 0;
    for (int l = 0; l < L; ++l) {
      quota[l] = m(l, k);
      remaining += quota[l];
    }
    if (remaining > static_cast<int>(servers.size()))
      throw std::logic_error("materialize: requests exceed rack capacity");
    pool.clear();
    for (int32_t b : servers) out[b] = kUnassigned;
    // sticky pass per reservation: keep highest-id holders up to quota,
    // release the rest (lowest id first) into the fill pool
    for (int l = 0; l < L; ++l) {
      holders.clear();
      for (int32_t b : servers)
        if (prev[b] == l) holders.push_back(b);
      const int keep = std::min<int>(quota[l], static_cast<int>(holders.size()));
      const int drop = static_cast<int>(holders.size()) - keep;
      for (int i = drop; i < static_cast<int>(holders.size()); ++i) {
        out[holders[i]] = l;
        --quota[l];
      }
    }
    for (int32_t b : servers)
      if (out[b] == kUnassigned) pool.push_back(b);  // already ascending id
    // fill pass: remaining quota takes free servers in ascending id
    size_t next = 0;
    for (int l = 0; l < L; ++l) {
      while (quota[l] > 0) {
        out[pool[next++]] = l;
        --quota[l];
      }
    }
  }
  return out;
}

}  // namespace rasim

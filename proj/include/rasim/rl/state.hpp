#pragma once

#include <vector>

#include "rasim/engine.hpp"
#include "rasim/topology.hpp"

namespace rasim {

// Builds the normalized observation for one (reservation, type, slot)
// decision. Layout: [l/L | msb usage (F) | own demand | own prev counts (F) |
// own expiring (h) | own arriving (h) | mean-other demand | mean-other
// counts (F) | mean-other expiring (h) | mean-other arriving (h) | type
// one-hot (E, single-agent only)]. Every entry is clamped to [-1, 1].
class StateBuilder {
 public:
  StateBuilder(const RegionTopology& topo, int lookahead, bool type_one_hot);

  int dim() const { return dim_; }
  bool type_one_hot() const { return one_hot_; }
  int lookahead() const { return h_; }

  std::vector<double> build(const DecisionContext& ctx) const;

 private:
  const RegionTopology* topo_;
  int h_;
  bool one_hot_;
  int dim_;
};

}  // namespace rasim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rasim/topology.hpp"
#include "rasim/util.hpp"

namespace rasim {

struct ComboEntry {
  double demand = 0.0;   // RRU
  double probability = 0.0;
  int duration = 0;      // slots
};

// One demand pattern: a request drawn against it picks exactly one entry.
struct ComboSpec {
  std::vector<ComboEntry> entries;
};

void validate_combos(const std::vector<ComboSpec>& combos);

struct Request {
  int32_t reservation = 0;  // l
  int32_t type = 0;         // e
  double demand = 0.0;
  int32_t arrival = 0;      // first active slot
  int32_t expiry = 0;       // first inactive slot = arrival + duration
};

struct EpisodeTrace {
  int horizon = 0;
  int logical = 0;
  int num_types = 0;
  std::vector<Request> requests;  // sorted by arrival
};

// Poisson arrivals per type per slot; demand/duration from the type's combo;
// reservation chosen uniformly in [0, logical). Deterministic in seed.
EpisodeTrace sample_trace(const std::vector<ServerTypeSpec>& specs,
                          const std::vector<ComboSpec>& combos, int horizon, int logical,
                          uint64_t seed);

// C_{l,e}(t): demand active at slot t (arrival <= t < expiry), recomputed
// straight from the request list. The timeline below is the fast path.
Grid<double> demand_matrix(const EpisodeTrace& trace, int t);

struct LookAhead {
  std::vector<double> arriving;  // [j-1] = demand arriving exactly at t+j
  std::vector<double> expiring;  // [j-1] = demand expiring exactly at t+j
};

LookAhead look_ahead(const EpisodeTrace& trace, int reservation, int type, int t, int h);

// Precomputed per-slot views of one trace: O(1) demand lookups plus the
// arrival/expiry event sums the look-ahead state items need.
class DemandTimeline {
 public:
  explicit DemandTimeline(const EpisodeTrace& trace);

  int horizon() const { return horizon_; }
  int logical() const { return logical_; }
  int num_types() const { return num_types_; }

  double demand(int reservation, int type, int t) const;
  double arriving_at(int reservation, int type, int t) const;  // demand with arrival == t
  double expiring_at(int reservation, int type, int t) const;  // demand with expiry == t
  double type_demand(int type, int t) const;                   // sum over reservations

 private:
  size_t cell(int reservation, int type) const {
    return static_cast<size_t>(reservation) * num_types_ + type;
  }
  int horizon_ = 0;
  int logical_ = 0;
  int num_types_ = 0;
  int span_ = 0;  // slots covered including post-horizon expiries
  std::vector<double> active_;    // [t][l][e]
  std::vector<double> arrivals_;  // [t][l][e]
  std::vector<double> expiries_;  // [t][l][e]
};

// line-oriented round-trip format for replay tests
std::string format_trace(const EpisodeTrace& trace);
EpisodeTrace parse_trace(const std::string& text);

}  // namespace rasim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rasim/util.hpp"

namespace rasim {

// Scope levels of the datacenter hierarchy, ordered coarse to fine.
enum class Scope { kRegion = 0, kDatacenter = 1, kMsb = 2, kRack = 3 };

struct ServerTypeSpec {
  int count = 0;          // servers of this type region-wide
  double arrival_rate = 0.0;  // mean reservation arrivals per slot
  int combo_id = 0;       // demand profile id for generated requests
};

struct Server {
  int32_t id = 0;
  int16_t type = 0;
  int16_t datacenter = 0;
  int16_t msb = 0;
  int16_t rack = 0;
};

struct RegionParams {
  int datacenters = 3;
  int msbs = 15;          // region-wide, spread evenly over datacenters
  int racks = 75;         // region-wide, spread evenly over MSBs
  int logical = 20;       // reservations tracked per server type
  double unit_rru = 150.0;  // RRU of one server
  Fraction alpha_msb{1, 15};   // MSB spread limit as share of reservation capacity
  Fraction alpha_rack{1, 75};  // rack spread limit
  double kappa = 1.0;     // redundancy weight
  double beta = 1.0;      // spread weight
  double move_cost = 5.0;  // per-server reassignment cost M_b
  double redundancy = 1.0;  // spare-capacity floor A, in servers
  double theta = 2.0;     // utilization-balance tolerance
};

// Immutable physical layout plus the index tables every other module leans on.
class RegionTopology {
 public:
  RegionTopology(const RegionParams& params, const std::vector<ServerTypeSpec>& types);

  const RegionParams& params() const { return params_; }
  const std::vector<ServerTypeSpec>& types() const { return types_; }
  const std::vector<Server>& servers() const { return servers_; }

  int num_types() const { return static_cast<int>(types_.size()); }
  int num_servers() const { return static_cast<int>(servers_.size()); }
  int racks_per_msb() const { return params_.racks / params_.msbs; }
  int msbs_per_dc() const { return params_.msbs / params_.datacenters; }

  int msb_of_rack(int rack) const { return rack / racks_per_msb(); }
  int dc_of_msb(int msb) const { return msb / msbs_per_dc(); }

  // servers of a given type inside one MSB / rack, ascending id
  const std::vector<int32_t>& servers_in_msb(int type, int msb) const {
    return by_type_msb_[static_cast<size_t>(type) * params_.msbs + msb];
  }
  const std::vector<int32_t>& servers_in_rack(int type, int rack) const {
    return by_type_rack_[static_cast<size_t>(type) * params_.racks + rack];
  }

  int count_in_msb(int type, int msb) const {
    return static_cast<int>(servers_in_msb(type, msb).size());
  }
  int count_in_rack(int type, int rack) const {
    return static_cast<int>(servers_in_rack(type, rack).size());
  }
  int count_in_dc(int type, int dc) const {
    return dc_counts_[static_cast<size_t>(type) * params_.datacenters + dc];
  }

  // total RRU of type-e servers in one MSB
  double capacity_in_msb(int type, int msb) const {
    return params_.unit_rru * count_in_msb(type, msb);
  }
  double type_capacity(int type) const { return params_.unit_rru * types_[type].count; }

  // one line per server, stable across runs; used by golden tests
  std::string dump() const;

 private:
  RegionParams params_;
  std::vector<ServerTypeSpec> types_;
  std::vector<Server> servers_;
  std::vector<std::vector<int32_t>> by_type_msb_;
  std::vector<std::vector<int32_t>> by_type_rack_;
  std::vector<int> dc_counts_;
};

// Lays servers out deterministically: types in ascending order, ids in
// placement order, the k-th server overall landing in rack k mod racks.
RegionTopology build_region(const RegionParams& params, const std::vector<ServerTypeSpec>& types);

}  // namespace rasim

#pragma once

#include <vector>

#include "rasim/converter.hpp"
#include "rasim/objective.hpp"
#include "rasim/topology.hpp"

namespace rasim {

// per-(reservation, rack) server requests for one type, plus what could not
// be placed anywhere after capacity resolution
struct RackRequestMatrix {
  Grid<int> m;                 // logical x racks
  std::vector<int> shortfall;  // per reservation
};

// Splits one reservation's per-MSB counts evenly over each MSB's racks,
// favouring racks already serving the reservation (sticky bias), ties by
// rack id. Returns a per-rack row summing to the per-MSB totals exactly.
std::vector<int> spread_across_racks(const MsbRequestVector& req, const Assignment& prev, int l,
                                     int e, const RegionTopology& topo);

// Caps every rack at its physical type-e server count: overflow is trimmed
// from the highest reservation index down, re-placed into same-MSB vacancies
// first, then anywhere (vacancy descending, rack id ties); whatever still
// does not fit is recorded as shortfall.
RackRequestMatrix resolve_overflow(Grid<int> m, const RegionTopology& topo, int e);

// Turns a feasible request matrix into server assignments for type e,
// keeping previously-held servers where quota allows (releasing the excess
// lowest-id first) and filling the rest in ascending server id. Entries of
// other types pass through from prev untouched.
Assignment materialize(const Grid<int>& m, const Assignment& prev, int e,
                       const RegionTopology& topo);

}  // namespace rasim

#include "rasim/topology.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace rasim {

RegionTopology::RegionTopology(const RegionParams& params, const std::vector<ServerTypeSpec>& types)
    : params_(params), types_(types) {
  const int E = static_cast<int>(types.size());
  by_type_msb_.assign(static_cast<size_t>(E) * params_.msbs, {});
  by_type_rack_.assign(static_cast<size_t>(E) * params_.racks, {});
  dc_counts_.assign(static_cast<size_t>(E) * params_.datacenters, 0);

  int total = 0;
  for (const auto& t : types) total += t.count;
  servers_.reserve(total);

  // single continuing cursor keeps both global and per-type placement spread:
  // each type's servers land in consecutive racks mod K, so any type with
  // count <= racks gets at most one server per rack touched.
  int cursor = 0;
  int32_t id = 0;
  for (int e = 0; e < E; ++e) {
    for (int i = 0; i < types[e].count; ++i) {
      const int rack = cursor % params_.racks;
      const int msb = rack / (params_.racks / params_.msbs);
      const int dc = msb / (params_.msbs / params_.datacenters);
      servers_.push_back(Server{id, static_cast<int16_t>(e), static_cast<int16_t>(dc),
                                static_cast<int16_t>(msb), static_cast<int16_t>(rack)});
      by_type_msb_[static_cast<size_t>(e) * params_.msbs + msb].push_back(id);
      by_type_rack_[static_cast<size_t>(e) * params_.racks + rack].push_back(id);
      ++dc_counts_[static_cast<size_t>(e) * params_.datacenters + dc];
      ++cursor;
      ++id;
    }
  }
}

std::string RegionTopology::dump() const {
  std::string out;
  out.reserve(servers_.size() * 24);
  char line[64];
  for (const auto& s : servers_) {
    std::snprintf(line, sizeof(line), "%d e%d d%d m%d r%d\n", s.id, s.type, s.datacenter, s.msb,
                  s.rack);
    out += line;
  }
  return out;
}

RegionTopology build_region(const RegionParams& params, const std::vector<ServerTypeSpec>& types) {
  if (params.datacenters <= 0 || params.msbs <= 0 || params.racks <= 0)
    throw std::invalid_argument("topology: datacenters, msbs, racks must be positive");
  if (params.msbs % params.datacenters != 0)
    throw std::invalid_argument("topology: msbs (" + std::to_string(params.msbs) +
                                ") not divisible by datacenters (" +
                                std::to_string(params.datacenters) + ")");
  if (params.racks % params.msbs != 0)
    throw std::invalid_argument("topology: racks (" + std::to_string(params.racks) +
                                ") not divisible by msbs (" + std::to_string(params.msbs) + ")");
  if (types.empty()) throw std::invalid_argument("topology: no server types");
  for (const auto& t : types) {
    if (t.count < 0) throw std::invalid_argument("topology: negative server count");
    if (t.arrival_rate < 0.0) throw std::invalid_argument("topology: negative arrival rate");
  }
  if (params.unit_rru <= 0.0) throw std::invalid_argument("topology: unit_rru must be positive");
  if (params.logical <= 0) throw std::invalid_argument("topology: logical must be positive");
  return RegionTopology(params, types);
}

}  // namespace rasim

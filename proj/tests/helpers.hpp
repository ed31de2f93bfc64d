#pragma once

// shared fixtures: tiny single-type regions and the bundled reference config

#include <string>

#include "rasim/config.hpp"
#include "rasim/topology.hpp"

#ifndef RASIM_SOURCE_DIR
#define RASIM_SOURCE_DIR "."
#endif

namespace rasim::testfix {

// one datacenter, a single server type; alphas default to the reference shape so
// spread thresholds stay integral for 150-multiple demands
inline RegionTopology tiny_region(int msbs, int racks_per_msb, int servers, int logical,
                                  double move_cost = 5.0, Fraction alpha_rack = Fraction{1, 75},
                                  Fraction alpha_msb = Fraction{1, 15}) {
  RegionParams p;
  p.datacenters = 1;
  p.msbs = msbs;
  p.racks = msbs * racks_per_msb;
  p.logical = logical;
  p.unit_rru = 150.0;
  p.alpha_rack = alpha_rack;
  p.alpha_msb = alpha_msb;
  p.move_cost = move_cost;
  return build_region(p, {ServerTypeSpec{servers, 0.0, 0}});
}

inline std::string config_path(const char* name) {
  return std::string(RASIM_SOURCE_DIR) + "/configs/" + name;
}

inline ExperimentConfig reference_config() { return parse_config(config_path("reference.ini")); }

}  // namespace rasim::testfix

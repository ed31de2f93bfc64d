#pragma once

#include <vector>

#include "rasim/topology.hpp"

namespace rasim {

struct ConverterParams {
  double zeta = 1.0;   // softmax temperature
  double omega = 2.718281828459045235360287471353;  // over-provision base
  double clamp_lo = -3.0;  // over-provision logit range, z = omega^clamp(a)
  double clamp_hi = 0.0;
};

void validate_converter(const ConverterParams& p);

// per-MSB request for one (reservation, type)
struct MsbRequestVector {
  std::vector<int> n;     // server counts
  std::vector<double> y;  // RRU targets
  double z = 0.0;         // over-provision factor applied
};

// exp(zeta*a_f) / sum, max-subtracted; zeta=0 collapses to uniform
std::vector<double> softmax_fractions(const std::vector<double>& a_msb, double zeta);

double over_provision(double a_last, const ConverterParams& p);

// y_f = fraction_f*(1+z)*c_le, n_f = ceil(y_f * |B_e| / type capacity).
// Shared by the raw-action path and the baselines' direct-fractions path,
// so fraction sums above 1 pass through untouched.
MsbRequestVector to_server_counts(const std::vector<double>& fractions, double z, double c_le,
                                  int type_id, const RegionTopology& topo);

// full path: softmax over the first F entries, over-provision from the last
MsbRequestVector convert(const std::vector<double>& raw, const ConverterParams& p, double c_le,
                         int type_id, const RegionTopology& topo);

}  // namespace rasim

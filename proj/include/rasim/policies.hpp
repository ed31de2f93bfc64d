#pragma once

#include <vector>

#include "rasim/util.hpp"

namespace rasim {

// What a policy hands the converter: either raw logits for the softmax path
// or explicit fractions (already encoding any over-provision) with z.
struct PolicyOutput {
  bool raw_path = false;
  std::vector<double> raw;        // length F+1 when raw_path
  std::vector<double> fractions;  // length F otherwise
  double z = 0.0;
};

// F+1 i.i.d. uniform [-1,1] logits through the softmax path
PolicyOutput random_policy(Rng& rng, int msbs);

// every MSB asked for 1/(F-1) of demand; the sum above 1 is the built-in
// failure buffer, so z stays 0
PolicyOutput uniform_policy(int msbs);

// fractions proportional to free servers, scaled by 1/(1 - largest share) so
// losing the biggest MSB still leaves full demand covered
PolicyOutput proportional_policy(const std::vector<int>& availability);

}  // namespace rasim

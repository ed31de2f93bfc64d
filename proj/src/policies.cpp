#include "rasim/policies.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasim {

PolicyOutput random_policy(Rng& rng, int msbs) {
  PolicyOutput out;
  out.raw_path = true;
  out.raw.resize(msbs + 1);
  for (double& v : out.raw) v = rng.uniform(-1.0, 1.0);
  return out;
}

PolicyOutput uniform_policy(int msbs) {
  if (msbs < 2) throw std::invalid_argument("uniform_policy: needs at least 2 msbs");
  PolicyOutput out;
  out.fractions.assign(msbs, 1.0 / (msbs - 1));
  return out;
}

PolicyOutput proportional_policy(const std::vector<int>& availability) {
  double total = 0.0;
  for (int a : availability) {
    if (a < 0) throw std::invalid_argument("proportional_policy: negative availability");
    total += a;
  }
  if (total <= 0.0)
    throw std::invalid_argument("proportional_policy: zero availability");
  PolicyOutput out;
  out.fractions.resize(availability.size());
  double top = 0.0;
  for (size_t f = 0; f < availability.size(); ++f) {
    out.fractions[f] = availability[f] / total;
    top = std::max(top, out.fractions[f]);
  }
  // a single-MSB pool leaves no redundancy to scale for; emit the shares as-is
  const double scale = top >= 1.0 - 1e-12 ? 1.0 : 1.0 / (1.0 - top);
  for (double& v : out.fractions) v *= scale;
  return out;
}

}  // namespace rasim

#include "rasim/converter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rasim {

void validate_converter(const ConverterParams& p) {
  if (p.zeta < 0.0) throw std::invalid_argument("converter: zeta must be >= 0");
  if (p.omega <= 1.0) throw std::invalid_argument("converter: omega must be > 1");
  if (p.clamp_lo > p.clamp_hi) throw std::invalid_argument("converter: empty clamp range");
}

std::vector<double> softmax_fractions(const std::vector<double>& a_msb, double zeta) {
  if (a_msb.empty()) throw std::invalid_argument("softmax_fractions: empty input");
  std::vector<double> out(a_msb.size());
  double hi = a_msb[0];
  for (double v : a_msb) hi = std::max(hi, v);
  double sum = 0.0;
  for (size_t f = 0; f < a_msb.size(); ++f) {
    out[f] = std::exp(zeta * (a_msb[f] - hi));
    sum += out[f];
  }
  for (double& v : out) v /= sum;
  return out;
}

double over_provision(double a_last, const ConverterParams& p) {
  const double clamped = std::clamp(a_last, p.clamp_lo, p.clamp_hi);
  return std::pow(p.omega, clamped);
}

MsbRequestVector to_server_counts(const std::vector<double>& fractions, double z, double c_le,
                                  int type_id, const RegionTopology& topo) {
  if (static_cast<int>(fractions.size()) != topo.params().msbs)
    throw std::invalid_argument("to_server_counts: fraction vector length != msbs");
  if (c_le < 0.0) throw std::invalid_argument("to_server_counts: negative demand");
  MsbRequestVector req;
  req.z = z;
  req.y.resize(fractions.size());
  req.n.resize(fractions.size());
  const double count_e = topo.types()[type_id].count;
  const double cap_e = topo.type_capacity(type_id);
  for (size_t f = 0; f < fractions.size(); ++f) {
    req.y[f] = fractions[f] * (1.0 + z) * c_le;
    req.n[f] = (c_le <= 0.0 || count_e <= 0.0 || req.y[f] <= 0.0)
                   ? 0
                   : static_cast<int>(std::ceil(req.y[f] * count_e / cap_e));
  }
  return req;
}

MsbRequestVector convert(const std::vector<double>& raw, const ConverterParams& p, double c_le,
                         int type_id, const RegionTopology& topo) {
  if (static_cast<int>(raw.size()) != topo.params().msbs + 1)
    throw std::invalid_argument("convert: raw action length != msbs + 1");
  for (double v : raw)
    if (!std::isfinite(v)) throw std::invalid_argument("convert: non-finite action entry");
  std::vector<double> msb_part(raw.begin(), raw.end() - 1);
  const auto fractions = softmax_fractions(msb_part, p.zeta);
  const double z = over_provision(raw.back(), p);
  return to_server_counts(fractions, z, c_le, type_id, topo);
}

}  // namespace rasim

#include "rasim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rasim {

void validate_combos(const std::vector<ComboSpec>& combos) {
  for (size_t c = 0; c < combos.size(); ++c) {
    const auto& combo = combos[c];
    if (combo.entries.empty())
      throw std::invalid_argument("combo " + std::to_string(c) + ": no entries");
    double sum = 0.0;
    for (const auto& e : combo.entries) {
      if (e.demand <= 0.0)
        throw std::invalid_argument("combo " + std::to_string(c) + ": demand must be positive");
      if (e.probability < 0.0 || e.probability > 1.0)
        throw std::invalid_argument("combo " + std::to_string(c) + ": probability out of [0,1]");
      if (e.duration < 1)
        throw std::invalid_argument("combo " + std::to_string(c) + ": duration must be >= 1");
      sum += e.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("combo " + std::to_string(c) + ": probabilities sum to " +
                                  std::to_string(sum));
  }
}

EpisodeTrace sample_trace(const std::vector<ServerTypeSpec>& specs,
                          const std::vector<ComboSpec>& combos, int horizon, int logical,
                          uint64_t seed) {
  validate_combos(combos);
  if (horizon <= 0) throw std::invalid_argument("sample_trace: horizon must be positive");
  if (logical <= 0) throw std::invalid_argument("sample_trace: logical must be positive");
  for (const auto& s : specs)
    if (s.combo_id < 0 || s.combo_id >= static_cast<int>(combos.size()))
      throw std::invalid_argument("sample_trace: combo_type out of range");

  EpisodeTrace trace;
  trace.horizon = horizon;
  trace.logical = logical;
  trace.num_types = static_cast<int>(specs.size());

  Rng rng(derive_seed(seed, 0x7261636bULL));
  for (int t = 0; t < horizon; ++t) {
    for (int e = 0; e < static_cast<int>(specs.size()); ++e) {
      const int n = rng.poisson(specs[e].arrival_rate);
      const auto& entries = combos[specs[e].combo_id].entries;
      for (int i = 0; i < n; ++i) {
        double r = rng.uniform();
        size_t pick = entries.size() - 1;
        for (size_t j = 0; j < entries.size(); ++j) {
          r -= entries[j].probability;
          if (r < 0.0) {
            pick = j;
            break;
          }
        }
        const int l = rng.uniform_int(logical);
        trace.requests.push_back(Request{l, e, entries[pick].demand, t,
                                         t + entries[pick].duration});
      }
    }
  }
  // generation order is already arrival-major; stable_sort keeps it canonical
  std::stable_sort(trace.requests.begin(), trace.requests.end(),
                   [](const Request& a, const Request& b) { return a.arrival < b.arrival; });
  return trace;
}

Grid<double> demand_matrix(const EpisodeTrace& trace, int t) {
  Grid<double> c(trace.logical, trace.num_types, 0.0);
  for (const auto& r : trace.requests)
    if (r.arrival <= t && t < r.expiry) c(r.reservation, r.type) += r.demand;
  return c;
}

LookAhead look_ahead(const EpisodeTrace& trace, int reservation, int type, int t, int h) {
  LookAhead la;
  la.arriving.assign(h, 0.0);
  la.expiring.assign(h, 0.0);
  for (const auto& r : trace.requests) {
    if (r.reservation != reservation || r.type != type) continue;
    if (r.arrival > t && r.arrival <= t + h) la.arriving[r.arrival - t - 1] += r.demand;
    if (r.expiry > t && r.expiry <= t + h) la.expiring[r.expiry - t - 1] += r.demand;
  }
  return la;
}

DemandTimeline::DemandTimeline(const EpisodeTrace& trace)
    : horizon_(trace.horizon), logical_(trace.logical), num_types_(trace.num_types) {
  int last = trace.horizon;
  for (const auto& r : trace.requests) last = std::max(last, static_cast<int>(r.expiry));
  span_ = last + 1;
  const size_t cells = static_cast<size_t>(logical_) * num_types_;
  arrivals_.assign(static_cast<size_t>(span_) * cells, 0.0);
  expiries_.assign(static_cast<size_t>(span_) * cells, 0.0);
  active_.assign(static_cast<size_t>(span_) * cells, 0.0);
  for (const auto& r : trace.requests) {
    arrivals_[static_cast<size_t>(r.arrival) * cells + cell(r.reservation, r.type)] += r.demand;
    if (r.expiry < span_)
      expiries_[static_cast<size_t>(r.expiry) * cells + cell(r.reservation, r.type)] += r.demand;
  }
  // running sum: active(t) = active(t-1) + arrivals(t) - expiries(t)
  for (int t = 0; t < span_; ++t) {
    for (size_t i = 0; i < cells; ++i) {
      const double prev = t > 0 ? active_[static_cast<size_t>(t - 1) * cells + i] : 0.0;
      active_[static_cast<size_t>(t) * cells + i] =
          prev + arrivals_[static_cast<size_t>(t) * cells + i] -
          expiries_[static_cast<size_t>(t) * cells + i];
    }
  }
}

double DemandTimeline::demand(int reservation, int type, int t) const {
  if (t < 0) return 0.0;
  if (t >= span_) t = span_ - 1;  // all demand has expired past span_; value is 0 there
  const size_t cells = static_cast<size_t>(logical_) * num_types_;
  return active_[static_cast<size_t>(t) * cells + cell(reservation, type)];
}

double DemandTimeline::arriving_at(int reservation, int type, int t) const {
  if (t < 0 || t >= span_) return 0.0;
  const size_t cells = static_cast<size_t>(logical_) * num_types_;
  return arrivals_[static_cast<size_t>(t) * cells + cell(reservation, type)];
}

double DemandTimeline::expiring_at(int reservation, int type, int t) const {
  if (t < 0 || t >= span_) return 0.0;
  const size_t cells = static_cast<size_t>(logical_) * num_types_;
  return expiries_[static_cast<size_t>(t) * cells + cell(reservation, type)];
}

double DemandTimeline::type_demand(int type, int t) const {
  double sum = 0.0;
  for (int l = 0; l < logical_; ++l) sum += demand(l, type, t);
  return sum;
}

std::string format_trace(const EpisodeTrace& trace) {
  std::string out = "# trace horizon=" + std::to_string(trace.horizon) +
                    " logical=" + std::to_string(trace.logical) +
                    " types=" + std::to_string(trace.num_types) + "\n";
  char line[96];
  for (const auto& r : trace.requests) {
    std::snprintf(line, sizeof(line), "%d %d %.17g %d %d\n", r.reservation, r.type, r.demand,
                  r.arrival, r.expiry);
    out += line;
  }
  return out;
}

EpisodeTrace parse_trace(const std::string& text) {
  EpisodeTrace trace;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (std::sscanf(line.c_str(), "# trace horizon=%d logical=%d types=%d", &trace.horizon,
                      &trace.logical, &trace.num_types) != 3)
        throw std::invalid_argument("parse_trace: bad header: " + line);
      header = true;
      continue;
    }
    Request r;
    if (std::sscanf(line.c_str(), "%d %d %lg %d %d", &r.reservation, &r.type, &r.demand,
                    &r.arrival, &r.expiry) != 5)
      throw std::invalid_argument("parse_trace: bad line: " + line);
    trace.requests.push_back(r);
  }
  if (!header) throw std::invalid_argument("parse_trace: missing header");
  return trace;
}

}  // namespace rasim

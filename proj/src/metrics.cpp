#include "rasim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rasim {

namespace {

void append(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string per_step_csv(const std::vector<EpisodeReport>& episodes) {
  std::string out =
      "episode,step,server_type,o1,o2,o3,o4,utility,g2_violations,g3_violations,"
      "redundancy_slack_total\n";
  for (size_t ep = 0; ep < episodes.size(); ++ep) {
    for (const auto& row : episodes[ep].type_steps) {
      out += std::to_string(ep);
      out += ',';
      out += std::to_string(row.t);
      out += ',';
      out += std::to_string(row.e);
      out += ',';
      append(out, row.metrics.o1);
      out += ',';
      append(out, row.metrics.o2);
      out += ',';
      append(out, row.metrics.o3);
      out += ',';
      append(out, row.metrics.o4);
      out += ',';
      append(out, row.metrics.utility);
      out += ',';
      out += std::to_string(row.metrics.g2_violations);
      out += ',';
      out += std::to_string(row.metrics.g3_violations);
      out += ',';
      append(out, row.metrics.redundancy_slack_total);
      out += '\n';
    }
  }
  return out;
}

std::string per_episode_csv(const std::vector<EpisodeReport>& episodes) {
  std::string out =
      "episode,total_utility,total_o1,total_o2,total_o3,total_o4,g2_violations,g3_violations,"
      "shortfall_servers\n";
  for (size_t ep = 0; ep < episodes.size(); ++ep) {
    const auto& r = episodes[ep];
    out += std::to_string(ep);
    out += ',';
    append(out, r.total_utility);
    out += ',';
    append(out, r.total_o1);
    out += ',';
    append(out, r.total_o2);
    out += ',';
    append(out, r.total_o3);
    out += ',';
    append(out, r.total_o4);
    out += ',';
    out += std::to_string(r.g2_violations);
    out += ',';
    out += std::to_string(r.g3_violations);
    out += ',';
    out += std::to_string(r.shortfall_servers);
    out += '\n';
  }
  return out;
}

std::string cdf_csv(std::vector<double> totals) {
  std::sort(totals.begin(), totals.end());
  std::string out = "total_utility,percentile\n";
  const double n = static_cast<double>(totals.size());
  for (size_t i = 0; i < totals.size(); ++i) {
    append(out, totals[i]);
    out += ',';
    append(out, (static_cast<double>(i) + 1.0) / n);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SweepRow> sweep_movement_cost(const std::vector<double>& values, Policy& policy,
                                          const RegionTopology& topo,
                                          const std::vector<ComboSpec>& combos,
                                          EngineSettings settings, uint64_t seed, int episodes) {
  if (values.empty()) throw std::invalid_argument("sweep: no movement-cost values");
  std::vector<SweepRow> rows;
  for (double mc : values) {
    settings.weights.move_cost = mc;
    const EvalReport report = evaluate(policy, topo, combos, settings, episodes, seed);
    SweepRow row;
    row.move_cost = mc;
    std::vector<double> totals, moves, spread, redundancy;
    for (const auto& ep : report.episodes) {
      totals.push_back(ep.total_utility);
      moves.push_back(mc > 0.0 ? ep.total_o1 / mc : 0.0);
      spread.push_back(ep.total_o2 + ep.total_o3);
      redundancy.push_back(ep.total_o4);
    }
    row.median_total = median(totals);
    row.median_movements = median(moves);
    row.median_spread = median(spread);
    row.median_redundancy = median(redundancy);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "move_cost,median_total,median_movements,median_spread,median_redundancy\n";
  for (const auto& r : rows) {
    append(out, r.move_cost);
    out += ',';
    append(out, r.median_total);
    out += ',';
    append(out, r.median_movements);
    out += ',';
    append(out, r.median_spread);
    out += ',';
    append(out, r.median_redundancy);
    out += '\n';
  }
  return out;
}

}  // namespace rasim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rasim/converter.hpp"
#include "rasim/engine.hpp"
#include "rasim/topology.hpp"
#include "rasim/workload.hpp"

namespace rasim {

struct RlParams {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  int epochs = 10;
  int minibatch = 64;
  int update_every = 5;  // episodes per PPO update
  int hidden = 64;
  double log_std_init = -0.5;
  double w1 = 1.0, w2 = 1.0, w3 = 1.0, w4 = 1.0;  // reward term weights
  double p2 = 50.0;  // redundancy violation penalty
  double p3 = 50.0;  // affinity violation penalty per datacenter
  bool curriculum = true;
  int curriculum_window = 50;   // moving-average width
  int curriculum_span = 25;     // episodes between plateau comparisons
  double curriculum_tol = 0.02;  // relative MA change counting as plateau
  int curriculum_stage_cap = 0;  // force-advance after this many episodes; 0 = episodes/8
  int episodes_per_type = 400;
  double reward_scale = 0.0;  // divisor for stored rewards; 0 = unit_rru * msbs
  std::string mode = "single";  // single | parallel
};

struct ExperimentConfig {
  RegionParams region;
  std::vector<ServerTypeSpec> types;
  std::vector<ComboSpec> combos;
  ConverterParams converter;
  RlParams rl;
  int horizon = 30;
  int lookahead = 5;
  uint64_t seed = 1;
  int episodes = 30;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

EngineSettings engine_settings(const ExperimentConfig& cfg);

}  // namespace rasim

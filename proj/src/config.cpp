#include "rasim/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rasim {

namespace {

struct KvStore {
  // section -> key -> value, plus consumption tracking for unknown-key rejection
  std::map<std::string, std::map<std::string, std::string>> data;
  mutable std::set<std::string> used;

  const std::string& get(const std::string& section, const std::string& key,
                         const char* type_name) const {
    auto s = data.find(section);
    if (s == data.end() || !s->second.count(key))
      throw std::invalid_argument("config: missing key [" + section + "] " + key + " (" +
                                  type_name + ")");
    used.insert(section + "\n" + key);
    return s->second.at(key);
  }

  void check_consumed() const {
    for (const auto& [section, kv] : data)
      for (const auto& [key, value] : kv)
        if (!used.count(section + "\n" + key))
          throw std::invalid_argument("config: unknown key [" + section + "] " + key);
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

KvStore tokenize(const std::string& text) {
  KvStore store;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: bad section header at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty() || key.empty())
      throw std::invalid_argument("config: key outside section at line " + std::to_string(lineno));
    if (store.data[section].count(key))
      throw std::invalid_argument("config: duplicate key [" + section + "] " + key);
    store.data[section][key] = value;
  }
  return store;
}

double parse_double(const KvStore& kv, const std::string& s, const std::string& k) {
  const std::string& v = kv.get(s, k, "real");
  size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: [" + s + "] " + k + " expects a real, got '" + v + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: [" + s + "] " + k + " expects a real, got '" + v + "'");
  return out;
}

int64_t parse_int(const KvStore& kv, const std::string& s, const std::string& k) {
  const std::string& v = kv.get(s, k, "integer");
  size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: [" + s + "] " + k + " expects an integer, got '" + v +
                                "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: [" + s + "] " + k + " expects an integer, got '" + v +
                                "'");
  return out;
}

bool parse_bool(const KvStore& kv, const std::string& s, const std::string& k) {
  const std::string& v = kv.get(s, k, "on|off");
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("config: [" + s + "] " + k + " expects on/off, got '" + v + "'");
}

Fraction parse_fraction(const KvStore& kv, const std::string& s, const std::string& k) {
  const std::string& v = kv.get(s, k, "fraction num/den");
  Fraction f;
  char rest;
  if (std::sscanf(v.c_str(), "%" SCNd64 "/%" SCNd64 "%c", &f.num, &f.den, &rest) != 2 ||
      f.den <= 0)
    throw std::invalid_argument("config: [" + s + "] " + k + " expects num/den, got '" + v + "'");
  return f;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  const KvStore kv = tokenize(text);
  if (kv.data.empty())
    throw std::invalid_argument(
        "config: empty config; required sections: region, types, combos, converter, rl, run");
  ExperimentConfig cfg;

  cfg.region.datacenters = static_cast<int>(parse_int(kv, "region", "datacenters"));
  cfg.region.msbs = static_cast<int>(parse_int(kv, "region", "msbs"));
  cfg.region.racks = static_cast<int>(parse_int(kv, "region", "racks"));
  cfg.region.logical = static_cast<int>(parse_int(kv, "region", "logical"));
  cfg.region.unit_rru = parse_double(kv, "region", "unit_rru");
  cfg.region.alpha_msb = parse_fraction(kv, "region", "alpha_msb");
  cfg.region.alpha_rack = parse_fraction(kv, "region", "alpha_rack");
  cfg.region.kappa = parse_double(kv, "region", "kappa");
  cfg.region.beta = parse_double(kv, "region", "beta");
  cfg.region.move_cost = parse_double(kv, "region", "move_cost");
  cfg.region.redundancy = parse_double(kv, "region", "affinity");
  cfg.region.theta = parse_double(kv, "region", "theta");
  cfg.horizon = static_cast<int>(parse_int(kv, "region", "horizon"));
  cfg.lookahead = static_cast<int>(parse_int(kv, "region", "lookahead"));

  const int num_types = static_cast<int>(parse_int(kv, "types", "count"));
  cfg.types.resize(num_types);
  for (int e = 0; e < num_types; ++e) {
    const std::string key = "type" + std::to_string(e);
    const std::string& v = kv.get("types", key, "count rate combo");
    ServerTypeSpec spec;
    char rest;
    if (std::sscanf(v.c_str(), "%d %lg %d %c", &spec.count, &spec.arrival_rate, &spec.combo_id,
                    &rest) != 3)
      throw std::invalid_argument("config: [types] " + key +
                                  " expects 'count rate combo', got '" + v + "'");
    cfg.types[e] = spec;
  }

  const int num_combos = static_cast<int>(parse_int(kv, "combos", "count"));
  cfg.combos.resize(num_combos);
  for (int c = 0; c < num_combos; ++c) {
    const std::string key = "combo" + std::to_string(c);
    const std::string& v = kv.get("combos", key, "demand:prob:duration list");
    std::istringstream entries(v);
    std::string item;
    while (std::getline(entries, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      ComboEntry entry;
      char rest;
      if (std::sscanf(item.c_str(), "%lg:%lg:%d %c", &entry.demand, &entry.probability,
                      &entry.duration, &rest) != 3)
        throw std::invalid_argument("config: [combos] " + key + " bad entry '" + item + "'");
      cfg.combos[c].entries.push_back(entry);
    }
    if (cfg.combos[c].entries.empty())
      throw std::invalid_argument("config: [combos] " + key + " has no entries");
  }
  validate_combos(cfg.combos);

  cfg.converter.zeta = parse_double(kv, "converter", "zeta");
  cfg.converter.omega = parse_double(kv, "converter", "omega");
  cfg.converter.clamp_lo = parse_double(kv, "converter", "clamp_lo");
  cfg.converter.clamp_hi = parse_double(kv, "converter", "clamp_hi");
  validate_converter(cfg.converter);

  cfg.rl.gamma = parse_double(kv, "rl", "gamma");
  cfg.rl.lambda = parse_double(kv, "rl", "lambda");
  cfg.rl.clip = parse_double(kv, "rl", "clip");
  cfg.rl.lr = parse_double(kv, "rl", "lr");
  cfg.rl.epochs = static_cast<int>(parse_int(kv, "rl", "epochs"));
  cfg.rl.minibatch = static_cast<int>(parse_int(kv, "rl", "minibatch"));
  cfg.rl.update_every = static_cast<int>(parse_int(kv, "rl", "update_every"));
  cfg.rl.hidden = static_cast<int>(parse_int(kv, "rl", "hidden"));
  cfg.rl.log_std_init = parse_double(kv, "rl", "log_std_init");
  cfg.rl.w1 = parse_double(kv, "rl", "w1");
  cfg.rl.w2 = parse_double(kv, "rl", "w2");
  cfg.rl.w3 = parse_double(kv, "rl", "w3");
  cfg.rl.w4 = parse_double(kv, "rl", "w4");
  cfg.rl.p2 = parse_double(kv, "rl", "p2");
  cfg.rl.p3 = parse_double(kv, "rl", "p3");
  cfg.rl.curriculum = parse_bool(kv, "rl", "curriculum");
  cfg.rl.curriculum_window = static_cast<int>(parse_int(kv, "rl", "curriculum_window"));
  cfg.rl.curriculum_span = static_cast<int>(parse_int(kv, "rl", "curriculum_span"));
  cfg.rl.curriculum_tol = parse_double(kv, "rl", "curriculum_tol");
  cfg.rl.curriculum_stage_cap = static_cast<int>(parse_int(kv, "rl", "curriculum_stage_cap"));
  cfg.rl.episodes_per_type = static_cast<int>(parse_int(kv, "rl", "episodes_per_type"));
  cfg.rl.reward_scale = parse_double(kv, "rl", "reward_scale");
  cfg.rl.mode = kv.get("rl", "mode", "single|parallel");
  if (cfg.rl.mode != "single" && cfg.rl.mode != "parallel")
    throw std::invalid_argument("config: [rl] mode expects single|parallel, got '" + cfg.rl.mode +
                                "'");

  cfg.seed = static_cast<uint64_t>(parse_int(kv, "run", "seed"));
  cfg.episodes = static_cast<int>(parse_int(kv, "run", "episodes"));

  kv.check_consumed();

  // structural validation shared with the topology builder
  build_region(cfg.region, cfg.types);
  for (const auto& t : cfg.types)
    if (t.combo_id >= static_cast<int>(cfg.combos.size()))
      throw std::invalid_argument("config: combo id out of range");
  if (cfg.horizon < 0) throw std::invalid_argument("config: horizon must be >= 0");
  if (cfg.lookahead < 1) throw std::invalid_argument("config: lookahead must be >= 1");
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[region]\n";
  out << "datacenters = " << cfg.region.datacenters << "\n";
  out << "msbs = " << cfg.region.msbs << "\n";
  out << "racks = " << cfg.region.racks << "\n";
  out << "logical = " << cfg.region.logical << "\n";
  out << "unit_rru = " << fmt(cfg.region.unit_rru) << "\n";
  out << "alpha_msb = " << cfg.region.alpha_msb.num << "/" << cfg.region.alpha_msb.den << "\n";
  out << "alpha_rack = " << cfg.region.alpha_rack.num << "/" << cfg.region.alpha_rack.den << "\n";
  out << "kappa = " << fmt(cfg.region.kappa) << "\n";
  out << "beta = " << fmt(cfg.region.beta) << "\n";
  out << "move_cost = " << fmt(cfg.region.move_cost) << "\n";
  out << "affinity = " << fmt(cfg.region.redundancy) << "\n";
  out << "theta = " << fmt(cfg.region.theta) << "\n";
  out << "horizon = " << cfg.horizon << "\n";
  out << "lookahead = " << cfg.lookahead << "\n";
  out << "\n[types]\n";
  out << "count = " << cfg.types.size() << "\n";
  for (size_t e = 0; e < cfg.types.size(); ++e)
    out << "type" << e << " = " << cfg.types[e].count << " " << fmt(cfg.types[e].arrival_rate)
        << " " << cfg.types[e].combo_id << "\n";
  out << "\n[combos]\n";
  out << "count = " << cfg.combos.size() << "\n";
  for (size_t c = 0; c < cfg.combos.size(); ++c) {
    out << "combo" << c << " = ";
    for (size_t i = 0; i < cfg.combos[c].entries.size(); ++i) {
      const auto& entry = cfg.combos[c].entries[i];
      if (i) out << ", ";
      out << fmt(entry.demand) << ":" << fmt(entry.probability) << ":" << entry.duration;
    }
    out << "\n";
  }
  out << "\n[converter]\n";
  out << "zeta = " << fmt(cfg.converter.zeta) << "\n";
  out << "omega = " << fmt(cfg.converter.omega) << "\n";
  out << "clamp_lo = " << fmt(cfg.converter.clamp_lo) << "\n";
  out << "clamp_hi = " << fmt(cfg.converter.clamp_hi) << "\n";
  out << "\n[rl]\n";
  out << "gamma = " << fmt(cfg.rl.gamma) << "\n";
  out << "lambda = " << fmt(cfg.rl.lambda) << "\n";
  out << "clip = " << fmt(cfg.rl.clip) << "\n";
  out << "lr = " << fmt(cfg.rl.lr) << "\n";
  out << "epochs = " << cfg.rl.epochs << "\n";
  out << "minibatch = " << cfg.rl.minibatch << "\n";
  out << "update_every = " << cfg.rl.update_every << "\n";
  out << "hidden = " << cfg.rl.hidden << "\n";
  out << "log_std_init = " << fmt(cfg.rl.log_std_init) << "\n";
  out << "w1 = " << fmt(cfg.rl.w1) << "\n";
  out << "w2 = " << fmt(cfg.rl.w2) << "\n";
  out << "w3 = " << fmt(cfg.rl.w3) << "\n";
  out << "w4 = " << fmt(cfg.rl.w4) << "\n";
  out << "p2 = " << fmt(cfg.rl.p2) << "\n";
  out << "p3 = " << fmt(cfg.rl.p3) << "\n";
  out << "curriculum = " << (cfg.rl.curriculum ? "on" : "off") << "\n";
  out << "curriculum_window = " << cfg.rl.curriculum_window << "\n";
  out << "curriculum_span = " << cfg.rl.curriculum_span << "\n";
  out << "curriculum_tol = " << fmt(cfg.rl.curriculum_tol) << "\n";
  out << "curriculum_stage_cap = " << cfg.rl.curriculum_stage_cap << "\n";
  out << "episodes_per_type = " << cfg.rl.episodes_per_type << "\n";
  out << "reward_scale = " << fmt(cfg.rl.reward_scale) << "\n";
  out << "mode = " << cfg.rl.mode << "\n";
  out << "\n[run]\n";
  out << "seed = " << cfg.seed << "\n";
  out << "episodes = " << cfg.episodes << "\n";
  return out.str();
}

EngineSettings engine_settings(const ExperimentConfig& cfg) {
  EngineSettings s;
  s.converter = cfg.converter;
  s.weights = make_weights(cfg.region);
  s.horizon = cfg.horizon;
  s.lookahead = cfg.lookahead;
  return s;
}

}  // namespace rasim

// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "config.hpp"

#include <fstream>
#include <sstream>

namespace chanforecast::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad seed value for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + value);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

// "60" or "30:60" (km/h).
void parse_speed(ExperimentConfig& cfg, const std::string& value) {
  const auto colon = value.find(':');
  if (colon == std::string::npos) {
    cfg.channel.speed_mps = parse_double("speed", value) / 3.6;
    cfg.channel.speed_mps_max = 0.0;
  } else {
    cfg.channel.speed_mps = parse_double("speed", value.substr(0, colon)) / 3.6;
    cfg.channel.speed_mps_max = parse_double("speed", value.substr(colon + 1)) / 3.6;
    if (cfg.channel.speed_mps_max <= cfg.channel.speed_mps)
      throw ConfigError("config: speed range must be increasing");
  }
}

void set_channel(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto& ch = cfg.channel;
  if (key == "scenario") {
    ch.name = value;
    if (value == "LOS-like") ch.n_paths = 12;
    if (value == "NLOS-like") ch.n_paths = 21;
  } else if (key == "f") ch.carrier_hz = parse_double(key, value);
  else if (key == "N_l") ch.n_col = parse_int(key, value);
  else if (key == "N_r") ch.n_row = parse_int(key, value);
  else if (key == "polarization_angles") {
    if (value != "+-45" && value != "+45,-45")
      throw ConfigError("config: only +-45 polarization is supported");
  } else if (key == "BS_height") ch.bs_height_m = parse_double(key, value);
  else if (key == "UE_trajectory") {
    if (value == "linear") ch.trajectory = chan::TrajectoryKind::Linear;
    else if (value == "circular") ch.trajectory = chan::TrajectoryKind::Circular;
    else throw ConfigError("config: UE_trajectory must be linear or circular");
  } else if (key == "SRS_period") ch.srs_period_s = parse_double(key, value);
  else if (key == "speed") parse_speed(cfg, value);
  else if (key == "L") ch.n_paths = parse_int(key, value);
  else if (key == "rician_k_db") ch.rician_k_db = parse_double(key, value);
  else if (key == "pdp_decay_db") ch.pdp_decay_db = parse_double(key, value);
  else if (key == "xpd_db") ch.xpd_db = parse_double(key, value);
  else if (key == "mode") {
    if (value == "static") ch.mode = chan::SnapshotMode::Static;
    else if (value == "drifting") ch.mode = chan::SnapshotMode::Drifting;
    else throw ConfigError("config: mode must be static or drifting");
  } else if (key == "circle_radius") ch.circle_radius_m = parse_double(key, value);
  else throw ConfigError("config: unknown [channel] key '" + key + "'");
}

void set_dataset(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "n_traj") cfg.n_traj = parse_int(key, value);
  else if (key == "T") cfg.channel.snapshots = parse_int(key, value);
  else if (key == "K") {
    cfg.k = parse_int(key, value);
    cfg.model.k = cfg.k;
  } else if (key == "horizons") cfg.horizons = parse_int_list(key, value);
  else if (key == "split_ratio") cfg.split_ratio = parse_double(key, value);
  else throw ConfigError("config: unknown [dataset] key '" + key + "'");
}

void set_model(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto& m = cfg.model;
  if (key == "kind") {
    try {
      cfg.kind = pred::kind_from_name(value);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "K") { m.k = parse_int(key, value); cfg.k = m.k; }
  else if (key == "N_z") m.n_z = parse_int(key, value);
  else if (key == "N_w") m.n_w = parse_int(key, value);
  else if (key == "N_s") m.n_s = parse_int(key, value);
  else if (key == "learning_rate") m.learning_rate = parse_double(key, value);
  else if (key == "batch_size") m.batch_size = parse_int(key, value);
  else if (key == "epochs") m.epochs = parse_int(key, value);
  else if (key == "horizon") m.horizon = parse_int(key, value);
  else if (key == "ar_order") m.ar_order = parse_int(key, value);
  else if (key == "flags") apply_flag_tokens(cfg, value);
  else throw ConfigError("config: unknown [model] key '" + key + "'");
}

void set_run(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "deterministic") cfg.deterministic = parse_bool(key, value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "dtype") {
    if (value == "f64") cfg.dtype = 1;
    else if (value == "f32") cfg.dtype = 2;
    else throw ConfigError("config: dtype must be f64 or f32");
  } else if (key == "noise_var") cfg.noise_var = parse_double(key, value);
  else throw ConfigError("config: unknown [run] key '" + key + "'");
}

}  // namespace

void apply_flag_tokens(ExperimentConfig& cfg, const std::string& tokens) {
  std::stringstream ss(tokens);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    if (tok == "diff") cfg.model.enable_diff = true;
    else if (tok == "no-diff") cfg.model.enable_diff = false;
    else if (tok == "adjuster") cfg.model.enable_adjuster = true;
    else if (tok == "no-adjuster") cfg.model.enable_adjuster = false;
    else if (tok == "residual") cfg.residual_flag = true;
    else if (tok == "no-residual") cfg.residual_flag = false;
    else throw ConfigError("config: unknown flag token '" + tok + "'");
  }
}

void ExperimentConfig::resolve_flags() {
  if (residual_flag.has_value())
    model.enable_residual = *residual_flag;
  else
    model.enable_residual = model.enable_diff || model.enable_adjuster;
}

void ExperimentConfig::validate() const {
  try {
    channel.validate();
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (n_traj < 2) throw ConfigError("config: n_traj must be >= 2");
  if (k < 2) throw ConfigError("config: K must be >= 2");
  for (int h : horizons)
    if (h < 1) throw ConfigError("config: horizons must be positive");
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    throw ConfigError("config: split_ratio must be in (0, 1)");
  if (model.k != k)
    throw ConfigError("config: [dataset] K and [model] K disagree");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: bad section header at line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "channel" && section != "dataset" && section != "model" &&
          section != "run")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value at line " + std::to_string(line_no));

    if (section == "channel") set_channel(cfg, key, value);
    else if (section == "dataset") set_dataset(cfg, key, value);
    else if (section == "model") set_model(cfg, key, value);
    else if (section == "run") set_run(cfg, key, value);
    else throw ConfigError("config: key '" + key + "' before any section");
  }
  cfg.resolve_flags();
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[channel]\n";
  os << "scenario = " << cfg.channel.name << "\n";
  os << "f = " << cfg.channel.carrier_hz << "\n";
  os << "N_l = " << cfg.channel.n_col << "\n";
  os << "N_r = " << cfg.channel.n_row << "\n";
  os << "polarization_angles = +-45\n";
  os << "BS_height = " << cfg.channel.bs_height_m << "\n";
  os << "UE_trajectory = "
     << (cfg.channel.trajectory == chan::TrajectoryKind::Linear ? "linear" : "circular")
     << "\n";
  os << "SRS_period = " << cfg.channel.srs_period_s << "\n";
  os << "speed = " << cfg.channel.speed_mps * 3.6;
  if (cfg.channel.speed_mps_max > cfg.channel.speed_mps)
    os << ":" << cfg.channel.speed_mps_max * 3.6;
  os << "\n";
  os << "L = " << cfg.channel.n_paths << "\n";
  os << "mode = "
     << (cfg.channel.mode == chan::SnapshotMode::Drifting ? "drifting" : "static")
     << "\n";
  os << "[dataset]\n";
  os << "n_traj = " << cfg.n_traj << "\n";
  os << "T = " << cfg.channel.snapshots << "\n";
  os << "K = " << cfg.k << "\n";
  os << "horizons = ";
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i)
    os << (i ? "," : "") << cfg.horizons[i];
  os << "\n";
  os << "split_ratio = " << cfg.split_ratio << "\n";
  os << "[model]\n";
  os << "kind = " << pred::kind_name(cfg.kind) << "\n";
  os << "K = " << cfg.model.k << "\n";
  os << "N_z = " << cfg.model.n_z << "\n";
  os << "N_w = " << cfg.model.n_w << "\n";
  os << "N_s = " << cfg.model.n_s << "\n";
  os << "learning_rate = " << cfg.model.learning_rate << "\n";
  os << "batch_size = " << cfg.model.batch_size << "\n";
  os << "epochs = " << cfg.model.epochs << "\n";
  os << "horizon = " << cfg.model.horizon << "\n";
  os << "ar_order = " << cfg.model.ar_order << "\n";
  os << "flags = " << (cfg.model.enable_diff ? "diff" : "no-diff") << ","
     << (cfg.model.enable_adjuster ? "adjuster" : "no-adjuster") << ","
     << (cfg.model.enable_residual ? "residual" : "no-residual") << "\n";
  os << "[run]\n";
  os << "seed = " << cfg.seed << "\n";
  os << "deterministic = " << (cfg.deterministic ? "true" : "false") << "\n";
  os << "dtype = " << (cfg.dtype == 1 ? "f64" : "f32") << "\n";
  os << "noise_var = " << cfg.noise_var << "\n";
  return os.str();
}

}  // namespace chanforecast::cli

#include "behex/config.hpp"

#include <fstream>
#include <sstream>

namespace behex::config {

ConfigError::ConfigError(int line_no, const std::string& what)
    : std::runtime_error("config line " + std::to_string(line_no) + ": " + what),
      line(line_no) {}

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (kv.entries_.count(full)) throw ConfigError(line_no, "duplicate key '" + full + "'");
    kv.entries_[full] = {value, line_no};
  }
  return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
  return it->second.value;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

int KeyValueFile::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

double KeyValueFile::get_double(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second.value, &used);
  } catch (const std::exception&) {
    throw ConfigError(it->second.line, "'" + key + "' is not a number");
  }
  if (used != it->second.value.size())
    throw ConfigError(it->second.line, "'" + key + "' has trailing junk");
  return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(line_of(key), "'" + key + "' must be an integer");
  return i;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(it->second.value, &used);
    if (used != it->second.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(it->second.line, "'" + key + "' is not a non-negative integer");
  }
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
  std::istringstream ss(get_string(key));
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  if (!ss.eof()) throw ConfigError(line_of(key), "'" + key + "' must be a list of numbers");
  if (out.empty()) throw ConfigError(line_of(key), "'" + key + "' is empty");
  return out;
}

std::vector<int> KeyValueFile::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (double v : get_doubles(key)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError(line_of(key), "'" + key + "' must be integers");
    out.push_back(i);
  }
  return out;
}

std::vector<std::pair<double, double>> KeyValueFile::get_ranges(const std::string& key) const {
  std::istringstream ss(get_string(key));
  std::vector<std::pair<double, double>> out;
  std::string tok;
  while (ss >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw ConfigError(line_of(key), "'" + key + "' entries must look like lo:hi");
    try {
      out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError(line_of(key), "'" + key + "' entries must look like lo:hi");
    }
  }
  if (out.empty()) throw ConfigError(line_of(key), "'" + key + "' is empty");
  return out;
}

sim::SimConfig sim_config_from(const KeyValueFile& kv) {
  sim::SimConfig c;
  c.map_kind = kv.get_string("map.kind", "rooms");
  c.map_width = kv.get_int("map.width", 40);
  c.map_height = kv.get_int("map.height", 40);
  c.resolution = kv.get_double("map.resolution", 0.1);
  c.map_file = kv.get_string("map.file", "");
  c.robots = kv.get_int("robots.count", 3);
  c.alpha_lo = kv.get_double("robots.alpha_lo", 1.0);
  c.alpha_hi = kv.get_double("robots.alpha_hi", 1.0);
  c.sensing_radius = kv.get_double("sensing.radius", 2.0);
  c.noise = kv.get_int("sensing.noise", 0);
  c.buffer_cap = kv.get_int("episode.buffer_cap", 14);
  if (!kv.has("episode.seed"))
    throw ConfigError(0, "missing required key 'episode.seed' (seeds are mandatory)");
  c.seed = kv.get_u64("episode.seed");
  c.completion_fraction = kv.get_double("episode.threshold", 0.99);
  c.tick_cap = kv.get_int("episode.tick_cap", 500);
  c.noise_border = kv.get_int("map.noise_border", 2);
  c.T = kv.get_int("allocation.T", 8);
  c.tau = kv.get_int("allocation.tau", 0);
  c.outer_periods = kv.get_int("allocation.outer_periods", 12);
  c.a0 = kv.get_double("allocation.a0", 0.05);
  c.b0 = kv.get_double("allocation.b0", 0.5);
  c.reward_delta = kv.get_double("allocation.reward_delta", 0.05);
  c.sample_cap = kv.get_int("allocation.sample_cap", 256);
  c.dro_theta = kv.get_double("allocation.theta", 0.1);
  c.validate();
  return c;
}

SweepLists sweep_lists_from(const KeyValueFile& kv) {
  SweepLists s;
  s.alpha_ranges = kv.get_ranges("sweep.alpha_ranges");
  s.radii = kv.get_doubles("sweep.radii");
  s.noises = kv.get_ints("sweep.noises");
  s.trials = kv.get_int("sweep.trials");
  if (s.trials < 1) throw ConfigError(kv.line_of("sweep.trials"), "'sweep.trials' must be >= 1");
  return s;
}

}  // namespace behex::config

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "behex/sim.hpp"

namespace behex::config {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& what);
};

// Flat key-value text with [section] headers and '#' comments. Keys are
// addressed as "section.key"; keys before any header live in the "" section.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  // Whitespace-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  // Pairs "lo:hi" separated by whitespace.
  std::vector<std::pair<double, double>> get_ranges(const std::string& key) const;

  int line_of(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
};

// Builds a SimConfig from the [map]/[robots]/[sensing]/[episode]/[allocation]
// sections. The seed is mandatory; a missing seed is a ConfigError.
sim::SimConfig sim_config_from(const KeyValueFile& kv);

struct SweepLists {
  std::vector<std::pair<double, double>> alpha_ranges;
  std::vector<double> radii;
  std::vector<int> noises;
  int trials = 1;
};
SweepLists sweep_lists_from(const KeyValueFile& kv);

}  // namespace behex::config

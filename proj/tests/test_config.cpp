#include <doctest.h>

#include "behex/config.hpp"

using namespace behex::config;

namespace {
const char* kSample = R"(# sample episode config
[map]
kind = rooms
width = 40
height = 40

[robots]
count = 3
alpha_lo = 0.8
alpha_hi = 1.2

[sensing]
radius = 2
noise = 0

[episode]
seed = 42
threshold = 0.99
tick_cap = 500

[sweep]
alpha_ranges = 0.3:0.7 0.8:1.2 2:4
radii = 2
noises = 2
trials = 10
)";
}

TEST_CASE("key-value parsing with sections and comments") {
  const auto kv = KeyValueFile::parse_string(kSample);
  CHECK(kv.get_string("map.kind") == "rooms");
  CHECK(kv.get_int("robots.count") == 3);
  CHECK(kv.get_double("sensing.radius") == 2.0);
  CHECK(kv.get_u64("episode.seed") == 42);
  CHECK(kv.get_int("missing.key", 7) == 7);

  const auto ranges = kv.get_ranges("sweep.alpha_ranges");
  REQUIRE(ranges.size() == 3);
  CHECK(ranges[0] == std::pair{0.3, 0.7});
  CHECK(ranges[2] == std::pair{2.0, 4.0});
}

TEST_CASE("config errors carry line numbers") {
  try {
    KeyValueFile::parse_string("[map]\nwidth 40\n");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
  }
  try {
    const auto kv = KeyValueFile::parse_string("[map]\nwidth = forty\n");
    kv.get_int("map.width");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(KeyValueFile::parse_string("[map\nkind = open\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse_string("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("sim config: defaults and mandatory seed") {
  const auto kv = KeyValueFile::parse_string(kSample);
  const auto cfg = sim_config_from(kv);
  CHECK(cfg.map_kind == "rooms");
  CHECK(cfg.robots == 3);
  CHECK(cfg.seed == 42);
  CHECK(cfg.buffer_cap == 14);  // default N
  CHECK(cfg.completion_fraction == 0.99);

  const auto no_seed = KeyValueFile::parse_string("[map]\nkind = open\n");
  CHECK_THROWS_AS(sim_config_from(no_seed), ConfigError);
}

TEST_CASE("sweep lists") {
  const auto kv = KeyValueFile::parse_string(kSample);
  const auto lists = sweep_lists_from(kv);
  CHECK(lists.alpha_ranges.size() == 3);
  CHECK(lists.radii == std::vector<double>{2.0});
  CHECK(lists.noises == std::vector<int>{2});
  CHECK(lists.trials == 10);

  const auto missing = KeyValueFile::parse_string("[episode]\nseed = 1\n");
  CHECK_THROWS_AS(sweep_lists_from(missing), ConfigError);
}

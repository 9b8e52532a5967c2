#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ipthunt/desk/world.hpp"
#include "ipthunt/infiltrate/fetch.hpp"

namespace ipthunt::desk {

// Files of a self-contained demo run, all under one directory:
//   corpus.jsonl         mock search corpus
//   seed_keywords.txt    one seed keyword
//   seed_urs.txt         one seed URS template
//   scenario.json        web of the promoted websites, with "us" and "cn" variants
//   telegram.json        messaging fixtures for the promoted Telegram handles
//   ranking.txt          popularity ranking of apex domains
//   keywords.txt         plain keywords for the exposure probe
struct DemoFixtures {
  std::filesystem::path dir;
  MockWorld world;
  std::vector<std::string> websites;
  std::vector<std::string> telegram_handles;
};

// Scenario for the given websites: direct pages, redirect chains of one to
// six hosts through 3xx, meta refresh and script hops, a shared landing page,
// a loop, iframe cloaking, a block page and a vantage-dependent redirect.
Scenario demo_scenario(const std::vector<std::string>& websites, std::uint64_t seed);

// Account fixtures cycling channel, group, user and bot, with messages in
// epochs 0 to 2.
nlohmann::json demo_telegram(const std::vector<std::string>& handles, std::uint64_t seed);

DemoFixtures write_demo_fixtures(const std::filesystem::path& dir, std::uint64_t seed = 7);

}  // namespace ipthunt::desk

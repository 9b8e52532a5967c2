// Writes the demo fixture set used in the README walkthrough.
#include <iostream>

#include <CLI11.hpp>

#include "ipthunt/desk/fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Writes a self-contained demo fixture set.", "ipthunt-fixtures"};
  std::string dir = "fixtures";
  std::uint64_t seed = 7;
  app.add_option("dir", dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto f = ipthunt::desk::write_demo_fixtures(dir, seed);
    std::cout << "wrote " << f.world.documents.size() << " documents, " << f.websites.size() << " websites, "
              << f.telegram_handles.size() << " Telegram handles to " << dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

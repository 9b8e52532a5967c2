#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipthunt/hunter/adapter.hpp"

namespace ipthunt::desk {

struct PlantedIpt {
  std::string text;
  std::string contact_phrase;       // the contact segment as written
  ContactKind contact_kind = ContactKind::Other;
  std::string contact_value;
  std::string website;              // website contact, may be empty
  std::vector<std::size_t> sites;   // indexes into MockWorld::templates
  bool isolated = false;
};

// Search-engine corpus in which planted promotion texts are reflected by URS
// sites. Connected IPTs share sites with each other; isolated ones live on
// sites and use contacts nothing else points to. Benign reflections and
// static pages fill the rest.
struct MockWorld {
  std::vector<std::string> templates;
  std::vector<bool> isolated_site;
  std::vector<PlantedIpt> ipts;
  std::vector<MockDocument> documents;
};

MockWorld make_world(std::size_t connected_ipts, std::size_t sites, std::size_t isolated_ipts, std::uint64_t seed);

}  // namespace ipthunt::desk

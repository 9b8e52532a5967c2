#include "ipthunt/desk/world.hpp"

#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/reflection/reflection.hpp"

namespace ipthunt::desk {

namespace {

std::string site_template(std::size_t i, bool isolated) {
  const std::string host = (isolated ? "island" : "portal") + std::to_string(i);
  switch (i % 3) {
    case 0: return "https://search." + host + ".com/all?keyword={R}";
    case 1: return "https://www." + host + ".org/tags/{R}";
    default: return "https://" + host + ".net/s?lang=en&q={R}&page=1";
  }
}

MockDocument reflecting_page(const std::string& tmpl, const std::string& text) {
  MockDocument d;
  d.url = instantiate(tmpl, text);
  d.title = text + " - search results";
  d.snippet = "Results for " + text;
  d.body_text_by_location[ReflectionLocation::body_text] = "You searched for: " + text;
  return d;
}

}  // namespace

MockWorld make_world(std::size_t connected_ipts, std::size_t sites, std::size_t isolated_ipts, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MockWorld w;
  for (std::size_t i = 0; i < sites; ++i) {
    w.templates.push_back(site_template(i, false));
    w.isolated_site.push_back(false);
  }
  const std::size_t island = w.templates.size();
  if (isolated_ipts > 0) {
    w.templates.push_back(site_template(sites, true));
    w.isolated_site.push_back(true);
  }

  for (std::size_t i = 0; i < connected_ipts; ++i) {
    const auto ipt = make_ipt(rng);
    PlantedIpt p;
    p.text = ipt.text;
    p.contact_phrase = ipt.contact_phrase;
    p.contact_kind = ipt.contact_kind;
    p.contact_value = ipt.contact_value;
    p.website = ipt.website;
    // Consecutive IPTs share a site, which chains every site together.
    p.sites = {i % sites, (i + 1) % sites};
    if (p.sites[0] == p.sites[1]) p.sites.pop_back();
    w.ipts.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < isolated_ipts; ++i) {
    PlantedIpt p;
    const auto handle = "zz" + make_handle(rng, ContactKind::Telegram) + "island";
    p.contact_phrase = "telegram:@" + handle;
    p.contact_kind = ContactKind::Telegram;
    p.contact_value = handle;
    p.text = "【孤岛特供" + std::to_string(i) + "】隐秘渠道🔥" + p.contact_phrase;
    p.sites = {island};
    p.isolated = true;
    w.ipts.push_back(std::move(p));
  }
  for (const auto& p : w.ipts)
    for (auto s : p.sites) w.documents.push_back(reflecting_page(w.templates[s], p.text));

  // Benign reflections on every site and static pages quoting IPT text.
  for (std::size_t s = 0; s < w.templates.size(); ++s)
    for (int k = 0; k < 3; ++k) w.documents.push_back(reflecting_page(w.templates[s], make_benign(rng)));
  for (std::size_t i = 0; i < 10 && i < w.ipts.size(); ++i) {
    if (w.ipts[i].isolated) continue;
    MockDocument d;
    d.url = "https://forum" + std::to_string(i) + ".example.com/thread/" + std::to_string(1000 + i);
    d.title = "spam report";
    d.snippet = "reported text: " + w.ipts[i].text;
    w.documents.push_back(std::move(d));
  }
  // Shuffle so corpus order carries no information.
  for (std::size_t i = w.documents.size(); i > 1; --i) std::swap(w.documents[i - 1], w.documents[rng.below(i)]);
  return w;
}

}  // namespace ipthunt::desk

#include "ipthunt/reflection/public_suffix.hpp"

#include <cctype>
#include <unordered_set>

#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace {

// Multi-label suffixes commonly seen in abused domains. Any host not matching
// one of these falls back to its last label as the public suffix.
const std::unordered_set<std::string>& multi_label_suffixes() {
  static const std::unordered_set<std::string> s = {
      "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "ltd.uk", "plc.uk", "net.uk",
      "com.cn", "net.cn", "org.cn", "gov.cn", "edu.cn", "ac.cn", "ah.cn", "bj.cn", "sh.cn",
      "gd.cn", "zj.cn", "js.cn", "sd.cn", "sc.cn", "hb.cn", "hn.cn", "fj.cn", "tj.cn", "cq.cn",
      "com.hk", "net.hk", "org.hk", "edu.hk", "gov.hk", "idv.hk",
      "com.tw", "net.tw", "org.tw", "edu.tw", "gov.tw", "idv.tw",
      "com.mo", "net.mo", "org.mo",
      "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp", "ed.jp", "ad.jp", "gr.jp", "lg.jp",
      "co.kr", "or.kr", "ne.kr", "ac.kr", "go.kr", "re.kr",
      "com.vn", "net.vn", "org.vn", "edu.vn", "gov.vn", "info.vn",
      "com.sg", "net.sg", "org.sg", "edu.sg", "gov.sg",
      "com.my", "net.my", "org.my", "edu.my", "gov.my",
      "co.th", "in.th", "ac.th", "go.th", "or.th",
      "com.ph", "net.ph", "org.ph", "edu.ph", "gov.ph",
      "co.id", "or.id", "ac.id", "go.id", "web.id",
      "co.in", "net.in", "org.in", "ac.in", "gov.in", "edu.in",
      "com.au", "net.au", "org.au", "edu.au", "gov.au", "asn.au", "id.au",
      "co.nz", "net.nz", "org.nz", "ac.nz", "govt.nz",
      "com.br", "net.br", "org.br", "gov.br", "edu.br",
      "com.mx", "org.mx", "gob.mx", "edu.mx",
      "com.ar", "org.ar", "gob.ar",
      "com.tr", "org.tr", "gov.tr", "edu.tr",
      "co.za", "org.za", "gov.za", "ac.za",
      "com.ru", "org.ru", "net.ru", "msk.ru", "spb.ru",
      "com.ua", "org.ua", "kiev.ua",
      "co.il", "org.il", "ac.il", "gov.il",
      "com.sa", "com.eg", "com.pk", "com.ng", "com.co", "com.pe", "com.ve",
      "github.io", "gitlab.io", "blogspot.com", "appspot.com", "herokuapp.com",
      "azurewebsites.net", "cloudfront.net", "netlify.app", "vercel.app", "pages.dev",
      "workers.dev", "web.app", "firebaseapp.com", "wordpress.com", "tumblr.com",
  };
  return s;
}

bool is_ip_literal(std::string_view host) {
  if (host.empty()) return false;
  if (host.front() == '[') return true;
  for (char c : host)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return false;
  return true;
}

}  // namespace

std::string public_suffix(std::string_view host_in) {
  std::string host = ascii_lower(host_in);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (is_ip_literal(host)) return {};
  // Try successively shorter suffixes; the first hit is the longest.
  std::size_t start = 0;
  while (true) {
    const std::string candidate = host.substr(start);
    if (multi_label_suffixes().contains(candidate)) return candidate;
    const auto dot = host.find('.', start);
    if (dot == std::string::npos) return candidate;
    start = dot + 1;
  }
}

std::string apex_domain(std::string_view host_in) {
  std::string host = ascii_lower(host_in);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (is_ip_literal(host)) return host;
  const std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return host;
  const std::string_view rest(host.data(), host.size() - suffix.size() - 1);
  const auto dot = rest.rfind('.');
  return dot == std::string_view::npos ? host : host.substr(dot + 1);
}

}  // namespace ipthunt

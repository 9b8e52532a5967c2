#include "ipthunt/infiltrate/fetch.hpp"

#include <fstream>

#include <httplib.h>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"

namespace ipthunt {

namespace {

ScenarioResponse response_from_json(const nlohmann::json& j) {
  ScenarioResponse r;
  r.status = j.value("status", j.contains("redirect") ? 302 : 200);
  if (j.contains("headers"))
    for (const auto& [k, v] : j.at("headers").items()) r.headers[ascii_lower(k)] = v.get<std::string>();
  r.body = j.value("body", "");
  if (j.contains("redirect")) r.redirect = j.at("redirect").get<std::string>();
  return r;
}

nlohmann::json response_to_json(const ScenarioResponse& r) {
  nlohmann::json j{{"status", r.status}};
  if (!r.headers.empty()) j["headers"] = r.headers;
  if (!r.body.empty()) j["body"] = r.body;
  if (r.redirect) j["redirect"] = *r.redirect;
  return j;
}

}  // namespace

std::string FetchResponse::header(const std::string& lower_name) const {
  auto it = headers.find(lower_name);
  return it == headers.end() ? std::string() : it->second;
}

FetchResponse ScenarioResponse::to_response(const std::string& url) const {
  FetchResponse out;
  out.status = status;
  out.headers = headers;
  out.body = body;
  out.final_url = url;
  if (redirect) out.headers["location"] = *redirect;
  return out;
}

const ScenarioResponse& ScenarioRoute::for_vantage(const std::string& vantage) const {
  auto it = vantages.find(vantage);
  return it == vantages.end() ? response : it->second;
}

std::string Scenario::route_key(const std::string& url) {
  const auto u = parse_url(url);
  std::string key = u.host;
  if (u.port) key += ":" + std::to_string(*u.port);
  key += u.path.empty() ? "/" : u.path;
  if (u.query) key += "?" + *u.query;
  return key;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    if (j.contains("routes")) {
      for (const auto& [url, spec] : j.at("routes").items()) {
        s.add(url, response_from_json(spec));
        if (spec.contains("vantages"))
          for (const auto& [v, vs] : spec.at("vantages").items()) s.add_variant(url, v, response_from_json(vs));
      }
    }
    if (j.contains("unreachable"))
      for (const auto& url : j.at("unreachable")) s.add_unreachable(url.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad scenario: ") + e.what());
  }
  return s;
}

Scenario Scenario::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw StorageIoError("cannot read scenario " + file.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("bad scenario " + file.string() + ": " + e.what());
  }
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json routes = nlohmann::json::object();
  for (const auto& [key, route] : routes_) {
    auto j = response_to_json(route.response);
    for (const auto& [v, r] : route.vantages) j["vantages"][v] = response_to_json(r);
    routes["http://" + key] = j;
  }
  nlohmann::json out{{"routes", routes}};
  if (!unreachable_.empty()) {
    out["unreachable"] = nlohmann::json::array();
    for (const auto& [key, _] : unreachable_) out["unreachable"].push_back("http://" + key);
  }
  return out;
}

void Scenario::add(const std::string& url, ScenarioResponse response) {
  routes_[route_key(url)].response = std::move(response);
}

void Scenario::add_variant(const std::string& url, const std::string& vantage, ScenarioResponse response) {
  routes_[route_key(url)].vantages[vantage] = std::move(response);
}

void Scenario::add_unreachable(const std::string& url) { unreachable_[route_key(url)] = true; }

const ScenarioRoute* Scenario::find(const std::string& url) const {
  const auto key = route_key(url);
  if (unreachable_.count(key)) return nullptr;
  auto it = routes_.find(key);
  return it == routes_.end() ? nullptr : &it->second;
}

bool Scenario::unreachable(const std::string& url) const { return unreachable_.count(route_key(url)) > 0; }

ScenarioBackend::ScenarioBackend(std::shared_ptr<const Scenario> scenario, std::string vantage)
    : scenario_(std::move(scenario)), vantage_(std::move(vantage)) {}

FetchResponse ScenarioBackend::get(const std::string& url) {
  {
    std::lock_guard lock(mutex_);
    ++requests_;
  }
  if (scenario_->unreachable(url)) throw NetworkError("unreachable: " + url);
  const auto* route = scenario_->find(url);
  if (!route) {
    FetchResponse r;
    r.status = 404;
    r.final_url = url;
    r.body = "<html><body>not found</body></html>";
    return r;
  }
  return route->for_vantage(vantage_).to_response(url);
}

std::size_t ScenarioBackend::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

HttpFetchBackend::HttpFetchBackend(std::string vantage, HttpFetchOptions options)
    : vantage_(std::move(vantage)), options_(std::move(options)) {}

void HttpFetchBackend::wait_turn(const std::string& host) {
  if (options_.courtesy_delay.count() <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    auto it = last_request_.find(host);
    slot = it == last_request_.end() ? now : std::max(now, it->second + options_.courtesy_delay);
    last_request_[host] = slot;
  }
  std::this_thread::sleep_until(slot);
}

FetchResponse HttpFetchBackend::get(const std::string& url) {
  const auto u = parse_url(url);
  std::string endpoint;
  if (options_.connect_to) {
    endpoint = "http://" + *options_.connect_to;
  } else {
    if (u.scheme != "http") throw NetworkError("no TLS support for " + url);
    endpoint = "http://" + u.host + (u.port ? ":" + std::to_string(*u.port) : "");
  }
  wait_turn(u.host);
  httplib::Client client(endpoint);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(options_.connect_timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(options_.read_timeout));
  client.set_follow_location(false);
  std::string target = u.path.empty() ? "/" : u.path;
  if (u.query) target += "?" + *u.query;
  httplib::Headers headers{{"User-Agent", options_.user_agent}};
  if (options_.connect_to) headers.emplace("Host", u.host + (u.port ? ":" + std::to_string(*u.port) : ""));
  const auto res = client.Get(target, headers);
  if (!res) throw NetworkError(url + ": " + httplib::to_string(res.error()));
  FetchResponse out;
  out.status = res->status;
  for (const auto& [k, v] : res->headers) out.headers[ascii_lower(k)] = v;
  out.body = res->body;
  out.final_url = url;
  return out;
}

struct FixtureServer::Impl {
  httplib::Server server;
  std::thread thread;
};

FixtureServer::FixtureServer(std::shared_ptr<const Scenario> scenario, std::string vantage)
    : impl_(std::make_unique<Impl>()) {
  impl_->server.Get(".*", [scenario, vantage](const httplib::Request& req, httplib::Response& res) {
    const auto host = req.get_header_value("Host");
    const auto url = "http://" + host + (req.target.empty() ? "/" : req.target);
    const ScenarioRoute* route = nullptr;
    try {
      route = scenario->find(url);
    } catch (const MalformedUrl&) {
    }
    if (!route) {
      res.status = 404;
      res.set_content("<html><body>not found</body></html>", "text/html");
      return;
    }
    const auto& r = route->for_vantage(vantage);
    res.status = r.status;
    for (const auto& [k, v] : r.headers)
      if (k != "content-type") res.set_header(k, v);
    if (r.redirect) res.set_header("Location", *r.redirect);
    auto it = r.headers.find("content-type");
    res.set_content(r.body, it == r.headers.end() ? "text/html; charset=utf-8" : it->second);
  });
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw NetworkError("fixture server could not bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

FixtureServer::~FixtureServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ipthunt

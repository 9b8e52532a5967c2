#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "ipthunt/core/time.hpp"

namespace ipthunt {

struct FetchResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // names lowercased
  std::string body;
  std::string final_url;

  std::string header(const std::string& lower_name) const;
};

// Single GET without redirect following. Implementations throw NetworkError
// when no response could be obtained. The vantage label names the network
// location the requests originate from.
class FetchBackend {
 public:
  virtual ~FetchBackend() = default;
  virtual FetchResponse get(const std::string& url) = 0;
  virtual std::string vantage() const = 0;
};

struct ScenarioResponse {
  int status = 200;
  std::map<std::string, std::string> headers;
  std::string body;
  std::optional<std::string> redirect;  // sets the Location header

  FetchResponse to_response(const std::string& url) const;
};

struct ScenarioRoute {
  ScenarioResponse response;
  std::map<std::string, ScenarioResponse> vantages;

  const ScenarioResponse& for_vantage(const std::string& vantage) const;
};

// Fixture web: routes keyed by URL without scheme and fragment
// ("host/path?query", host lowercased, empty path as "/").
//
//   {"routes": {"https://a.test/": {"status": 302, "redirect": "https://b.test/x",
//                                   "vantages": {"us": {"status": 200, "body": "..."}}}}}
//
// Routes listed under "unreachable" fail with a network error.
class Scenario {
 public:
  Scenario() = default;
  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::filesystem::path& file);
  nlohmann::json to_json() const;

  void add(const std::string& url, ScenarioResponse response);
  void add_variant(const std::string& url, const std::string& vantage, ScenarioResponse response);
  void add_unreachable(const std::string& url);

  // nullptr when the URL is unknown or unreachable.
  const ScenarioRoute* find(const std::string& url) const;
  bool unreachable(const std::string& url) const;
  std::size_t size() const { return routes_.size(); }

  static std::string route_key(const std::string& url);

 private:
  std::map<std::string, ScenarioRoute> routes_;
  std::map<std::string, bool> unreachable_;
};

// In-process backend serving a scenario. Unknown URLs answer 404.
class ScenarioBackend final : public FetchBackend {
 public:
  ScenarioBackend(std::shared_ptr<const Scenario> scenario, std::string vantage);
  FetchResponse get(const std::string& url) override;
  std::string vantage() const override { return vantage_; }
  std::size_t requests() const;

 private:
  std::shared_ptr<const Scenario> scenario_;
  std::string vantage_;
  mutable std::mutex mutex_;
  std::size_t requests_ = 0;
};

struct HttpFetchOptions {
  // When set, every request connects here ("host:port") over plain HTTP and
  // carries the URL's host in the Host header.
  std::optional<std::string> connect_to;
  Duration connect_timeout{10};
  Duration read_timeout{20};
  // Minimum spacing between two requests to the same host.
  std::chrono::milliseconds courtesy_delay{0};
  std::string user_agent = "ipthunt/1.0";
};

// Plain-HTTP backend (built without TLS support: https URLs need connect_to).
class HttpFetchBackend final : public FetchBackend {
 public:
  HttpFetchBackend(std::string vantage, HttpFetchOptions options = {});
  FetchResponse get(const std::string& url) override;
  std::string vantage() const override { return vantage_; }

 private:
  void wait_turn(const std::string& host);

  std::string vantage_;
  HttpFetchOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> last_request_;
};

// Local HTTP server answering from a scenario as seen from one vantage.
// Requests are routed by their Host header and target.
class FixtureServer {
 public:
  FixtureServer(std::shared_ptr<const Scenario> scenario, std::string vantage);
  ~FixtureServer();
  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  int port() const { return port_; }
  std::string address() const { return "127.0.0.1:" + std::to_string(port_); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace ipthunt

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "umbrella/driver/config.hpp"

namespace httplib {
class Server;
struct Request;
struct Response;
}

namespace umbrella::testing {

std::string fixture_path(const std::string& relative);
std::string read_fixture(const std::string& relative);

struct RecordedRequest {
  std::string method;
  std::string path;
  std::string body;
};

/// Local HTTP server on 127.0.0.1 (ephemeral port) answering from the
/// committed fixtures plus an in-memory flow store.
class StubServer {
 public:
  virtual ~StubServer();

  std::uint16_t port() const { return port_; }
  std::string endpoint() const;
  DriverConfig driver_config() const;

  std::vector<RecordedRequest> requests() const;
  void clear_requests();

  /// When non-zero every request is answered with this status.
  std::atomic<int> forced_status{0};

 protected:
  /// `basic_token` is the expected base64 of "user:password".
  StubServer(std::string driver_name, std::string user, std::string password, std::string basic_token);
  void start();
  void shutdown();
  /// Records the request and applies auth and forced_status. False when
  /// the response has already been set.
  bool admit(const httplib::Request& req, httplib::Response& res);

  std::unique_ptr<httplib::Server> server_;
  mutable std::mutex mu_;

 private:
  std::string driver_name_;
  std::string user_;
  std::string password_;
  std::string basic_token_;
  std::uint16_t port_{0};
  std::thread thread_;
  std::vector<RecordedRequest> requests_;
};

/// ONOS REST: devices/links/hosts/flows/statistics from fixtures/onos.
class OnosStub : public StubServer {
 public:
  OnosStub();
  ~OnosStub() override;

 private:
  nlohmann::json fixture_flows_;
  std::vector<nlohmann::json> installed_;
  std::uint64_t next_id_{9000000000000001};
};

/// ODL RESTCONF: operational topology/inventory from fixtures/odl, config
/// datastore kept in memory.
class OdlStub : public StubServer {
 public:
  OdlStub();
  ~OdlStub() override;

 private:
  nlohmann::json inventory_;
  // node -> table -> flow id -> flow object
  std::map<std::string, std::map<int, std::map<std::string, nlohmann::json>>> config_;
};

}  // namespace umbrella::testing

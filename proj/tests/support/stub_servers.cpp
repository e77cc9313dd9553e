// SPDX-License-Identifier: Apache-2.0
#include "stub_servers.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <httplib.h>

namespace umbrella::testing {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const std::string& body = {}) {
  res.status = status;
  if (!body.empty()) res.set_content(body, kJson);
}

void not_found(httplib::Response& res, const std::string& what) {
  reply(res, 404, json{{"code", 404}, {"message", what + " not found"}}.dump());
}

}  // namespace

std::string fixture_path(const std::string& relative) { return std::string(UMBRELLA_FIXTURE_DIR) + "/" + relative; }

std::string read_fixture(const std::string& relative) {
  std::ifstream in(fixture_path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + relative);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

StubServer::StubServer(std::string driver_name, std::string user, std::string password, std::string basic_token)
    : server_(std::make_unique<httplib::Server>()),
      driver_name_(std::move(driver_name)),
      user_(std::move(user)),
      password_(std::move(password)),
      basic_token_(std::move(basic_token)) {}

StubServer::~StubServer() { shutdown(); }

void StubServer::start() {
  const int port = server_->bind_to_any_port("127.0.0.1");
  if (port <= 0) throw std::runtime_error("stub server could not bind");
  port_ = static_cast<std::uint16_t>(port);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void StubServer::shutdown() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubServer::endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

DriverConfig StubServer::driver_config() const {
  DriverConfig c;
  c.name = driver_name_;
  c.endpoint = endpoint();
  c.username = user_;
  c.password = password_;
  c.request_timeout_ms = 2000;
  return c;
}

std::vector<RecordedRequest> StubServer::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

void StubServer::clear_requests() {
  std::lock_guard lock(mu_);
  requests_.clear();
}

bool StubServer::admit(const httplib::Request& req, httplib::Response& res) {
  {
    std::lock_guard lock(mu_);
    requests_.push_back({req.method, req.path, req.body});
  }
  if (req.get_header_value("Authorization") != "Basic " + basic_token_) {
    reply(res, 401, R"({"code":401,"message":"Unauthorized"})");
    return false;
  }
  if (const int forced = forced_status.load(); forced != 0) {
    reply(res, forced, R"({"code":0,"message":"forced"})");
    return false;
  }
  return true;
}

// ---- ONOS -----------------------------------------------------------------

OnosStub::OnosStub() : StubServer("onos", "onos", "rocks", "b25vczpyb2Nrcw==") {
  fixture_flows_ = json::parse(read_fixture("onos/flows.json"))["flows"];
  const auto devices = json::parse(read_fixture("onos/devices.json"));
  auto known = std::make_shared<std::set<std::string>>();
  for (const auto& d : devices["devices"]) known->insert(d["id"].get<std::string>());

  auto serve = [this](const std::string& fixture) {
    return [this, fixture](const httplib::Request& req, httplib::Response& res) {
      if (admit(req, res)) reply(res, 200, read_fixture(fixture));
    };
  };
  server_->Get("/onos/v1/devices", serve("onos/devices.json"));
  server_->Get("/onos/v1/links", serve("onos/links.json"));
  server_->Get("/onos/v1/hosts", serve("onos/hosts.json"));

  auto all_flows = [this](const std::string& device) {
    json out = json::array();
    std::lock_guard lock(mu_);
    for (const auto& f : fixture_flows_) {
      if (device.empty() || f["deviceId"] == device) out.push_back(f);
    }
    for (const auto& f : installed_) {
      if (device.empty() || f["deviceId"] == device) out.push_back(f);
    }
    return out;
  };

  server_->Get("/onos/v1/flows", [this, all_flows](const httplib::Request& req, httplib::Response& res) {
    if (admit(req, res)) reply(res, 200, json{{"flows", all_flows("")}}.dump());
  });
  server_->Get(R"(/onos/v1/flows/([^/]+))", [this, all_flows, known](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string device = req.matches[1];
    if (!known->count(device)) return not_found(res, device);
    reply(res, 200, json{{"flows", all_flows(device)}}.dump());
  });
  server_->Get(R"(/onos/v1/flows/([^/]+)/([^/]+))", [this, all_flows](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string device = req.matches[1];
    const std::string id = req.matches[2];
    for (const auto& f : all_flows(device)) {
      if (f["id"] == id) return reply(res, 200, json{{"flows", json::array({f})}}.dump());
    }
    not_found(res, "flow " + id);
  });
  server_->Post(R"(/onos/v1/flows/([^/]+))", [this, known](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string device = req.matches[1];
    if (!known->count(device)) return not_found(res, device);
    json flow;
    try {
      flow = json::parse(req.body);
    } catch (const json::exception&) {
      return reply(res, 400, R"({"code":400,"message":"bad json"})");
    }
    if (flow.value("deviceId", "") != device) return reply(res, 400, R"({"code":400,"message":"deviceId mismatch"})");
    std::string id;
    {
      std::lock_guard lock(mu_);
      id = std::to_string(next_id_++);
      flow["id"] = id;
      flow["state"] = "ADDED";
      flow["appId"] = req.has_param("appId") ? req.get_param_value("appId") : "org.onosproject.rest";
      flow["packets"] = 0;
      flow["bytes"] = 0;
      flow["life"] = 0;
      installed_.push_back(flow);
    }
    res.set_header("Location", endpoint() + "/onos/v1/flows/" + device + "/" + id);
    reply(res, 201);
  });
  server_->Delete(R"(/onos/v1/flows/([^/]+)/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string device = req.matches[1];
    const std::string id = req.matches[2];
    std::lock_guard lock(mu_);
    for (auto it = installed_.begin(); it != installed_.end(); ++it) {
      if ((*it)["deviceId"] == device && (*it)["id"] == id) {
        installed_.erase(it);
        return reply(res, 204);
      }
    }
    not_found(res, "flow " + id);
  });
  server_->Get(R"(/onos/v1/statistics/ports/([^/]+))", [this, known](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string device = req.matches[1];
    if (!known->count(device)) return not_found(res, device);
    if (device == "of:0000000000000001") return reply(res, 200, read_fixture("onos/port_stats_of1.json"));
    reply(res, 200, json{{"statistics", json::array({{{"device", device}, {"ports", json::array()}}})}}.dump());
  });
  start();
}

OnosStub::~OnosStub() { shutdown(); }

// ---- ODL ------------------------------------------------------------------

namespace {
const std::string kOper = "/restconf/operational/opendaylight-inventory:nodes";
const std::string kConf = "/restconf/config/opendaylight-inventory:nodes";
const std::string kFlowSuffix = R"(/node/([^/]+)/flow-node-inventory:table/(\d+)/flow/([^/]+))";
}  // namespace

OdlStub::OdlStub() : StubServer("odl", "admin", "admin", "YWRtaW46YWRtaW4=") {
  inventory_ = json::parse(read_fixture("odl/inventory.json"));

  server_->Get("/restconf/operational/network-topology:network-topology",
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (admit(req, res)) reply(res, 200, read_fixture("odl/topology.json"));
               });
  server_->Get(kOper, [this](const httplib::Request& req, httplib::Response& res) {
    if (admit(req, res)) reply(res, 200, inventory_.dump());
  });
  auto find_node = [this](const std::string& id) -> const json* {
    for (const auto& n : inventory_["nodes"]["node"]) {
      if (n["id"] == id) return &n;
    }
    return nullptr;
  };
  server_->Get(kOper + R"(/node/([^/]+))", [this, find_node](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const json* n = find_node(req.matches[1]);
    if (n == nullptr) return not_found(res, req.matches[1]);
    reply(res, 200, json{{"node", json::array({*n})}}.dump());
  });
  server_->Get(kOper + kFlowSuffix, [this, find_node](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const json* n = find_node(req.matches[1]);
    const int table = std::stoi(req.matches[2]);
    if (n != nullptr) {
      for (const auto& t : (*n)["flow-node-inventory:table"]) {
        if (t["id"] != table) continue;
        for (const auto& f : t["flow"]) {
          if (f["id"] == req.matches[3]) return reply(res, 200, json{{"flow-node-inventory:flow", json::array({f})}}.dump());
        }
      }
    }
    not_found(res, "flow");
  });

  auto node_json = [](const std::string& id, const std::map<int, std::map<std::string, json>>& tables) {
    json t = json::array();
    for (const auto& [table, flows] : tables) {
      json list = json::array();
      for (const auto& [fid, f] : flows) list.push_back(f);
      t.push_back({{"id", table}, {"flow", list}});
    }
    return json{{"id", id}, {"flow-node-inventory:table", t}};
  };
  server_->Get(kConf, [this, node_json](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    std::lock_guard lock(mu_);
    if (config_.empty()) return not_found(res, "data");
    json nodes = json::array();
    for (const auto& [id, tables] : config_) nodes.push_back(node_json(id, tables));
    reply(res, 200, json{{"nodes", {{"node", nodes}}}}.dump());
  });
  server_->Get(kConf + R"(/node/([^/]+))", [this, node_json](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    std::lock_guard lock(mu_);
    auto it = config_.find(req.matches[1]);
    if (it == config_.end()) return not_found(res, "data");
    reply(res, 200, json{{"node", json::array({node_json(it->first, it->second)})}}.dump());
  });
  server_->Get(kConf + kFlowSuffix, [this](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    std::lock_guard lock(mu_);
    auto n = config_.find(req.matches[1]);
    if (n != config_.end()) {
      auto t = n->second.find(std::stoi(req.matches[2]));
      if (t != n->second.end()) {
        auto f = t->second.find(req.matches[3]);
        if (f != t->second.end()) return reply(res, 200, json{{"flow-node-inventory:flow", json::array({f->second})}}.dump());
      }
    }
    not_found(res, "data");
  });
  server_->Put(kConf + kFlowSuffix, [this](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    const std::string node = req.matches[1];
    const int table = std::stoi(req.matches[2]);
    const std::string id = req.matches[3];
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return reply(res, 400, R"({"errors":{"error":[{"error-tag":"malformed-message"}]}})");
    }
    const auto& list = body["flow-node-inventory:flow"];
    if (!list.is_array() || list.size() != 1 || list[0].value("id", "") != id || list[0].value("table_id", -1) != table) {
      return reply(res, 400, R"({"errors":{"error":[{"error-tag":"invalid-value"}]}})");
    }
    std::lock_guard lock(mu_);
    auto& slot = config_[node][table];
    const bool created = !slot.count(id);
    slot[id] = list[0];
    reply(res, created ? 201 : 200);
  });
  server_->Delete(kConf + kFlowSuffix, [this](const httplib::Request& req, httplib::Response& res) {
    if (!admit(req, res)) return;
    std::lock_guard lock(mu_);
    auto n = config_.find(req.matches[1]);
    if (n != config_.end()) {
      auto t = n->second.find(std::stoi(req.matches[2]));
      if (t != n->second.end() && t->second.erase(req.matches[3]) == 1) {
        if (t->second.empty()) n->second.erase(t);
        if (n->second.empty()) config_.erase(n);
        return reply(res, 200);
      }
    }
    not_found(res, "data");
  });
  start();
}

OdlStub::~OdlStub() { shutdown(); }

}  // namespace umbrella::testing

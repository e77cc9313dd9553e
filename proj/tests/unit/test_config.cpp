// SPDX-License-Identifier: Apache-2.0
#include <map>

#include <gtest/gtest.h>

#include "umbrella/driver/config.hpp"
#include "umbrella/error.hpp"

using namespace umbrella;

TEST(Endpoint, ParsesSchemeHostPortAndBase) {
  const auto e = Endpoint::parse("http://10.0.0.5:8181/prefix/");
  EXPECT_EQ(e.scheme, "http");
  EXPECT_EQ(e.host, "10.0.0.5");
  EXPECT_EQ(e.port, 8181);
  EXPECT_EQ(e.base_path, "/prefix");
  EXPECT_EQ(e.scheme_host_port(), "http://10.0.0.5:8181");
  EXPECT_EQ(Endpoint::parse("http://ctl").port, 80);
}

TEST(Endpoint, RejectsMalformedUrls) {
  for (const char* bad : {"", "ctl:8181", "http://", "http://h:0", "http://h:70000", "http://h:x", "ftp//h"}) {
    EXPECT_THROW(Endpoint::parse(bad), ConfigError) << bad;
  }
}

TEST(ConfigFile, SectionsCommentsAndExtras) {
  const auto c = parse_driver_config(R"(# controller settings
name = "onos"
[controller]
endpoint = "http://127.0.0.1:8181"
username = "onos"
password = "rocks"   # inline
request_timeout_ms = 750

[extras]
"onos.path.flows" = "/custom/flows"
)");
  EXPECT_EQ(c.name, "onos");
  EXPECT_EQ(c.endpoint, "http://127.0.0.1:8181");
  EXPECT_EQ(c.username, "onos");
  EXPECT_EQ(c.password, "rocks");
  EXPECT_EQ(c.request_timeout_ms, 750u);
  EXPECT_EQ(c.extra("onos.path.flows"), "/custom/flows");
  EXPECT_EQ(c.extra("missing"), std::nullopt);
}

TEST(ConfigFile, RejectsBadInput) {
  EXPECT_THROW(parse_driver_config("name"), ConfigError);
  EXPECT_THROW(parse_driver_config("[nope]\nname = \"x\""), ConfigError);
  EXPECT_THROW(parse_driver_config("bogus = \"x\""), ConfigError);
  EXPECT_THROW(parse_driver_config("request_timeout_ms = abc"), ConfigError);
  EXPECT_THROW(parse_driver_config("name = \"unterminated"), ConfigError);
  EXPECT_THROW(load_driver_config("/nonexistent/umbrella.toml"), ConfigError);
}

TEST(ConfigEnv, OverridesSetFieldsOnly) {
  DriverConfig c;
  c.name = "mock";
  c.username = "keep";
  const std::map<std::string, std::string> env{{"UMBRELLA_CONTROLLER", "odl"},
                                               {"UMBRELLA_ENDPOINT", "http://x:1"},
                                               {"UMBRELLA_PASS", "secret"}};
  apply_env_overrides(c, [&](const char* key) -> std::optional<std::string> {
    const auto it = env.find(key);
    if (it == env.end()) return std::nullopt;
    return it->second;
  });
  EXPECT_EQ(c.name, "odl");
  EXPECT_EQ(c.endpoint, "http://x:1");
  EXPECT_EQ(c.username, "keep");
  EXPECT_EQ(c.password, "secret");
}

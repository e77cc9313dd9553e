// SPDX-License-Identifier: Apache-2.0
#include "umbrella/driver/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella {

std::optional<std::string> DriverConfig::extra(const std::string& key) const {
  auto it = extras.find(key);
  if (it == extras.end()) return std::nullopt;
  return it->second;
}

Endpoint Endpoint::parse(std::string_view url) {
  static const std::regex kUrl(R"(^([a-zA-Z][a-zA-Z0-9+.-]*)://([^/:?#\s]+)(?::([0-9]{1,5}))?(/[^?#\s]*)?$)");
  std::cmatch m;
  if (!std::regex_match(url.begin(), url.end(), m, kUrl)) {
    throw ConfigError(fmt::format("malformed endpoint '{}'", url));
  }
  Endpoint e;
  e.scheme = m[1].str();
  e.host = m[2].str();
  if (m[3].matched) {
    unsigned port = 0;
    const auto text = m[3].str();
    std::from_chars(text.data(), text.data() + text.size(), port);
    if (port == 0 || port > 65535) throw ConfigError(fmt::format("bad port in endpoint '{}'", url));
    e.port = static_cast<std::uint16_t>(port);
  } else {
    e.port = e.scheme == "https" ? 443 : 80;
  }
  e.base_path = m[4].matched ? m[4].str() : "";
  while (!e.base_path.empty() && e.base_path.back() == '/') e.base_path.pop_back();
  return e;
}

std::string Endpoint::scheme_host_port() const { return fmt::format("{}://{}:{}", scheme, host, port); }

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Reads a quoted string starting at s[0] == '"'; returns the unescaped text
/// and the remainder after the closing quote.
std::pair<std::string, std::string_view> read_quoted(std::string_view s, int line_no) {
  std::string out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') return {out, s.substr(i + 1)};
    if (c == '\\' && i + 1 < s.size()) {
      const char n = s[++i];
      switch (n) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: throw ConfigError(fmt::format("line {}: unsupported escape \\{}", line_no, n));
      }
      continue;
    }
    out += c;
  }
  throw ConfigError(fmt::format("line {}: unterminated string", line_no));
}

std::string_view strip_comment(std::string_view rest, int line_no) {
  rest = trim(rest);
  if (!rest.empty() && rest.front() != '#') throw ConfigError(fmt::format("line {}: trailing characters", line_no));
  return rest;
}

}  // namespace

DriverConfig parse_driver_config(std::string_view text) {
  DriverConfig config;
  std::string section = "controller";
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) throw ConfigError(fmt::format("line {}: unterminated section", line_no));
      section = std::string(trim(line.substr(1, close - 1)));
      if (section != "controller" && section != "extras") {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      strip_comment(line.substr(close + 1), line_no);
      continue;
    }

    std::string key;
    std::string_view rest;
    if (line.front() == '"') {
      std::tie(key, rest) = read_quoted(line, line_no);
      rest = trim(rest);
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
      key = std::string(trim(line.substr(0, eq)));
      rest = line.substr(eq);
    }
    if (rest.empty() || rest.front() != '=') throw ConfigError(fmt::format("line {}: expected '='", line_no));
    rest = trim(rest.substr(1));

    std::string value;
    bool is_integer = false;
    if (!rest.empty() && rest.front() == '"') {
      std::tie(value, rest) = read_quoted(rest, line_no);
      strip_comment(rest, line_no);
    } else {
      const auto end = rest.find_first_of(" \t#");
      value = std::string(rest.substr(0, end));
      strip_comment(end == std::string_view::npos ? std::string_view{} : rest.substr(end), line_no);
      is_integer = !value.empty() && value.find_first_not_of("0123456789") == std::string::npos;
      if (!is_integer) throw ConfigError(fmt::format("line {}: value must be a string or integer", line_no));
    }

    if (section == "extras") {
      config.extras[key] = value;
    } else if (key == "name") {
      config.name = value;
    } else if (key == "endpoint") {
      config.endpoint = value;
    } else if (key == "username") {
      config.username = value;
    } else if (key == "password") {
      config.password = value;
    } else if (key == "request_timeout_ms") {
      if (!is_integer) throw ConfigError(fmt::format("line {}: request_timeout_ms must be an integer", line_no));
      unsigned long ms = std::stoul(value);
      if (ms == 0 || ms > 3'600'000) throw ConfigError(fmt::format("line {}: request_timeout_ms out of range", line_no));
      config.request_timeout_ms = static_cast<std::uint32_t>(ms);
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }
  return config;
}

DriverConfig load_driver_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_driver_config(buffer.str());
}

void apply_env_overrides(DriverConfig& config, const EnvLookup& lookup) {
  auto get = [&lookup](const char* name) -> std::optional<std::string> {
    if (lookup) return lookup(name);
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  };
  if (auto v = get("UMBRELLA_CONTROLLER")) config.name = *v;
  if (auto v = get("UMBRELLA_ENDPOINT")) config.endpoint = *v;
  if (auto v = get("UMBRELLA_USER")) config.username = *v;
  if (auto v = get("UMBRELLA_PASS")) config.password = *v;
}

}  // namespace umbrella

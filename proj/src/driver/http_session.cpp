// SPDX-License-Identifier: Apache-2.0
#include "http_session.hpp"

#include <cctype>
#include <chrono>

#include <fmt/format.h>
#include <httplib.h>

#include "umbrella/driver/driver.hpp"
#include "umbrella/error.hpp"

namespace umbrella::detail {

HttpSession::HttpSession(const DriverConfig& config)
    : endpoint_(Endpoint::parse(config.endpoint)),
      username_(config.username),
      password_(config.password),
      timeout_ms_(config.request_timeout_ms) {
  if (endpoint_.scheme != "http") {
    throw ConfigError(fmt::format("unsupported scheme '{}' (only http)", endpoint_.scheme));
  }
  if (timeout_ms_ == 0) throw ConfigError("request_timeout_ms must be positive");
}

HttpResponse HttpSession::get(const std::string& path) const { return send(Method::Get, path, nullptr, false); }
HttpResponse HttpSession::get_optional(const std::string& path) const { return send(Method::Get, path, nullptr, true); }
HttpResponse HttpSession::post(const std::string& path, const std::string& body) const {
  return send(Method::Post, path, &body, false);
}
HttpResponse HttpSession::put(const std::string& path, const std::string& body) const {
  return send(Method::Put, path, &body, false);
}
HttpResponse HttpSession::del(const std::string& path) const { return send(Method::Delete, path, nullptr, false); }

HttpResponse HttpSession::send(Method method, const std::string& path, const std::string* body, bool allow_404) const {
  httplib::Client client(endpoint_.host, endpoint_.port);
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_basic_auth(username_, password_);
  client.set_url_encode(false);

  const std::string target = endpoint_.base_path + path;
  const httplib::Headers headers{{"Accept", "application/json"}};
  constexpr const char* kJson = "application/json";
  httplib::Result result = [&] {
    switch (method) {
      case Method::Get: return client.Get(target, headers);
      case Method::Post: return client.Post(target, headers, *body, kJson);
      case Method::Put: return client.Put(target, headers, *body, kJson);
      case Method::Delete: return client.Delete(target, headers);
    }
    return httplib::Result{};
  }();
  if (!result) {
    throw DriverError(DriverErrorKind::Unreachable,
                      fmt::format("{}: {}", endpoint_.scheme_host_port(), httplib::to_string(result.error())));
  }
  const int status = result->status;
  if (status == 401) throw DriverError(DriverErrorKind::AuthFailed, fmt::format("{} returned 401", target));
  if (status == 404 && !allow_404) throw DriverError(DriverErrorKind::NotFound, target);
  if (status != 404 && (status < 200 || status >= 300)) {
    std::string detail = fmt::format("{} returned {}", target, status);
    if (!result->body.empty()) detail += ": " + result->body.substr(0, 200);
    throw DriverError(DriverErrorKind::Rejected, detail);
  }
  HttpResponse out{status, std::move(result->body), std::nullopt};
  if (result->has_header("Location")) out.location = result->get_header_value("Location");
  return out;
}

std::string encode_segment(std::string_view segment) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : segment) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == ':') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out;
}

}  // namespace umbrella::detail

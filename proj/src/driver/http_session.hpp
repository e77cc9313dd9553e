// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "umbrella/driver/config.hpp"

namespace umbrella::detail {

struct HttpResponse {
  int status{};
  std::string body;
  std::optional<std::string> location;
};

/// Blocking JSON-over-HTTP client bound to one controller endpoint. Every
/// request carries Basic credentials; a connection is opened per request so
/// one session may be shared between threads.
class HttpSession {
 public:
  /// Throws ConfigError for a malformed endpoint.
  explicit HttpSession(const DriverConfig& config);

  /// `path` is relative to the endpoint's base path. Non-2xx statuses are
  /// mapped to DriverError (401 AuthFailed, 404 NotFound, others Rejected);
  /// transport failures become Unreachable.
  HttpResponse get(const std::string& path) const;
  HttpResponse post(const std::string& path, const std::string& body) const;
  HttpResponse put(const std::string& path, const std::string& body) const;
  HttpResponse del(const std::string& path) const;

  /// Like get() but 404 comes back as status 404 instead of an error.
  HttpResponse get_optional(const std::string& path) const;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  enum class Method { Get, Post, Put, Delete };
  HttpResponse send(Method method, const std::string& path, const std::string* body, bool allow_404) const;

  Endpoint endpoint_;
  std::string username_;
  std::string password_;
  std::uint32_t timeout_ms_;
};

/// Percent-encodes one path segment.
std::string encode_segment(std::string_view segment);

}  // namespace umbrella::detail

// SPDX-License-Identifier: Apache-2.0
#include "umbrella/driver/driver.hpp"

#include <fmt/format.h>

namespace umbrella {

bool CapabilitySet::covers(const CapabilitySet& r) const {
  return (!r.topology_read || topology_read) && (!r.flow_write || flow_write) && (!r.flow_stats || flow_stats) &&
         (!r.port_stats || port_stats) && (!r.event_push || event_push);
}

std::string CapabilitySet::describe_missing(const CapabilitySet& r) const {
  std::string out;
  auto note = [&out](bool missing, std::string_view name) {
    if (!missing) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  note(r.topology_read && !topology_read, "topology_read");
  note(r.flow_write && !flow_write, "flow_write");
  note(r.flow_stats && !flow_stats, "flow_stats");
  note(r.port_stats && !port_stats, "port_stats");
  note(r.event_push && !event_push, "event_push");
  return out;
}

std::string_view to_string(DriverErrorKind kind) {
  switch (kind) {
    case DriverErrorKind::Unreachable: return "Unreachable";
    case DriverErrorKind::AuthFailed: return "AuthFailed";
    case DriverErrorKind::NotFound: return "NotFound";
    case DriverErrorKind::Rejected: return "Rejected";
    case DriverErrorKind::Unsupported: return "Unsupported";
    case DriverErrorKind::ProtocolError: return "ProtocolError";
  }
  return "?";
}

DriverError::DriverError(DriverErrorKind kind, std::string detail)
    : Error(detail.empty() ? std::string(to_string(kind)) : fmt::format("{}: {}", to_string(kind), detail)),
      kind_(kind),
      detail_(std::move(detail)) {}

void require_capabilities(const Driver& driver, const CapabilitySet& required) {
  const auto have = driver.capabilities();
  if (!have.covers(required)) {
    throw DriverError(DriverErrorKind::Unsupported,
                      fmt::format("driver '{}' lacks {}", driver.name(), have.describe_missing(required)));
  }
}

}  // namespace umbrella

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Controller-neutral JSON forms used by the CLI (rule files, --json output).
// Driver wire formats live in the drivers.

#include <json.hpp>

#include "umbrella/core/events.hpp"
#include "umbrella/core/flow.hpp"
#include "umbrella/core/topology.hpp"

namespace umbrella::codec {

using nlohmann::json;

json to_json(const FlowRule& rule);
/// Throws InvalidRule for missing/ill-typed fields.
FlowRule flow_rule_from_json(const json& j);

json to_json(const FlowHandle& handle);
json to_json(const FlowStats& stats);
json to_json(const PortStats& stats);
json to_json(const TopologySnapshot& snapshot);
json to_json(const TopologyEvent& event);

}  // namespace umbrella::codec

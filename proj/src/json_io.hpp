#pragma once

// Internal JSON conversions shared by the manifest, summary and report code.

#include <json.hpp>

#include "edprof/manifest.hpp"

namespace edprof::detail {

nlohmann::json row_to_json(const ManifestRow& row);
ManifestRow row_from_json(const nlohmann::json& j);

}  // namespace edprof::detail

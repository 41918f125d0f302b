#pragma once

// JSON, CSV and plot-data output for campaign results. The canonical JSON
// form has sorted keys, 17 significant digits, null for non-finite numbers
// and no timestamps, so identical runs give identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stratakit/cover.hpp"
#include "stratakit/estimates.hpp"
#include "stratakit/stratify.hpp"

namespace stratakit {

inline constexpr const char* kLibraryVersion = "0.1.0";

nlohmann::json vec_json(const Vec& v);
nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const StratumReport& r);
nlohmann::json to_json(const PatchCover& c);
nlohmann::json to_json(const SlabCoverReport& r);

std::string canonical_dump(const nlohmann::json& j);

/// Writes `content` to `path` through a temporary file in the same
/// directory and a rename.
void write_atomic(const std::string& path, const std::string& content);

/// %.17g formatting shared by JSON, CSV and plot files.
std::string format_double(double v);

}  // namespace stratakit

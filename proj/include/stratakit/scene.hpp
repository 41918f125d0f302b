#pragma once

// Scene files: a closed set description plus probes and run parameters, as
// JSON. See docs/scene-format.md for the schema.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stratakit/closed_set.hpp"

namespace stratakit {

/// Structured set description mirroring the scene schema; kept alongside the
/// built set so scenes serialize back to what was read.
struct SetDesc {
  std::string type;  // hpolytope, vpolytope, ball, sphere, flat, point_cloud, union
  std::vector<Halfspace> halfspaces;
  std::vector<Vec> points;      // vertices or cloud points
  Vec center;
  double radius = 0.0;
  Vec base;
  std::vector<Vec> directions;  // flat directions, orthonormalized on build
  std::vector<SetDesc> parts;
};

struct ProbeSpec {
  std::string mode = "sample";  // "sample" or "explicit"
  int count = 500;
  std::uint64_t seed = 0;
  std::vector<Vec> points;
};

struct SceneParams {
  std::uint64_t seed = 0;
  std::vector<double> q_grid;  // empty: default_q_grid
  std::vector<int> m_values;   // empty: 0..n
  int num_dirs = 0;
  // verify campaigns
  int samples = 10000;
  double q = 0.4;
  double r = 0.2;
  double s = 0.1;
  int base_points = 0;
  // tolerances, negative = library default
  double tol_report = -1.0;
  double tol_touch = -1.0;
  double tol_unique = -1.0;
  double tol_probe = -1.0;
  // quadratic patch cover for m >= 1
  double tol_fit = 1.0;
  double support_radius = -1.0;  // a tenth of the diameter if negative
};

struct SceneSpec {
  std::string scene_id;
  int ambient_dim = 0;
  SetDesc set;
  ProbeSpec probes;
  SceneParams params;
};

/// Parses and validates a scene. Errors are InvalidInput with the field path
/// ("set.parts[1].radius: ...") or FormatError with a line number for
/// malformed JSON.
SceneSpec parse_scene(const std::string& text);
SceneSpec load_scene(const std::string& path);
nlohmann::json scene_to_json(const SceneSpec& scene);

/// Builds the closed set; constructor diagnostics are prefixed with the
/// field path.
ClosedSet build_set(const SetDesc& desc, int ambient_dim);

/// Probe points from the directive (explicit points, or default_probes).
std::vector<Vec> scene_probes(const SceneSpec& scene, const ClosedSet& set);

}  // namespace stratakit

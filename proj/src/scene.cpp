#include "stratakit/scene.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "stratakit/errors.hpp"
#include "stratakit/stratify.hpp"

namespace stratakit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InvalidInput(path + ": " + msg); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
      fail(path + "." + k, "unknown field");
    }
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t seed_value(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a nonnegative integer seed");
  }
  return j.get<std::uint64_t>();
}

Vec vec(const json& j, const std::string& path, int n) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (static_cast<int>(j.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(j.size()));
  }
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

std::vector<Vec> vec_list(const json& j, const std::string& path, int n) {
  if (!j.is_array()) fail(path, "expected an array of points");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec(j[i], path + "[" + std::to_string(i) + "]", n));
  return out;
}

SetDesc parse_set(const json& j, const std::string& path, int n) {
  if (!j.is_object()) fail(path, "expected an object");
  SetDesc d;
  const json& type = field(j, path, "type");
  if (!type.is_string()) fail(path + ".type", "expected a string");
  d.type = type.get<std::string>();
  if (d.type == "hpolytope") {
    only_keys(j, path, {"type", "halfspaces"});
    const json& hs = field(j, path, "halfspaces");
    if (!hs.is_array() || hs.empty()) fail(path + ".halfspaces", "expected a nonempty array");
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string p = path + ".halfspaces[" + std::to_string(i) + "]";
      only_keys(hs[i], p, {"normal", "offset"});
      d.halfspaces.push_back({vec(field(hs[i], p, "normal"), p + ".normal", n), number(field(hs[i], p, "offset"), p + ".offset")});
    }
  } else if (d.type == "vpolytope") {
    only_keys(j, path, {"type", "vertices"});
    d.points = vec_list(field(j, path, "vertices"), path + ".vertices", n);
    if (d.points.empty()) fail(path + ".vertices", "expected at least one vertex");
  } else if (d.type == "ball" || d.type == "sphere") {
    only_keys(j, path, {"type", "center", "radius"});
    d.center = vec(field(j, path, "center"), path + ".center", n);
    d.radius = number(field(j, path, "radius"), path + ".radius");
  } else if (d.type == "flat") {
    only_keys(j, path, {"type", "base", "directions"});
    d.base = vec(field(j, path, "base"), path + ".base", n);
    d.directions = j.contains("directions") ? vec_list(j.at("directions"), path + ".directions", n) : std::vector<Vec>{};
  } else if (d.type == "point_cloud") {
    only_keys(j, path, {"type", "points"});
    d.points = vec_list(field(j, path, "points"), path + ".points", n);
    if (d.points.empty()) fail(path + ".points", "expected at least one point");
  } else if (d.type == "union") {
    only_keys(j, path, {"type", "parts"});
    const json& parts = field(j, path, "parts");
    if (!parts.is_array() || parts.empty()) fail(path + ".parts", "expected a nonempty array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      d.parts.push_back(parse_set(parts[i], path + ".parts[" + std::to_string(i) + "]", n));
    }
  } else {
    fail(path + ".type", "unknown set type '" + d.type + "'");
  }
  return d;
}

json set_json(const SetDesc& d) {
  auto pts = [](const std::vector<Vec>& v) {
    json a = json::array();
    for (const Vec& x : v) a.push_back(x.to_vector());
    return a;
  };
  json j{{"type", d.type}};
  if (d.type == "hpolytope") {
    json hs = json::array();
    for (const Halfspace& h : d.halfspaces) hs.push_back({{"normal", h.normal.to_vector()}, {"offset", h.offset}});
    j["halfspaces"] = hs;
  } else if (d.type == "vpolytope") {
    j["vertices"] = pts(d.points);
  } else if (d.type == "ball" || d.type == "sphere") {
    j["center"] = d.center.to_vector();
    j["radius"] = d.radius;
  } else if (d.type == "flat") {
    j["base"] = d.base.to_vector();
    j["directions"] = pts(d.directions);
  } else if (d.type == "point_cloud") {
    j["points"] = pts(d.points);
  } else if (d.type == "union") {
    json parts = json::array();
    for (const SetDesc& p : d.parts) parts.push_back(set_json(p));
    j["parts"] = parts;
  }
  return j;
}

ClosedSet build_at(const SetDesc& d, int n, const std::string& path) {
  try {
    if (d.type == "hpolytope") return ClosedSet::hpolytope(n, d.halfspaces);
    if (d.type == "vpolytope") return ClosedSet::vpolytope(d.points);
    if (d.type == "ball") return ClosedSet::ball(d.center, d.radius);
    if (d.type == "sphere") return ClosedSet::sphere(d.center, d.radius);
    if (d.type == "flat") return ClosedSet::flat(AffineFlat::spanned_by(d.base, d.directions));
    if (d.type == "point_cloud") return ClosedSet::point_cloud(d.points);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  if (d.type == "union") {
    std::vector<ClosedSet> parts;
    for (std::size_t i = 0; i < d.parts.size(); ++i) {
      parts.push_back(build_at(d.parts[i], n, path + ".parts[" + std::to_string(i) + "]"));
    }
    try {
      return ClosedSet::union_of(std::move(parts));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path + ".type", "unknown set type '" + d.type + "'");
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

SceneSpec parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("scene: line " + std::to_string(line_of(text, e.byte)) + ": malformed JSON (" + e.what() + ")");
  }
  only_keys(j, "scene", {"scene_id", "ambient_dim", "set", "probes", "params"});
  SceneSpec s;
  const json& id = field(j, "scene", "scene_id");
  if (!id.is_string() || id.get<std::string>().empty()) fail("scene.scene_id", "expected a nonempty string");
  s.scene_id = id.get<std::string>();
  s.ambient_dim = integer(field(j, "scene", "ambient_dim"), "scene.ambient_dim");
  if (s.ambient_dim < 1 || s.ambient_dim > kMaxDim) fail("scene.ambient_dim", "must be between 1 and 8");
  s.set = parse_set(field(j, "scene", "set"), "scene.set", s.ambient_dim);

  const json& params = field(j, "scene", "params");
  only_keys(params, "scene.params",
            {"seed", "q_grid", "m", "num_dirs", "samples", "q", "r", "s", "base_points", "tolerances", "patch"});
  SceneParams& p = s.params;
  p.seed = seed_value(field(params, "scene.params", "seed"), "scene.params.seed");
  if (params.contains("q_grid")) {
    const json& g = params.at("q_grid");
    if (!g.is_array()) fail("scene.params.q_grid", "expected an array of numbers");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = number(g[i], "scene.params.q_grid[" + std::to_string(i) + "]");
      if (!(q > 0.0)) fail("scene.params.q_grid[" + std::to_string(i) + "]", "must be positive");
      p.q_grid.push_back(q);
    }
  }
  if (params.contains("m")) {
    const json& m = params.at("m");
    if (!m.is_array()) fail("scene.params.m", "expected an array of integers");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const int v = integer(m[i], "scene.params.m[" + std::to_string(i) + "]");
      if (v < 0 || v > s.ambient_dim) fail("scene.params.m[" + std::to_string(i) + "]", "must be between 0 and n");
      p.m_values.push_back(v);
    }
  }
  auto opt_int = [&](const char* key, int& out, int lo) {
    if (!params.contains(key)) return;
    out = integer(params.at(key), std::string("scene.params.") + key);
    if (out < lo) fail(std::string("scene.params.") + key, "must be at least " + std::to_string(lo));
  };
  auto opt_pos = [&](const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    out = number(obj.at(key), path + "." + key);
    if (!(out > 0.0)) fail(path + "." + key, "must be positive");
  };
  opt_int("num_dirs", p.num_dirs, 0);
  opt_int("samples", p.samples, 1);
  opt_int("base_points", p.base_points, 0);
  opt_pos(params, "scene.params", "q", p.q);
  opt_pos(params, "scene.params", "r", p.r);
  opt_pos(params, "scene.params", "s", p.s);
  if (params.contains("tolerances")) {
    const json& t = params.at("tolerances");
    only_keys(t, "scene.params.tolerances", {"report", "touch", "unique", "probe"});
    opt_pos(t, "scene.params.tolerances", "report", p.tol_report);
    opt_pos(t, "scene.params.tolerances", "touch", p.tol_touch);
    opt_pos(t, "scene.params.tolerances", "unique", p.tol_unique);
    opt_pos(t, "scene.params.tolerances", "probe", p.tol_probe);
  }
  if (params.contains("patch")) {
    const json& t = params.at("patch");
    only_keys(t, "scene.params.patch", {"tol_fit", "support_radius"});
    opt_pos(t, "scene.params.patch", "tol_fit", p.tol_fit);
    opt_pos(t, "scene.params.patch", "support_radius", p.support_radius);
  }

  if (j.contains("probes")) {
    const json& pr = j.at("probes");
    only_keys(pr, "scene.probes", {"mode", "count", "seed", "points"});
    const json& mode = field(pr, "scene.probes", "mode");
    if (!mode.is_string()) fail("scene.probes.mode", "expected a string");
    s.probes.mode = mode.get<std::string>();
    if (s.probes.mode == "explicit") {
      s.probes.points = vec_list(field(pr, "scene.probes", "points"), "scene.probes.points", s.ambient_dim);
      if (s.probes.points.empty()) fail("scene.probes.points", "expected at least one point");
    } else if (s.probes.mode == "sample") {
      s.probes.count = integer(field(pr, "scene.probes", "count"), "scene.probes.count");
      if (s.probes.count < 1) fail("scene.probes.count", "must be positive");
      s.probes.seed = seed_value(field(pr, "scene.probes", "seed"), "scene.probes.seed");
    } else {
      fail("scene.probes.mode", "expected \"sample\" or \"explicit\"");
    }
  } else {
    s.probes.seed = p.seed;
  }
  return s;
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read scene file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

json scene_to_json(const SceneSpec& s) {
  const SceneParams& p = s.params;
  json params{{"seed", p.seed},       {"q_grid", p.q_grid},           {"m", p.m_values},
              {"num_dirs", p.num_dirs}, {"samples", p.samples},         {"q", p.q},
              {"r", p.r},             {"s", p.s},                     {"base_points", p.base_points},
              {"patch", {{"tol_fit", p.tol_fit}}}};
  if (p.support_radius > 0.0) params["patch"]["support_radius"] = p.support_radius;
  json tol = json::object();
  if (p.tol_report > 0.0) tol["report"] = p.tol_report;
  if (p.tol_touch > 0.0) tol["touch"] = p.tol_touch;
  if (p.tol_unique > 0.0) tol["unique"] = p.tol_unique;
  if (p.tol_probe > 0.0) tol["probe"] = p.tol_probe;
  if (!tol.empty()) params["tolerances"] = tol;
  json probes{{"mode", s.probes.mode}};
  if (s.probes.mode == "explicit") {
    json pts = json::array();
    for (const Vec& x : s.probes.points) pts.push_back(x.to_vector());
    probes["points"] = pts;
  } else {
    probes["count"] = s.probes.count;
    probes["seed"] = s.probes.seed;
  }
  return {{"scene_id", s.scene_id}, {"ambient_dim", s.ambient_dim}, {"set", set_json(s.set)},
          {"probes", probes},       {"params", params}};
}

ClosedSet build_set(const SetDesc& desc, int ambient_dim) { return build_at(desc, ambient_dim, "scene.set"); }

std::vector<Vec> scene_probes(const SceneSpec& scene, const ClosedSet& set) {
  if (scene.probes.mode == "explicit") return scene.probes.points;
  return default_probes(set, scene.probes.count, scene.probes.seed);
}

}  // namespace stratakit

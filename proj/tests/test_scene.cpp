#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "stratakit/errors.hpp"
#include "stratakit/report.hpp"
#include "stratakit/scene.hpp"

using namespace stratakit;
using nlohmann::json;

namespace {

std::string scene_path(const std::string& name) { return std::string(STRATAKIT_SOURCE_DIR) + "/scenes/" + name + ".json"; }

std::string error_of(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kBall = R"({
  "scene_id": "b",
  "ambient_dim": 2,
  "set": {"type": "ball", "center": [0, 0], "radius": 1},
  "params": {"seed": 3}
})";

}  // namespace

TEST_CASE("every shipped scene round-trips") {
  for (const auto& entry : std::filesystem::directory_iterator(std::string(STRATAKIT_SOURCE_DIR) + "/scenes")) {
    const std::string name = entry.path().stem().string();
    if (name.rfind("corrupt", 0) == 0) continue;
    CAPTURE(name);
    const SceneSpec s = load_scene(entry.path().string());
    const json once = scene_to_json(s);
    const SceneSpec again = parse_scene(once.dump());
    CHECK(scene_to_json(again) == once);
    CHECK_NOTHROW(build_set(s.set, s.ambient_dim));
  }
}

TEST_CASE("scene defaults") {
  const SceneSpec s = parse_scene(kBall);
  CHECK(s.scene_id == "b");
  CHECK(s.ambient_dim == 2);
  CHECK(s.probes.mode == "sample");
  CHECK(s.probes.count == 500);
  CHECK(s.probes.seed == 3);
  CHECK(s.params.q == 0.4);
  CHECK(s.params.samples == 10000);
}

TEST_CASE("scene errors name the field") {
  json j = json::parse(kBall);
  j["set"]["radius"] = -1;
  {
    const SceneSpec s = parse_scene(j.dump());
    CHECK_THROWS_WITH_AS(build_set(s.set, s.ambient_dim), doctest::Contains("scene.set"), InvalidInput);
  }
  j["set"]["radius"] = "one";
  CHECK(error_of(j.dump()).find("scene.set.radius") != std::string::npos);

  j = json::parse(kBall);
  j["set"] = {{"type", "union"},
              {"parts", json::array({{{"type", "ball"}, {"center", {0, 0}}, {"radius", 1}},
                                     {{"type", "sphere"}, {"center", {0, 0, 0}}, {"radius", 1}}})}};
  CHECK(error_of(j.dump()).find("scene.set.parts[1].center") != std::string::npos);

  j = json::parse(kBall);
  j["params"]["colour"] = 1;
  CHECK(error_of(j.dump()).find("colour") != std::string::npos);

  j = json::parse(kBall);
  j["params"].erase("seed");
  CHECK(error_of(j.dump()).find("scene.params.seed") != std::string::npos);

  j = json::parse(kBall);
  j["set"]["type"] = "torus";
  CHECK(error_of(j.dump()).find("scene.set.type") != std::string::npos);
}

TEST_CASE("malformed JSON reports the line") {
  const std::string bad = "{\n  \"scene_id\": \"x\",\n  \"ambient_dim\": 2,\n  oops\n}";
  CHECK_THROWS_AS(parse_scene(bad), FormatError);
  CHECK(error_of(bad).find("line 4") != std::string::npos);
}

TEST_CASE("unbounded polytope is rejected with its path") {
  const SceneSpec s = load_scene(scene_path("corrupt_unbounded"));
  try {
    build_set(s.set, s.ambient_dim);
    FAIL("expected an error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("scene.set") != std::string::npos);
  }
}

TEST_CASE("canonical JSON") {
  const json j = {{"b", 0.1}, {"a", {1.0, 2.5}}, {"c", std::nan("")}, {"d", json::array()}, {"e", 1e300 * 1e300}};
  const std::string out = canonical_dump(j);
  CHECK(out ==
        "{\n  \"a\": [1, 2.5],\n  \"b\": 0.10000000000000001,\n  \"c\": null,\n  \"d\": [],\n  \"e\": null\n}\n");
  // 17 significant digits round-trip every double
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
  CHECK(canonical_dump(json::parse(canonical_dump(j))) == out);
}

TEST_CASE("atomic write replaces the file") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "stratakit_atomic_test";
  std::filesystem::create_directories(dir);
  const std::string p = (dir / "x.json").string();
  write_atomic(p, "one");
  write_atomic(p, "two");
  std::ifstream in(p);
  std::string s;
  in >> s;
  CHECK(s == "two");
  CHECK_FALSE(std::filesystem::exists(p + ".tmp"));
  std::filesystem::remove_all(dir);
}

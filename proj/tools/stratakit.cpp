// stratakit command line: stratify | verify | coarea | grid

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stratakit/closed_set.hpp"
#include "stratakit/cover.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/estimates.hpp"
#include "stratakit/report.hpp"
#include "stratakit/scene.hpp"
#include "stratakit/stratify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stratakit;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kNumeric = 3 };

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("--q-grid: '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw InvalidInput("--q-grid: empty list");
  return out;
}

// "1/256" or "0.00390625"
double parse_spacing(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw InvalidInput("--spacing: cannot parse '" + s + "'");
  }
}

std::string csv_row(const std::vector<std::string>& cells, char sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += cells[i];
  }
  return out + "\n";
}

void write_outputs(const fs::path& dir, const std::string& name, const json& result, double seconds) {
  write_atomic((dir / (name + ".json")).string(), canonical_dump(result));
  // wall time stays out of the canonical payload
  write_atomic((dir / (name + "_timing.json")).string(),
               canonical_dump(json{{"command", name}, {"wall_time_seconds", seconds}}));
}

json envelope(const std::string& scene_id, const std::string& command, std::uint64_t seed) {
  return {{"scene_id", scene_id}, {"command", command}, {"library_version", kLibraryVersion}, {"seed", seed}};
}

struct StratifyArgs {
  std::string scene;
  std::string out;
  int m = -1;
  std::string q_grid;
  std::optional<std::uint64_t> seed;
};

int cmd_stratify(const StratifyArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  SceneSpec scene = load_scene(a.scene);
  if (a.seed) scene.params.seed = *a.seed;
  const ClosedSet set = build_set(scene.set, scene.ambient_dim);
  const std::vector<Vec> probes = scene_probes(scene, set);
  const int n = scene.ambient_dim;

  StratifyOptions so;
  so.q_grid = a.q_grid.empty() ? scene.params.q_grid : parse_list(a.q_grid);
  so.num_dirs = scene.params.num_dirs;
  so.tol_probe = scene.params.tol_probe;
  so.tol_touch = scene.params.tol_touch;
  so.seed = scene.params.seed;
  std::vector<int> ms;
  if (a.m >= 0) {
    if (a.m > n) throw InvalidInput("--m: must be between 0 and " + std::to_string(n));
    ms = {a.m};
  } else if (!scene.params.m_values.empty()) {
    ms = scene.params.m_values;
  } else {
    for (int m = 0; m <= n; ++m) ms.push_back(m);
  }
  const double radius =
      scene.params.support_radius > 0.0 ? scene.params.support_radius : 0.1 * scene_diameter(set);

  const std::vector<ClassifiedPoint> dims = estimate_bundle_dims(set, probes, so);
  json result = envelope(scene.scene_id, "stratify", scene.params.seed);
  json reports = json::array();
  bool pass = true;
  const fs::path dir(a.out);
  for (int m : ms) {
    StratumReport rep = stratum_from_dims(set, m, dims, so);
    if (set.polytope() != nullptr) {
      const StratumReport exact = stratify_exact_polytope(set, m, probes);
      rep.exact_faces = exact.exact_faces;
      std::size_t agree = 0;
      for (std::size_t i = 0; i < probes.size(); ++i) {
        agree += exact.classified[i].in_stratum == rep.classified[i].in_stratum;
      }
      rep.params["exact_agreement"] = probes.empty() ? 1.0 : static_cast<double>(agree) / probes.size();
      if (agree != probes.size()) {
        pass = false;
        rep.notes.push_back("sampled classification disagrees with the exact skeleton");
      }
    }
    if (m >= 1 && m < n) {
      std::vector<Vec> pts;
      for (const ClassifiedPoint& c : rep.classified) {
        if (c.in_stratum) pts.push_back(c.point);
      }
      if (!pts.empty()) {
        rep.coverage = quadratic_patch_cover(pts, m, scene.params.tol_fit, radius);
        pass = pass && rep.coverage->recheck_pass;
      }
    } else if (m == 0) {
      rep.notes.push_back("patch cover skipped for m = 0 (B_0 is countable)");
    }
    reports.push_back(to_json(rep));

    std::vector<std::string> head;
    for (int k = 0; k < n; ++k) head.push_back("x" + std::to_string(k));
    head.push_back("est_dim");
    head.push_back("in_stratum");
    std::string csv = csv_row(head, ',');
    std::string plot = "# " + csv_row(head, ' ');
    for (const ClassifiedPoint& c : rep.classified) {
      std::vector<std::string> row;
      for (int k = 0; k < n; ++k) row.push_back(format_double(c.point[k]));
      row.push_back(std::to_string(c.est_dim));
      row.push_back(c.in_stratum ? "1" : "0");
      csv += csv_row(row, ',');
      plot += csv_row(row, ' ');
    }
    write_atomic((dir / ("stratify_m" + std::to_string(m) + ".csv")).string(), csv);
    write_atomic((dir / ("stratify_m" + std::to_string(m) + ".dat")).string(), plot);
  }
  result["reports"] = reports;
  result["pass"] = pass;
  result["scene"] = scene_to_json(scene);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_outputs(dir, "stratify", result, secs);
  return pass ? kPass : kFail;
}

struct VerifyArgs {
  std::string scene;
  std::string out;
  std::string estimate = "all";
  std::optional<std::uint64_t> seed;
  int samples = 0;
};

int cmd_verify(const VerifyArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  SceneSpec scene = load_scene(a.scene);
  if (a.seed) scene.params.seed = *a.seed;
  if (a.samples > 0) scene.params.samples = a.samples;
  std::vector<EstimateId> ids;
  if (a.estimate == "all") {
    ids = all_estimates();
  } else {
    ids = {parse_estimate_id(a.estimate)};
  }
  const ClosedSet set = build_set(scene.set, scene.ambient_dim);
  const SceneParams& p = scene.params;
  CampaignOptions co;
  co.samples = p.samples;
  co.seed = p.seed;
  co.q = p.q;
  co.r = p.r;
  co.s = p.s;
  co.num_dirs = p.num_dirs;
  co.base_points = p.base_points;
  co.verify.tol_report = p.tol_report;
  co.verify.tol_touch = p.tol_touch;
  co.verify.tol_unique = p.tol_unique;
  if (scene.probes.mode == "explicit") co.bases = scene.probes.points;

  json result = envelope(scene.scene_id, "verify", p.seed);
  json reports = json::array();
  bool pass = true;
  bool violation = false;
  std::string csv = "estimate_id,samples,skipped,worst_residual,tol_report,pass,theorem_violation\n";
  for (EstimateId id : ids) {
    const EstimateReport rep = run_campaign(set, id, co);
    json j = to_json(rep);
    j["seed"] = p.seed;
    j["scene_id"] = scene.scene_id;
    reports.push_back(j);
    pass = pass && rep.pass;
    violation = violation || rep.theorem_violation;
    csv += csv_row({std::string(estimate_name(id)), std::to_string(rep.samples), std::to_string(rep.skipped),
                    format_double(rep.worst_residual), format_double(rep.tol_report), rep.pass ? "1" : "0",
                    rep.theorem_violation ? "1" : "0"},
                   ',');
    if (!rep.pass) {
      std::cerr << "stratakit: " << estimate_name(id) << " failed: worst residual "
                << format_double(rep.worst_residual) << " > " << format_double(rep.tol_report);
      for (const auto& [k, v] : rep.worst_witness) {
        std::cerr << " " << k << "=(";
        for (int i = 0; i < v.dim(); ++i) std::cerr << (i ? "," : "") << format_double(v[i]);
        std::cerr << ")";
      }
      std::cerr << "\n";
    }
  }
  result["reports"] = reports;
  result["pass"] = pass && !violation;
  result["scene"] = scene_to_json(scene);
  const fs::path dir(a.out);
  write_atomic((dir / "verify.csv").string(), csv);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_outputs(dir, "verify", result, secs);
  return pass && !violation ? kPass : kFail;
}

struct CoareaArgs {
  std::string grid;
  std::string out;
  int m = -1;
  double z_threshold = 8.0;
  double bin_width = -1.0;
  double lip_bound = 4.0;
  int random_planes = 64;
  std::uint64_t seed = 0;
};

int cmd_coarea(const CoareaArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const GridMap grid = read_grid_file(a.grid);
  SlabCoverOptions o;
  o.m = a.m;
  o.z_threshold = a.z_threshold;
  o.bin_width = a.bin_width;
  o.lip_bound = a.lip_bound;
  o.random_planes = a.random_planes;
  o.seed = a.seed;
  const SlabCoverReport rep = coarea_slab_cover(grid, o);
  json result = envelope(fs::path(a.grid).filename().string(), "coarea", a.seed);
  result["reports"] = json::array({to_json(rep)});
  result["pass"] = rep.recheck_pass;

  std::vector<std::string> head{"piece", "nodes", "inverse_lipschitz", "new_bins"};
  for (int k = 0; k < grid.n; ++k) head.push_back("base" + std::to_string(k));
  std::string csv = csv_row(head, ',');
  std::string plot = "# piece";
  for (int k = 0; k < grid.n; ++k) plot += " x" + std::to_string(k);
  for (int k = 0; k < grid.nu; ++k) plot += " f" + std::to_string(k);
  plot += "\n";
  for (std::size_t i = 0; i < rep.pieces.size(); ++i) {
    const SlabPiece& p = rep.pieces[i];
    std::vector<std::string> row{std::to_string(i), std::to_string(p.nodes.size()), format_double(p.inverse_lipschitz),
                                 std::to_string(p.new_bins)};
    for (int k = 0; k < grid.n; ++k) row.push_back(format_double(p.plane.base()[k]));
    csv += csv_row(row, ',');
    for (std::int64_t node : p.nodes) {
      std::vector<std::string> cells{std::to_string(i)};
      const Vec x = grid.node(node);
      const Vec f = grid.value(node);
      for (int k = 0; k < grid.n; ++k) cells.push_back(format_double(x[k]));
      for (int k = 0; k < grid.nu; ++k) cells.push_back(format_double(f[k]));
      plot += csv_row(cells, ' ');
    }
  }
  const fs::path dir(a.out);
  write_atomic((dir / "coarea_pieces.csv").string(), csv);
  write_atomic((dir / "coarea_points.dat").string(), plot);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_outputs(dir, "coarea", result, secs);
  return rep.recheck_pass ? kPass : kFail;
}

struct GridArgs {
  std::string kind;
  std::string out;
  int n = 2;
  std::string h = "1/64";
};

int cmd_grid(const GridArgs& a) {
  const double h = parse_spacing(a.h);
  if (!(h > 0.0)) throw InvalidInput("--spacing: spacing must be positive");
  if (a.n < 1 || a.n > kMaxDim) throw InvalidInput("--n: must be between 1 and 8");
  GridMap g;
  if (a.kind == "coordinate" || a.kind == "identity") {
    const auto per = static_cast<std::int64_t>(std::llround(1.0 / h)) + 1;
    const bool coord = a.kind == "coordinate";
    const std::vector<double> ones(static_cast<std::size_t>(a.n), 1.0);
    g = make_grid(1, coord ? 1 : a.n, std::vector<std::int64_t>(static_cast<std::size_t>(a.n), per), Vec(a.n),
                  Vec::from(ones),
                  [&](const Vec& x, Vec& out) {
                    out = coord ? Vec{x[0]} : x;
                    return true;
                  });
  } else if (a.kind == "annulus-xi") {
    // xi onto the unit sphere on the shell 1/2 <= |x| <= 3/2 inside [-2, 2]^n
    const auto per = static_cast<std::int64_t>(std::llround(4.0 / h)) + 1;
    const ClosedSet sphere = ClosedSet::sphere(Vec(a.n), 1.0);
    Vec lo(a.n);
    Vec hi(a.n);
    for (int k = 0; k < a.n; ++k) {
      lo[k] = -2.0;
      hi[k] = 2.0;
    }
    g = make_grid(a.n - 1 > 0 ? a.n - 1 : 1, a.n, std::vector<std::int64_t>(static_cast<std::size_t>(a.n), per), lo, hi,
                  [&](const Vec& x, Vec& out) {
                    const double r = norm(x);
                    if (r < 0.5 || r > 1.5) return false;
                    const auto p = xi(sphere, x, 1e-12);
                    if (!p) return false;
                    out = *p;
                    return true;
                  });
  } else {
    throw InvalidInput("--kind: expected coordinate, identity or annulus-xi");
  }
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream bytes;
  write_grid(bytes, g);
  write_atomic(a.out, bytes.str());
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratakit: ball-touching strata of closed sets and checks of their estimates"};
  app.require_subcommand(1);

  StratifyArgs sa;
  auto* st = app.add_subcommand("stratify", "classify probe points into the strata B_m");
  st->add_option("--scene", sa.scene, "scene file")->required();
  st->add_option("--out", sa.out, "output directory")->required();
  st->add_option("--m", sa.m, "stratum index (default: scene m list, else 0..n)");
  st->add_option("--q-grid", sa.q_grid, "comma-separated radii");
  st->add_option("--seed", sa.seed, "override the scene seed");

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "randomized residual campaigns for the estimates");
  ve->add_option("--scene", va.scene, "scene file")->required();
  ve->add_option("--out", va.out, "output directory")->required();
  ve->add_option("--estimate", va.estimate, "estimate id or 'all'");
  ve->add_option("--seed", va.seed, "override the scene seed");
  ve->add_option("--samples", va.samples, "override the scene sample count");

  CoareaArgs ca;
  auto* co = app.add_subcommand("coarea", "slab cover of a gridded map");
  auto* grid_opt = co->add_option("--grid", ca.grid, "grid file");
  co->add_option("--scene", ca.grid, "alias of --grid")->excludes(grid_opt);
  co->add_option("--out", ca.out, "output directory")->required();
  co->add_option("--m", ca.m, "plane dimension (default: grid header)");
  co->add_option("--z-threshold", ca.z_threshold, "cells per value bin for Z");
  co->add_option("--bin-width", ca.bin_width, "value bin width (default: grid spacing)");
  co->add_option("--lip-bound", ca.lip_bound, "inverse-Lipschitz bound");
  co->add_option("--random-planes", ca.random_planes, "lattice-direction planes");
  co->add_option("--seed", ca.seed, "seed for random planes");

  GridArgs ga;
  auto* gr = app.add_subcommand("grid", "write a sample grid file");
  gr->add_option("--kind", ga.kind, "coordinate | identity | annulus-xi")->required();
  gr->add_option("--out", ga.out, "grid file")->required();
  gr->add_option("--n", ga.n, "dimension");
  gr->add_option("--spacing", ga.h, "grid spacing h, e.g. 1/256");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInput;
  }

  try {
    if (*co && ca.grid.empty()) throw InvalidInput("coarea: --grid is required");
    for (const std::string* out : {&sa.out, &va.out, &ca.out}) {
      if (!out->empty()) fs::create_directories(*out);
    }
    if (*st) return cmd_stratify(sa);
    if (*ve) return cmd_verify(va);
    if (*co) return cmd_coarea(ca);
    if (*gr) return cmd_grid(ga);
  } catch (const InvalidInput& e) {
    std::cerr << "stratakit: invalid input: " << e.what() << "\n";
    return kInput;
  } catch (const FormatError& e) {
    std::cerr << "stratakit: format error: " << e.what() << "\n";
    return kInput;
  } catch (const UnsupportedInput& e) {
    std::cerr << "stratakit: unsupported input: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "stratakit: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "stratakit: error: " << e.what() << "\n";
    return kNumeric;
  }
  return kPass;
}

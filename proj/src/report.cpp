#include "stratakit/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stratakit/errors.hpp"

namespace stratakit {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Vec& v) { return v.to_vector(); }

namespace {

json params_json(const std::map<std::string, double>& params) {
  json j = json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

json flat_json(const AffineFlat& f) {
  json basis = json::array();
  for (const Vec& e : f.basis()) basis.push_back(vec_json(e));
  return {{"base", vec_json(f.base())}, {"basis", basis}};
}

void dump(const json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // std::map keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(k).dump() + ": ";
        dump(v, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (coordinates) stay on one line.
      const bool flat = j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const json& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump(e, out, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

json to_json(const EstimateReport& r) {
  json witness = json::object();
  for (const auto& [k, v] : r.worst_witness) witness[k] = vec_json(v);
  json subs = json::array();
  for (const SubCheck& c : r.sub_checks) {
    subs.push_back({{"name", c.name},
                    {"samples", c.samples},
                    {"worst_residual", c.worst_residual},
                    {"tol", c.tol},
                    {"pass", c.pass}});
  }
  return {{"estimate_id", std::string(estimate_name(r.estimate_id))},
          {"params", params_json(r.params)},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"worst_residual", r.worst_residual},
          {"worst_witness", witness},
          {"tol_report", r.tol_report},
          {"pass", r.pass},
          {"theorem_violation", r.theorem_violation},
          {"sub_checks", subs},
          {"notes", r.notes}};
}

json to_json(const PatchCover& c) {
  json patches = json::array();
  for (const QuadraticPatch& p : c.patches) {
    json normals = json::array();
    for (const Vec& v : p.normals) normals.push_back(vec_json(v));
    patches.push_back({{"plane", flat_json(p.plane)},
                       {"normals", normals},
                       {"linear", p.linear},
                       {"quadratic", p.quadratic},
                       {"support_radius", p.support_radius},
                       {"seed_point", p.seed_point}});
  }
  return {{"m", c.m},
          {"patches", patches},
          {"assignment", c.assignment},
          {"residual_bound", c.residual_bound},
          {"assigned_fraction", c.assigned_fraction},
          {"recheck_pass", c.recheck_pass},
          {"notes", c.notes}};
}

json to_json(const StratumReport& r) {
  json classified = json::array();
  for (const ClassifiedPoint& c : r.classified) {
    classified.push_back(
        {{"point", vec_json(c.point)}, {"est_dim", c.est_dim}, {"in_stratum", c.in_stratum}, {"q_used", c.q_used}});
  }
  json j{{"m", r.m},
         {"n", r.n},
         {"classified", classified},
         {"in_stratum_count", r.in_stratum_count()},
         {"params", params_json(r.params)},
         {"notes", r.notes}};
  if (r.exact_faces) {
    json faces = json::array();
    for (const FaceDescriptor& f : *r.exact_faces) {
      json verts = json::array();
      for (const Vec& v : f.vertices) verts.push_back(vec_json(v));
      faces.push_back({{"dim", f.dim}, {"vertices", verts}});
    }
    j["exact_faces"] = faces;
  }
  if (r.coverage) j["coverage"] = to_json(*r.coverage);
  return j;
}

json to_json(const SlabCoverReport& r) {
  json pieces = json::array();
  for (const SlabPiece& p : r.pieces) {
    pieces.push_back({{"plane", flat_json(p.plane)},
                      {"nodes", p.nodes},
                      {"inverse_lipschitz", p.inverse_lipschitz},
                      {"new_bins", p.new_bins}});
  }
  return {{"m", r.m},
          {"pieces", pieces},
          {"covered_fraction", r.covered_fraction},
          {"z_threshold", r.z_threshold},
          {"bin_width", r.bin_width},
          {"lip_bound", r.lip_bound},
          {"z_bins", r.z_bins},
          {"covered_bins", r.covered_bins},
          {"candidate_planes", r.candidate_planes},
          {"recheck_pass", r.recheck_pass},
          {"notes", r.notes}};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw FormatError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw FormatError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

}  // namespace stratakit

#include "stratakit/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "stratakit/errors.hpp"

namespace stratakit {

namespace {

constexpr double kIncidenceTol = 1e-9;

Vec homogenize(const Vec& x, double last) {
  Vec h(x.dim() + 1);
  for (int i = 0; i < x.dim(); ++i) h[i] = x[i];
  h[x.dim()] = last;
  return h;
}

Vec drop_last(const Vec& h) {
  Vec x(h.dim() - 1);
  for (int i = 0; i < x.dim(); ++i) x[i] = h[i];
  return x;
}

std::vector<Vec> dedupe(std::span<const Vec> points, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : points) {
    const bool seen =
        std::any_of(out.begin(), out.end(), [&](const Vec& q) { return norm(p - q) <= tol; });
    if (!seen) out.push_back(p);
  }
  return out;
}

}  // namespace

ConvexPolytope ConvexPolytope::from_vertices(std::span<const Vec> points) {
  if (points.empty()) throw InvalidInput("polytope: no vertices");
  const int n = points.front().dim();
  for (const Vec& p : points) {
    require_valid(p, "polytope vertex");
    if (p.dim() != n) throw InvalidInput("polytope: vertex dimension mismatch");
  }

  Vec centroid(n);
  for (const Vec& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const Vec& p : points) scale = std::max(scale, norm(p - centroid));
  const double unit = scale > 0.0 ? scale : 1.0;

  const std::vector<Vec> pts = dedupe(points, 1e-12 * unit);

  // Affine hull first, so that the facet computation below always works with
  // a full-dimensional point set in local coordinates.
  std::vector<Vec> diffs;
  for (const Vec& p : pts) diffs.push_back((p - centroid) / unit);
  const std::vector<Vec> basis = orthonormalize(diffs, 1e-8);
  const int k = static_cast<int>(basis.size());

  ConvexPolytope poly;
  poly.n_ = n;
  poly.dim_ = k;
  poly.equalities_ = Subspace(n, basis).orthogonal_complement().basis();
  if (k == 0) {
    poly.vertices_.push_back(pts.front());
    poly.build_faces();
    return poly;
  }

  auto local = [&](const Vec& p) {
    Vec y(k);
    const Vec d = (p - centroid) / unit;
    for (int i = 0; i < k; ++i) y[i] = dot(d, basis[static_cast<std::size_t>(i)]);
    return y;
  };

  // Facets of conv(P) are the extreme rays of the polar of cone{(p, 1)}.
  std::vector<Vec> lifted;
  for (const Vec& p : pts) lifted.push_back(homogenize(local(p), 1.0));
  const ConeGenerators polar_gens = cone_from_inequalities(k + 1, lifted);

  for (const Vec& r : polar_gens.rays) {
    const Vec h = drop_last(r);
    const double len = norm(h);
    if (len < 1e-12) continue;
    // h . y <= -r_k with y the local coordinates of x.
    Vec normal(n);
    for (int i = 0; i < k; ++i) normal += (h[i] / len) * basis[static_cast<std::size_t>(i)];
    const double offset = -r[k] * unit / len + dot(normal, centroid);
    const bool seen = std::any_of(poly.facets_.begin(), poly.facets_.end(), [&](const Halfspace& f) {
      return norm(f.normal - normal) < 1e-9 && std::abs(f.offset - offset) < 1e-9 * unit;
    });
    if (!seen) poly.facets_.push_back({normal, offset});
  }

  // Vertices: points where the active facet normals span the tangent directions.
  const double tol = kIncidenceTol * unit;
  for (const Vec& p : pts) {
    std::vector<Vec> active;
    for (const Halfspace& f : poly.facets_) {
      if (std::abs(dot(f.normal, p) - f.offset) <= tol) active.push_back(f.normal);
    }
    if (rank_of(active, 1e-9) == k) poly.vertices_.push_back(p);
  }
  if (static_cast<int>(poly.vertices_.size()) < k + 1) {
    throw InvalidInput("polytope: point set too degenerate to resolve its vertices");
  }
  poly.build_faces();
  return poly;
}

ConvexPolytope ConvexPolytope::from_halfspaces(int n, std::span<const Halfspace> halfspaces) {
  if (n < 1 || n > kMaxDim) throw InvalidInput("polytope: dimension must be in [1, 8]");
  std::vector<Vec> normals;
  for (const Halfspace& h : halfspaces) {
    if (h.normal.dim() != n) throw InvalidInput("polytope: halfspace dimension mismatch");
    if (!all_finite(h.normal) || !std::isfinite(h.offset)) {
      throw InvalidInput("polytope: non-finite halfspace");
    }
    const double len = norm(h.normal);
    if (len == 0.0) {
      if (h.offset < 0.0) throw InvalidInput("polytope: halfspace 0 <= negative offset is empty");
      continue;
    }
    // h . x - b t <= 0 on the cone over the polytope.
    normals.push_back(homogenize(h.normal / len, -h.offset / len));
  }
  normals.push_back(homogenize(Vec(n), -1.0));  // t >= 0

  const ConeGenerators gens = cone_from_inequalities(n + 1, normals);
  if (!gens.lineality.empty()) throw InvalidInput("polytope: halfspaces define an unbounded set (contains a line)");
  std::vector<Vec> vertices;
  bool recession = false;
  for (const Vec& r : gens.rays) {
    if (r[n] > 1e-12) {
      vertices.push_back(drop_last(r) / r[n]);
    } else {
      recession = true;
    }
  }
  if (vertices.empty()) throw InvalidInput("polytope: halfspaces define an empty set");
  if (recession) throw InvalidInput("polytope: halfspaces define an unbounded set");
  return from_vertices(vertices);
}

void ConvexPolytope::build_faces() {
  double unit = 0.0;
  for (const Vec& v : vertices_) unit = std::max(unit, norm(v - vertices_.front()));
  const double tol = kIncidenceTol * std::max(unit, 1.0);

  const int nv = static_cast<int>(vertices_.size());
  std::vector<std::vector<int>> facet_sets;
  for (const Halfspace& f : facets_) {
    std::vector<int> s;
    for (int i = 0; i < nv; ++i) {
      if (std::abs(dot(f.normal, vertices_[i]) - f.offset) <= tol) s.push_back(i);
    }
    facet_sets.push_back(std::move(s));
  }

  std::vector<int> all(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) all[i] = i;
  std::set<std::vector<int>> found{all};
  std::vector<std::vector<int>> queue{all};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::vector<int> current = queue[head];
    for (const auto& fs : facet_sets) {
      std::vector<int> inter;
      std::set_intersection(current.begin(), current.end(), fs.begin(), fs.end(),
                            std::back_inserter(inter));
      if (inter.empty() || inter == current) continue;
      if (found.insert(inter).second) queue.push_back(inter);
    }
  }

  faces_.clear();
  for (const auto& vs : found) {
    std::vector<Vec> diffs;
    for (int i : vs) diffs.push_back(vertices_[i] - vertices_[vs.front()]);
    std::vector<int> fidx;
    for (std::size_t j = 0; j < facet_sets.size(); ++j) {
      if (std::includes(facet_sets[j].begin(), facet_sets[j].end(), vs.begin(), vs.end())) {
        fidx.push_back(static_cast<int>(j));
      }
    }
    AffineFlat hull = AffineFlat::spanned_by(vertices_[vs.front()], diffs);
    faces_.push_back(Face{hull.dim(), vs, std::move(fidx), std::move(hull)});
  }
  std::stable_sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
}

bool ConvexPolytope::contains(const Vec& x, double tol) const {
  require_same_dim(x, vertices_.front(), "ConvexPolytope::contains");
  for (const Halfspace& f : facets_) {
    if (dot(f.normal, x) > f.offset + tol) return false;
  }
  const Vec& v0 = vertices_.front();
  for (const Vec& e : equalities_) {
    if (std::abs(dot(e, x - v0)) > tol) return false;
  }
  return true;
}

ConvexPolytope::Projection ConvexPolytope::project(const Vec& x) const {
  require_same_dim(x, vertices_.front(), "ConvexPolytope::project");
  if (contains(x, 0.0)) return {x, 0.0, minimal_face(x)};

  Projection best{x, std::numeric_limits<double>::infinity(), -1};
  double best2 = std::numeric_limits<double>::infinity();
  const double tol = 1e-10 * std::max(1.0, norm(x - vertices_.front()));
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    const Face& face = faces_[k];
    const Vec p = project_onto_flat(x, face.hull);
    const double d2 = norm2(x - p);
    if (d2 >= best2) continue;
    bool feasible = true;
    std::size_t next = 0;
    for (std::size_t j = 0; j < facets_.size() && feasible; ++j) {
      if (next < face.facets.size() && face.facets[next] == static_cast<int>(j)) {
        ++next;
        continue;
      }
      if (dot(facets_[j].normal, p) > facets_[j].offset + tol) feasible = false;
    }
    if (!feasible) continue;
    best2 = d2;
    best = {p, 0.0, static_cast<int>(k)};
  }
  best.distance = std::sqrt(best2);
  return best;
}

std::vector<int> ConvexPolytope::active_facets(const Vec& x, double tol) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    if (dot(facets_[j].normal, x) >= facets_[j].offset - tol) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<Vec> ConvexPolytope::normal_cone_generators(const Vec& x, double tol) const {
  std::vector<Vec> gens;
  for (int j : active_facets(x, tol)) gens.push_back(facets_[j].normal);
  for (const Vec& e : equalities_) {
    gens.push_back(e);
    gens.push_back(-e);
  }
  return gens;
}

int ConvexPolytope::minimal_face(const Vec& x, double tol) const {
  const std::vector<int> active = active_facets(x, tol);
  // The smallest face containing x is the face whose facet set is exactly the
  // set of facets active at x; faces are sorted by dimension, so the first
  // face containing every active facet is it.
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    const auto& fs = faces_[k].facets;
    if (std::includes(fs.begin(), fs.end(), active.begin(), active.end()) &&
        fs.size() == active.size()) {
      return static_cast<int>(k);
    }
  }
  // Tolerance noise: fall back to the largest face inside every active facet.
  for (std::size_t k = faces_.size(); k-- > 0;) {
    const auto& fs = faces_[k].facets;
    if (std::includes(fs.begin(), fs.end(), active.begin(), active.end())) return static_cast<int>(k);
  }
  return 0;
}

int ConvexPolytope::normal_cone_dim(const Vec& x, double tol) const {
  return n_ - faces_[static_cast<std::size_t>(minimal_face(x, tol))].dim;
}

double ConvexPolytope::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) d = std::max(d, norm(vertices_[i] - vertices_[j]));
  }
  return d;
}

double min_nonadjacent_face_distance(const ConvexPolytope& p) {
  double best = std::numeric_limits<double>::infinity();
  const auto& faces = p.faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].dim >= p.dim()) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (faces[j].dim >= p.dim()) continue;
      std::vector<int> shared;
      std::set_intersection(faces[i].vertices.begin(), faces[i].vertices.end(),
                            faces[j].vertices.begin(), faces[j].vertices.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) continue;
      // dist(F, G) = dist(0, F - G) with F - G the Minkowski difference.
      std::vector<Vec> diffs;
      for (int a : faces[i].vertices) {
        for (int b : faces[j].vertices) diffs.push_back(p.vertices()[a] - p.vertices()[b]);
      }
      const ConvexPolytope diff = ConvexPolytope::from_vertices(diffs);
      best = std::min(best, diff.project(Vec(p.ambient_dim())).distance);
    }
  }
  return best;
}

}  // namespace stratakit

#include "stratakit/closed_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stratakit/errors.hpp"
#include "stratakit/sampling.hpp"

namespace stratakit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double set_diameter(std::span<const Vec> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) d = std::max(d, norm(pts[i] - pts[j]));
  }
  return d;
}

}  // namespace

ClosedSet ClosedSet::hpolytope(int n, std::vector<Halfspace> halfspaces) {
  auto body = std::make_shared<const ConvexPolytope>(ConvexPolytope::from_halfspaces(n, halfspaces));
  return {n, HPolytope{std::move(halfspaces), std::move(body)}};
}

ClosedSet ClosedSet::vpolytope(std::vector<Vec> vertices) {
  auto body = std::make_shared<const ConvexPolytope>(ConvexPolytope::from_vertices(vertices));
  const int n = vertices.front().dim();
  return {n, VPolytope{std::move(vertices), std::move(body)}};
}

ClosedSet ClosedSet::ball(Vec center, double radius) {
  require_valid(center, "ball center");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be finite and >= 0");
  const int n = center.dim();
  return {n, Ball{std::move(center), radius}};
}

ClosedSet ClosedSet::sphere(Vec center, double radius) {
  require_valid(center, "sphere center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("sphere radius must be finite and > 0");
  const int n = center.dim();
  return {n, Sphere{std::move(center), radius}};
}

ClosedSet ClosedSet::flat(AffineFlat flat) {
  const int n = flat.ambient_dim();
  if (n > kMaxDim) throw InvalidInput("flat: dimension must be in [1, 8]");
  return {n, Flat{std::move(flat)}};
}

ClosedSet ClosedSet::point_cloud(std::vector<Vec> points) {
  if (points.empty()) throw InvalidInput("point cloud must be nonempty");
  const int n = points.front().dim();
  for (const Vec& p : points) {
    require_valid(p, "point cloud point");
    if (p.dim() != n) throw InvalidInput("point cloud: dimension mismatch");
  }
  return {n, PointCloud{std::move(points)}};
}

ClosedSet ClosedSet::union_of(std::vector<ClosedSet> parts) {
  if (parts.empty()) throw InvalidInput("union must have at least one part");
  const int n = parts.front().ambient_dim();
  for (const ClosedSet& p : parts) {
    if (p.ambient_dim() != n) throw InvalidInput("union parts must share the ambient dimension");
  }
  return {n, Union{std::move(parts)}};
}

bool ClosedSet::is_convex() const {
  return std::visit(Overloaded{
                        [](const HPolytope&) { return true; },
                        [](const VPolytope&) { return true; },
                        [](const Ball&) { return true; },
                        [](const Sphere&) { return false; },
                        [](const Flat&) { return true; },
                        [](const PointCloud& pc) {
                          return std::all_of(pc.points.begin(), pc.points.end(),
                                             [&](const Vec& p) { return p == pc.points.front(); });
                        },
                        [](const Union& u) { return u.parts.size() == 1 && u.parts.front().is_convex(); },
                    },
                    *v_);
}

const ConvexPolytope* ClosedSet::polytope() const {
  if (const auto* h = std::get_if<HPolytope>(v_.get())) return h->body.get();
  if (const auto* v = std::get_if<VPolytope>(v_.get())) return v->body.get();
  return nullptr;
}

const char* ClosedSet::kind() const {
  static constexpr const char* kNames[] = {"hpolytope", "vpolytope", "ball", "sphere",
                                           "flat",      "point_cloud", "union"};
  return kNames[v_->index()];
}

double distance(const ClosedSet& a, const Vec& x) {
  require_same_dim(x, Vec(a.ambient_dim()), "distance");
  return std::visit(
      Overloaded{
          [&](const HPolytope& p) { return p.body->project(x).distance; },
          [&](const VPolytope& p) { return p.body->project(x).distance; },
          [&](const Ball& b) { return std::max(0.0, norm(x - b.center) - b.radius); },
          [&](const Sphere& s) { return std::abs(norm(x - s.center) - s.radius); },
          [&](const Flat& f) { return norm(x - project_onto_flat(x, f.flat)); },
          [&](const PointCloud& pc) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec& p : pc.points) best = std::min(best, norm2(x - p));
            return std::sqrt(best);
          },
          [&](const Union& u) {
            double best = std::numeric_limits<double>::infinity();
            for (const ClosedSet& part : u.parts) best = std::min(best, distance(part, x));
            return best;
          },
      },
      a.variant());
}

ProjectionResult nearest_point_set(const ClosedSet& a, const Vec& x, double tol_unique) {
  if (!(tol_unique > 0.0)) throw InvalidInput("nearest_point_set: tol_unique must be positive");
  require_same_dim(x, Vec(a.ambient_dim()), "nearest_point_set");
  ProjectionResult r = std::visit(
      Overloaded{
          [&](const HPolytope& p) {
            const auto pr = p.body->project(x);
            return ProjectionResult{pr.distance, {pr.point}, 0.0, true};
          },
          [&](const VPolytope& p) {
            const auto pr = p.body->project(x);
            return ProjectionResult{pr.distance, {pr.point}, 0.0, true};
          },
          [&](const Ball& b) {
            const Vec d = x - b.center;
            const double len = norm(d);
            if (len <= b.radius) return ProjectionResult{0.0, {x}, 0.0, true};
            return ProjectionResult{len - b.radius, {b.center + (b.radius / len) * d}, 0.0, true};
          },
          [&](const Sphere& s) {
            const Vec d = x - s.center;
            const double len = norm(d);
            if (len == 0.0) {
              // Every point of the sphere is nearest.
              ProjectionResult res{s.radius, {}, 2.0 * s.radius, false};
              for (int i = 0; i < x.dim(); ++i) {
                res.nearest.push_back(s.center + s.radius * unit_vector(x.dim(), i));
                res.nearest.push_back(s.center - s.radius * unit_vector(x.dim(), i));
              }
              return res;
            }
            return ProjectionResult{std::abs(len - s.radius), {s.center + (s.radius / len) * d}, 0.0, true};
          },
          [&](const Flat& f) {
            const Vec p = project_onto_flat(x, f.flat);
            return ProjectionResult{norm(x - p), {p}, 0.0, true};
          },
          [&](const PointCloud& pc) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec& p : pc.points) best = std::min(best, norm(x - p));
            ProjectionResult res{best, {}, 0.0, true};
            for (const Vec& p : pc.points) {
              if (norm(x - p) <= best + kTolDist) {
                const bool seen = std::any_of(res.nearest.begin(), res.nearest.end(),
                                              [&](const Vec& q) { return q == p; });
                if (!seen) res.nearest.push_back(p);
              }
            }
            res.diameter_bound = set_diameter(res.nearest);
            return res;
          },
          [&](const Union& u) {
            std::vector<ProjectionResult> parts;
            double best = std::numeric_limits<double>::infinity();
            for (const ClosedSet& part : u.parts) {
              parts.push_back(nearest_point_set(part, x, tol_unique));
              best = std::min(best, parts.back().distance);
            }
            ProjectionResult res{best, {}, 0.0, true};
            double part_diam = 0.0;
            for (const ProjectionResult& pr : parts) {
              if (pr.distance > best + kTolDist) continue;
              part_diam = std::max(part_diam, pr.diameter_bound);
              for (const Vec& p : pr.nearest) {
                const bool seen = std::any_of(res.nearest.begin(), res.nearest.end(),
                                              [&](const Vec& q) { return norm(q - p) <= kTolDist; });
                if (!seen) res.nearest.push_back(p);
              }
            }
            res.diameter_bound = std::max(part_diam, set_diameter(res.nearest));
            return res;
          },
      },
      a.variant());
  r.unique = r.diameter_bound <= tol_unique;
  return r;
}

std::optional<Vec> xi(const ClosedSet& a, const Vec& x, double tol_unique) {
  ProjectionResult r = nearest_point_set(a, x, tol_unique);
  if (!r.unique) return std::nullopt;
  return r.nearest.front();
}

Box bounding_box(const ClosedSet& a) {
  const int n = a.ambient_dim();
  const double inf = std::numeric_limits<double>::infinity();
  auto of_points = [&](std::span<const Vec> pts) {
    Box b{Vec(n), Vec(n)};
    for (int i = 0; i < n; ++i) {
      b.lo[i] = inf;
      b.hi[i] = -inf;
    }
    for (const Vec& p : pts) {
      for (int i = 0; i < n; ++i) {
        b.lo[i] = std::min(b.lo[i], p[i]);
        b.hi[i] = std::max(b.hi[i], p[i]);
      }
    }
    return b;
  };
  return std::visit(
      Overloaded{
          [&](const HPolytope& p) { return of_points(p.body->vertices()); },
          [&](const VPolytope& p) { return of_points(p.body->vertices()); },
          [&](const Ball& b) {
            Vec r(n);
            for (int i = 0; i < n; ++i) r[i] = b.radius;
            return Box{b.center - r, b.center + r};
          },
          [&](const Sphere& s) {
            Vec r(n);
            for (int i = 0; i < n; ++i) r[i] = s.radius;
            return Box{s.center - r, s.center + r};
          },
          [&](const Flat& f) {
            if (f.flat.dim() > 0) throw UnsupportedInput("flat of positive dimension is unbounded");
            return Box{f.flat.base(), f.flat.base()};
          },
          [&](const PointCloud& pc) { return of_points(pc.points); },
          [&](const Union& u) {
            Box b = bounding_box(u.parts.front());
            for (const ClosedSet& part : u.parts) {
              const Box pb = bounding_box(part);
              for (int i = 0; i < n; ++i) {
                b.lo[i] = std::min(b.lo[i], pb.lo[i]);
                b.hi[i] = std::max(b.hi[i], pb.hi[i]);
              }
            }
            return b;
          },
      },
      a.variant());
}

double scene_diameter(const ClosedSet& a) {
  try {
    const Box b = bounding_box(a);
    const double d = norm(b.hi - b.lo);
    return d > 0.0 ? d : 1.0;
  } catch (const UnsupportedInput&) {
    return 1.0;
  }
}

double default_tol_unique(const ClosedSet& a) { return 1e-8 * scene_diameter(a); }

std::vector<Vec> normal_hints(const ClosedSet& a, const Vec& point, double tol) {
  const int n = a.ambient_dim();
  return std::visit(
      Overloaded{
          [&](const HPolytope& p) { return p.body->normal_cone_generators(point, tol); },
          [&](const VPolytope& p) { return p.body->normal_cone_generators(point, tol); },
          [&](const Ball& b) {
            const Vec d = point - b.center;
            const double len = norm(d);
            std::vector<Vec> out;
            if (len > 0.0 && len >= b.radius - tol) out.push_back(d / len);
            if (b.radius == 0.0) {
              for (int i = 0; i < n; ++i) {
                out.push_back(unit_vector(n, i));
                out.push_back(-unit_vector(n, i));
              }
            }
            return out;
          },
          [&](const Sphere& s) {
            const Vec d = point - s.center;
            const double len = norm(d);
            std::vector<Vec> out;
            if (len > 0.0) {
              out.push_back(d / len);
              out.push_back(-d / len);
            }
            return out;
          },
          [&](const Flat& f) {
            std::vector<Vec> out;
            const Subspace normal = f.flat.direction().orthogonal_complement();
            for (const Vec& e : normal.basis()) {
              out.push_back(e);
              out.push_back(-e);
            }
            return out;
          },
          [&](const PointCloud&) { return std::vector<Vec>{}; },
          [&](const Union& u) {
            std::vector<Vec> out;
            for (const ClosedSet& part : u.parts) {
              if (distance(part, point) > tol) continue;
              for (const Vec& h : normal_hints(part, point, tol)) out.push_back(h);
            }
            return out;
          },
      },
      a.variant());
}

std::vector<Vec> cover_points(const ClosedSet& a, double step) {
  if (!(step > 0.0)) throw InvalidInput("cover_points: step must be positive");
  const int n = a.ambient_dim();
  const Box box = bounding_box(a);
  double spacing = step / std::sqrt(static_cast<double>(n));
  constexpr double kMaxGrid = 250000.0;
  auto grid_count = [&](double s) {
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= std::floor((box.hi[i] - box.lo[i] + 2.0 * s) / s) + 1.0;
    return total;
  };
  while (grid_count(spacing) > kMaxGrid) spacing *= 1.25;

  std::vector<int> counts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    counts[i] = static_cast<int>(std::floor((box.hi[i] - box.lo[i] + 2.0 * spacing) / spacing)) + 1;
  }
  const double tol_unique = default_tol_unique(a);
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = box.lo[i] - spacing + spacing * idx[i];
    for (const Vec& p : nearest_point_set(a, g, tol_unique).nearest) out.push_back(p);
    int k = 0;
    while (k < n && ++idx[k] == counts[k]) idx[k++] = 0;
    if (k == n) break;
  }
  if (const ConvexPolytope* body = a.polytope()) {
    for (const Vec& v : body->vertices()) out.push_back(v);
  }
  if (const auto* s = std::get_if<Sphere>(&a.variant())) {
    for (int i = 0; i < n; ++i) {
      out.push_back(s->center + s->radius * unit_vector(n, i));
      out.push_back(s->center - s->radius * unit_vector(n, i));
    }
  }
  return out;
}

std::vector<Vec> sample_points_on(const ClosedSet& a, int count, std::uint64_t seed, double margin) {
  if (const auto* f = std::get_if<Flat>(&a.variant()); f != nullptr && f->flat.dim() > 0) {
    // Unbounded: uniform local coordinates in [-margin, margin] (1 if negative).
    const double half = margin >= 0.0 ? margin : 1.0;
    Rng rng(seed);
    std::vector<Vec> out;
    std::vector<double> t(static_cast<std::size_t>(f->flat.dim()));
    for (int k = 0; k < count; ++k) {
      for (double& c : t) c = rng.uniform(-half, half);
      out.push_back(f->flat.from_local(t));
    }
    return out;
  }
  const Box box = bounding_box(a);
  const double pad = margin >= 0.0 ? margin : 0.25 * scene_diameter(a);
  Vec lo = box.lo, hi = box.hi;
  for (int i = 0; i < a.ambient_dim(); ++i) {
    lo[i] -= pad;
    hi[i] += pad;
  }
  Rng rng(seed);
  const double tol_unique = default_tol_unique(a);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out.push_back(nearest_point_set(a, rng.in_box(lo, hi), tol_unique).nearest.front());
  }
  return out;
}

HausdorffEstimate hausdorff_distance_sets(const ClosedSet& a, const ClosedSet& b, double step) {
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidInput("hausdorff_distance_sets: dimension mismatch");
  // Bounded-ness check up front (throws UnsupportedInput).
  bounding_box(a);
  bounding_box(b);
  if (!(step > 0.0)) step = std::max(scene_diameter(a), scene_diameter(b)) / 64.0;

  HausdorffEstimate est;
  auto directed = [&](const ClosedSet& from, const ClosedSet& to) {
    // dist(., to) is convex when `to` is convex, so its maximum over a
    // polytope is attained at a vertex; finite sets are exact as they stand.
    std::vector<Vec> pts;
    if (const auto* pc = std::get_if<PointCloud>(&from.variant())) {
      pts = pc->points;
    } else if (from.polytope() != nullptr && to.is_convex()) {
      pts = from.polytope()->vertices();
    } else {
      pts = cover_points(from, step);
      est.exact = false;
    }
    double worst = 0.0;
    for (const Vec& p : pts) worst = std::max(worst, distance(to, p));
    return worst;
  };
  est.value = std::max(directed(a, b), directed(b, a));
  est.step = est.exact ? 0.0 : step;
  return est;
}

}  // namespace stratakit

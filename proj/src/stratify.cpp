#include "stratakit/stratify.hpp"

#include <algorithm>
#include <cmath>

#include "stratakit/bundle.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/parallel.hpp"
#include "stratakit/sampling.hpp"

namespace stratakit {

namespace {

const ConvexPolytope& require_polytope(const ClosedSet& a_set, const char* who) {
  const ConvexPolytope* p = a_set.polytope();
  if (p == nullptr) throw UnsupportedInput(std::string(who) + ": the set is not a convex polytope");
  return *p;
}

void require_m(const ClosedSet& a_set, int m, const char* who) {
  if (m < 0 || m > a_set.ambient_dim()) throw InvalidInput(std::string(who) + ": need 0 <= m <= n");
}

double probe_tol(const ClosedSet& a_set, const StratifyOptions& o) {
  return o.tol_probe >= 0.0 ? o.tol_probe : 1e-9 * std::max(1.0, scene_diameter(a_set));
}

}  // namespace

std::size_t StratumReport::in_stratum_count() const {
  return static_cast<std::size_t>(
      std::count_if(classified.begin(), classified.end(), [](const ClassifiedPoint& c) { return c.in_stratum; }));
}

StratumReport stratify_exact_polytope(const ClosedSet& a_set, int m, std::span<const Vec> probes) {
  const ConvexPolytope& p = require_polytope(a_set, "stratify_exact_polytope");
  require_m(a_set, m, "stratify_exact_polytope");
  const int n = a_set.ambient_dim();
  StratumReport rep;
  rep.m = m;
  rep.n = n;
  std::vector<FaceDescriptor> faces;
  for (const Face& f : p.faces()) {
    if (f.dim > m) continue;
    FaceDescriptor d{f.dim, {}, f.hull};
    for (int v : f.vertices) d.vertices.push_back(p.vertices()[static_cast<std::size_t>(v)]);
    faces.push_back(std::move(d));
  }
  rep.exact_faces = std::move(faces);
  for (const Vec& x : probes) {
    if (!p.contains(x, 1e-9)) throw PreconditionError("stratify_exact_polytope: probe off the polytope");
    const int dim = p.normal_cone_dim(x);
    rep.classified.push_back({x, dim, dim >= n - m, 0.0});
  }
  return rep;
}

std::vector<double> default_q_grid(const ClosedSet& a_set) {
  const double diam = scene_diameter(a_set);
  if (const ConvexPolytope* p = a_set.polytope()) {
    const double d = min_nonadjacent_face_distance(*p);
    return {std::isfinite(d) ? 0.5 * d : 0.25 * diam};
  }
  return {diam / 16.0, diam / 8.0, diam / 4.0};
}

std::vector<ClassifiedPoint> estimate_bundle_dims(const ClosedSet& a_set, std::span<const Vec> probes,
                                                  const StratifyOptions& o) {
  const int n = a_set.ambient_dim();
  const std::vector<double> grid = o.q_grid.empty() ? default_q_grid(a_set) : o.q_grid;
  for (double q : grid) {
    if (!(q > 0.0)) throw InvalidInput("stratify: q grid values must be positive");
  }
  const double tol = probe_tol(a_set, o);
  for (const Vec& x : probes) {
    if (x.dim() != n) throw InvalidInput("stratify: probe dimension mismatch");
    if (distance(a_set, x) > tol) throw PreconditionError("stratify: probe point off the set");
  }
  const double tol_touch = o.tol_touch > 0.0 ? o.tol_touch : default_tol_touch(a_set);
  const int num_dirs = o.num_dirs > 0 ? o.num_dirs : 8 * n;

  std::vector<ClassifiedPoint> out(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    ClassifiedPoint c{probes[i], -1, false, 0.0};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      DisSampleOptions so;
      so.q_frac = o.q_frac;
      so.tol_rank = o.tol_rank;
      so.use_hints = o.use_hints;
      so.seed = derive_seed(o.seed, "probe", i * grid.size() + k);
      const int d = dis_sample(a_set, probes[i], grid[k], num_dirs, tol_touch, so).est_dim;
      if (d > c.est_dim) {
        c.est_dim = d;
        c.q_used = grid[k];
      }
    }
    out[i] = c;
  }, o.threads);
  return out;
}

StratumReport stratum_from_dims(const ClosedSet& a_set, int m, std::vector<ClassifiedPoint> dims,
                                const StratifyOptions& o) {
  require_m(a_set, m, "stratify_sampled");
  const int n = a_set.ambient_dim();
  StratumReport rep;
  rep.m = m;
  rep.n = n;
  for (ClassifiedPoint& c : dims) c.in_stratum = c.est_dim >= n - m;
  rep.classified = std::move(dims);
  const std::vector<double> grid = o.q_grid.empty() ? default_q_grid(a_set) : o.q_grid;
  for (std::size_t k = 0; k < grid.size(); ++k) rep.params["q_grid_" + std::to_string(k)] = grid[k];
  rep.params["num_dirs"] = o.num_dirs > 0 ? o.num_dirs : 8 * n;
  rep.params["q_frac"] = o.q_frac;
  rep.params["tol_rank"] = o.tol_rank;
  rep.params["tol_probe"] = probe_tol(a_set, o);
  return rep;
}

StratumReport stratify_sampled(const ClosedSet& a_set, int m, std::span<const Vec> probes, const StratifyOptions& o) {
  require_m(a_set, m, "stratify_sampled");
  return stratum_from_dims(a_set, m, estimate_bundle_dims(a_set, probes, o), o);
}

std::vector<Vec> polytope_probes(const ConvexPolytope& p, int count, std::uint64_t seed, bool include_interior) {
  std::vector<Vec> out;
  for (const Vec& v : p.vertices()) {
    if (static_cast<int>(out.size()) >= count) return out;
    out.push_back(v);
  }
  std::vector<const Face*> faces;
  for (const Face& f : p.faces()) {
    if (f.dim == 0) continue;
    if (f.dim == p.dim() && p.dim() == p.ambient_dim() && !include_interior) continue;
    faces.push_back(&f);
  }
  if (faces.empty()) return out;
  Rng rng(seed);
  for (std::size_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    const Face& f = *faces[k % faces.size()];
    Vec x(p.ambient_dim());
    double total = 0.0;
    for (int v : f.vertices) {
      const double w = -std::log(1.0 - rng.uniform01()) + 1e-3;
      x += w * p.vertices()[static_cast<std::size_t>(v)];
      total += w;
    }
    out.push_back(x / total);
  }
  return out;
}

std::vector<Vec> default_probes(const ClosedSet& a_set, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("default_probes: count must be positive");
  if (const ConvexPolytope* p = a_set.polytope()) return polytope_probes(*p, count, seed);
  std::vector<Vec> out;
  if (const auto* s = std::get_if<Sphere>(&a_set.variant())) {
    for (int i = 0; i < a_set.ambient_dim() && static_cast<int>(out.size()) < count; ++i) {
      out.push_back(s->center + s->radius * unit_vector(a_set.ambient_dim(), i));
    }
  } else if (const auto* pc = std::get_if<PointCloud>(&a_set.variant())) {
    for (const Vec& x : pc->points) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back(x);
    }
    return out;
  }
  const int rest = count - static_cast<int>(out.size());
  if (rest > 0) {
    for (Vec& x : sample_points_on(a_set, rest, seed)) out.push_back(std::move(x));
  }
  return out;
}

std::vector<AffineFlat> random_planes(int n, int m, int count, const Box& box, std::uint64_t seed) {
  if (m < 0 || m > n) throw InvalidInput("random_planes: need 0 <= m <= n");
  Rng rng(seed);
  std::vector<AffineFlat> out;
  for (int k = 0; k < count; ++k) {
    const Vec base = rng.in_box(box.lo, box.hi);
    std::vector<Vec> dirs;
    while (static_cast<int>(dirs.size()) < m) {
      std::vector<Vec> trial = dirs;
      trial.push_back(rng.unit(n));
      std::vector<Vec> ortho = orthonormalize(trial);
      if (ortho.size() == trial.size()) dirs = std::move(ortho);
    }
    out.emplace_back(base, std::move(dirs));
  }
  return out;
}

std::vector<CoverPair> projection_cover(const ClosedSet& a_set, int m, int i, std::span<const AffineFlat> planes,
                                        int shell_samples, const ProjectionCoverOptions& o) {
  const int n = a_set.ambient_dim();
  if (i < 1) throw InvalidInput("projection_cover: i must be a positive integer");
  if (planes.empty()) throw InvalidInput("projection_cover: no planes");
  if (m < 0 || m > n) throw InvalidInput("projection_cover: need 0 <= m <= n");
  for (const AffineFlat& f : planes) {
    if (f.dim() != m || f.ambient_dim() != n) throw InvalidInput("projection_cover: plane dimension mismatch");
  }
  const double r = 1.0 / i;
  const double q = std::min(1.0, 2.0 * r);
  const double tol_touch = o.tol_touch > 0.0 ? o.tol_touch : default_tol_touch(a_set);
  const double tol_unique = default_tol_unique(a_set);
  const int num_dirs = o.num_dirs > 0 ? o.num_dirs : 8 * n;

  // Shell points are only useful near the set; sample each plane in a cube
  // around the point nearest the scene centre.
  Vec centre(n);
  double half = 1.0;
  try {
    const Box b = bounding_box(a_set);
    centre = 0.5 * (b.lo + b.hi);
    half = 0.5 * norm(b.hi - b.lo) + r;
  } catch (const UnsupportedInput&) {
    half = 1.0 + r;
  }
  std::vector<Vec> sources;
  for (std::size_t p = 0; p < planes.size(); ++p) {
    const AffineFlat& f = planes[p];
    if (m == 0) {
      sources.push_back(f.base());
      continue;
    }
    const Vec mid = project_onto_flat(centre, f);
    Rng rng(derive_seed(o.seed, "plane", p));
    for (int k = 0; k < shell_samples; ++k) {
      Vec x = mid;
      for (const Vec& e : f.basis()) x += rng.uniform(-half, half) * e;
      sources.push_back(x);
    }
  }

  std::vector<std::optional<CoverPair>> found(sources.size());
  parallel_for(sources.size(), [&](std::size_t k) {
    const Vec& x = sources[k];
    const ProjectionResult pr = nearest_point_set(a_set, x, tol_unique);
    if (!pr.unique || !(pr.distance > 0.0) || !(pr.distance < r)) return;
    const Vec a = pr.nearest.front();
    const Vec u = (x - a) / pr.distance;
    // r u in the relative interior of Dis n B(0, 1): the touching radius along
    // u must exceed r (so r < 1 is needed) and u must be interior to the cone.
    if (!(max_touch_radius(a_set, a, u, q, tol_touch, 1e-6) > r * (1.0 + 1e-6))) return;
    DisSampleOptions so;
    so.tol_rank = o.tol_rank;
    so.use_hints = o.use_hints;
    so.seed = derive_seed(o.seed, "cover-bundle", k);
    const DistanceBundleSample bundle = dis_sample(a_set, a, q, num_dirs, tol_touch, so);
    if (bundle.est_dim < n - m) return;
    if (!relint_contains(bundle_cone(bundle), u, 1e-9)) return;
    found[k] = CoverPair{x, a};
  }, o.threads);

  std::vector<CoverPair> out;
  for (auto& f : found) {
    if (f) out.push_back(std::move(*f));
  }
  return out;
}

}  // namespace stratakit

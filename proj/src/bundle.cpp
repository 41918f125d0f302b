#include "stratakit/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratakit/errors.hpp"
#include "stratakit/sampling.hpp"

namespace stratakit {

bool dis_membership(const ClosedSet& a_set, const Vec& a, const Vec& v, double tol_touch) {
  require_same_dim(a, v, "dis_membership");
  if (!(tol_touch > 0.0)) throw InvalidInput("dis_membership: tol_touch must be positive");
  if (distance(a_set, a) > tol_touch) {
    throw PreconditionError("dis_membership: base point is not on the set");
  }
  return std::abs(distance(a_set, a + v) - norm(v)) <= tol_touch;
}

double default_tol_touch(const ClosedSet& a_set) {
  return 1e-12 * std::max(1.0, scene_diameter(a_set));
}

double max_touch_radius(const ClosedSet& a_set, const Vec& a, const Vec& v, double q,
                        double tol_touch, double resolution) {
  auto member = [&](double t) { return std::abs(distance(a_set, a + t * v) - t) <= tol_touch; };
  if (member(q)) return q;
  // t v in Dis(A, a) implies s v in Dis(A, a) for 0 <= s <= t, so the
  // membership predicate is monotone and bisection applies.
  double lo = 0.0, hi = q;
  while (hi - lo > resolution * q) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? lo : hi) = mid;
  }
  return lo;
}

DistanceBundleSample dis_sample(const ClosedSet& a_set, const Vec& a, double q, int num_dirs,
                                double tol_touch, const DisSampleOptions& options) {
  const int n = a_set.ambient_dim();
  require_same_dim(a, Vec(n), "dis_sample");
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidInput("dis_sample: q must be positive");
  if (num_dirs < 2 * n) throw InvalidInput("dis_sample: num_dirs must be at least 2n");
  if (!(tol_touch > 0.0)) throw InvalidInput("dis_sample: tol_touch must be positive");
  if (distance(a_set, a) > tol_touch) throw PreconditionError("dis_sample: base point is not on the set");

  DistanceBundleSample out;
  out.base = a;
  out.q = q;
  out.q_frac = options.q_frac;
  out.tol_touch = tol_touch;
  out.tol_rank = options.tol_rank;
  out.resolution = options.resolution;

  std::vector<std::pair<Vec, bool>> dirs;
  for (const Vec& d : sphere_directions(n, num_dirs, options.seed)) dirs.emplace_back(d, false);
  if (options.use_hints) {
    for (const Vec& h : normal_hints(a_set, a)) {
      if (norm(h) == 0.0) continue;
      const Vec u = normalized(h);
      const bool seen = std::any_of(dirs.begin(), dirs.end(),
                                    [&](const auto& d) { return d.second && norm(d.first - u) < 1e-12; });
      if (!seen) dirs.emplace_back(u, true);
    }
  }

  std::vector<Vec> long_dirs;
  for (const auto& [v, hint] : dirs) {
    const double t = max_touch_radius(a_set, a, v, q, tol_touch, options.resolution);
    out.directions.push_back({v, t, hint});
    if (t >= options.q_frac * q) long_dirs.push_back(v);
  }
  out.est_dim = long_dirs.empty() ? 0 : rank_of(long_dirs, options.tol_rank);
  return out;
}

PolyhedralCone bundle_cone(const DistanceBundleSample& sample) {
  std::vector<Vec> gens;
  for (const BundleDirection& d : sample.directions) {
    if (d.t >= sample.q_frac * sample.q) gens.push_back(d.v);
  }
  return {sample.base.dim(), std::move(gens)};
}

double gamma_constant(const PolyhedralCone& c, const Subspace& u, const Vec& v) {
  const int n = c.ambient_dim();
  if (u.ambient_dim() != n || v.dim() != n) throw InvalidInput("gamma_constant: dimension mismatch");
  constexpr double kTol = 1e-9;

  for (const Vec& e : u.basis()) {
    for (const Vec& g : c.generators()) {
      if (std::abs(dot(e, g)) > kTol * norm(g)) {
        throw PreconditionError("gamma_constant: U is not contained in the polar of C");
      }
    }
  }
  if (c.dim() < n - u.dim()) throw PreconditionError("gamma_constant: dim C < n - dim U");
  if (!c.contains(v, kTol)) throw PreconditionError("gamma_constant: v does not belong to C");
  if (!relint_contains(c, v, kTol)) {
    throw UnboundedGamma("gamma_constant: v lies on the relative boundary of C");
  }
  if (c.dim() != n - u.dim()) {
    throw ContradictionError("gamma_constant: dim C = " + std::to_string(c.dim()) +
                             " differs from n - dim U = " + std::to_string(n - u.dim()));
  }

  // D is invariant under U, so it suffices to look at D n V, V = U^perp, a
  // pointed cone whose extreme rays carry the maximum of the ratio.
  std::vector<Vec> normals;
  for (const Vec& g : c.generators()) normals.push_back(normalized(g));
  for (const Vec& e : u.basis()) {
    normals.push_back(e);
    normals.push_back(-e);
  }
  const ConeGenerators dv = cone_from_inequalities(n, normals);
  if (!dv.lineality.empty()) throw UnboundedGamma("gamma_constant: D n U^perp contains a line");
  double gamma = 0.0;
  for (const Vec& d : dv.rays) {
    const double denom = -dot(d, v);
    if (denom <= 1e-12 * norm(v)) throw UnboundedGamma("gamma_constant: d . v = 0 for some d in D n U^perp");
    gamma = std::max(gamma, dist_to_subspace(d, u) / denom);
  }
  return gamma;
}

}  // namespace stratakit

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stratakit/bundle.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/sampling.hpp"

using namespace stratakit;

namespace {

ClosedSet unit_box(int n) {
  std::vector<Halfspace> hs;
  for (int i = 0; i < n; ++i) {
    hs.push_back({unit_vector(n, i), 1.0});
    hs.push_back({-unit_vector(n, i), 0.0});
  }
  return ClosedSet::hpolytope(n, hs);
}

// gamma by brute force over sampled unit directions of D.
double brute_gamma(const PolyhedralCone& d, const Subspace& u, const Vec& v, int samples, std::uint64_t seed) {
  double best = 0.0;
  for (const Vec& dir : sphere_directions(d.ambient_dim(), samples, seed)) {
    if (!d.contains(dir, 0.0)) continue;
    const double denom = -dot(dir, v);
    if (denom > 0) best = std::max(best, dist_to_subspace(dir, u) / denom);
  }
  for (const Vec& g : d.generators()) {
    const Vec dir = normalized(g);
    const double denom = -dot(dir, v);
    if (denom > 0) best = std::max(best, dist_to_subspace(dir, u) / denom);
  }
  return best;
}

}  // namespace

TEST_CASE("bundle membership examples") {
  const ClosedSet axis = ClosedSet::flat(AffineFlat(Vec{0, 0}, {Vec{1, 0}}));
  CHECK(dis_membership(axis, Vec{0, 0}, Vec{0, 3}, 1e-12));
  CHECK_FALSE(dis_membership(axis, Vec{0, 0}, Vec{1, 1}, 1e-12));
  CHECK_THROWS_AS(dis_membership(axis, Vec{0, 1}, Vec{0, 3}, 1e-12), PreconditionError);

  // The inward diameter of the unit circle ends on the circle itself, so the
  // ball of radius 2 about (-1, 0) is not a touching ball.
  const ClosedSet circle = ClosedSet::sphere(Vec{0, 0}, 1);
  const auto pts = oracle::circle_points(Vec{0, 0}, 1, 1e-4);
  CHECK(oracle::min_dist(pts, Vec{-1, 0}) < 1e-4);
  CHECK_FALSE(dis_membership(circle, Vec{1, 0}, Vec{-2, 0}, 1e-9));
  CHECK(dis_membership(circle, Vec{1, 0}, Vec{-1, 0}, 1e-9));
  CHECK(dis_membership(circle, Vec{1, 0}, Vec{5, 0}, 1e-9));
}

TEST_CASE("bundle sampling on the square and circle") {
  const ClosedSet sq = unit_box(2);
  const double tol = default_tol_touch(sq);
  const auto corner = dis_sample(sq, Vec{0, 0}, 1.0, 64, tol);
  CHECK(corner.est_dim == 2);
  for (const auto& d : corner.directions) {
    const bool third_quadrant = d.v[0] <= 1e-12 && d.v[1] <= 1e-12;
    if (third_quadrant) CHECK(d.t == 1.0);
    if (!third_quadrant) CHECK(d.t < 1e-3);
  }
  const auto edge = dis_sample(sq, Vec{0.5, 0}, 1.0, 64, tol);
  CHECK(edge.est_dim == 1);
  for (const auto& d : edge.directions) {
    if (d.t >= 0.5) CHECK(oracle::dist(d.v, Vec{0, -1}) < 1e-9);
  }

  const ClosedSet circle = ClosedSet::sphere(Vec{0, 0}, 1);
  const auto s = dis_sample(circle, Vec{1, 0}, 0.5, 64, default_tol_touch(circle));
  CHECK(s.est_dim == 1);
  for (const auto& d : s.directions) {
    // Closed form: t v touches at (1, 0) iff |(1, 0) + t v| - 1 = t or 1 - |.| = t.
    if (d.t >= 0.25) CHECK(std::abs(std::abs(d.v[0]) - 1.0) < 1e-12);
  }
}

TEST_CASE("bundle dimension equals the normal cone dimension on polytope faces") {
  Rng rng(12);
  std::vector<ClosedSet> polys{unit_box(3), unit_box(2)};
  for (int k = 0; k < 3; ++k) {
    std::vector<Vec> v;
    for (int i = 0; i < 9; ++i) v.push_back(rng.unit(3) * rng.uniform(0.5, 1.0));
    polys.push_back(ClosedSet::vpolytope(v));
  }
  for (const ClosedSet& a : polys) {
    const ConvexPolytope& p = *a.polytope();
    for (const Face& f : p.faces()) {
      Vec c(p.ambient_dim());
      for (int v : f.vertices) c += p.vertices()[v];
      c /= static_cast<double>(f.vertices.size());
      const auto s = dis_sample(a, c, 0.3, 4 * p.ambient_dim(), default_tol_touch(a));
      CHECK(s.est_dim == p.ambient_dim() - f.dim);
    }
  }
}

TEST_CASE("touching directions of a polytope form a convex set") {
  const ClosedSet cube = unit_box(3);
  const double tol = default_tol_touch(cube);
  for (const Vec& a : sample_points_on(cube, 40, 5)) {
    const auto s = dis_sample(cube, a, 0.5, 24, tol);
    std::vector<BundleDirection> touching;
    for (const auto& d : s.directions) {
      if (d.t > 0) touching.push_back(d);
    }
    for (std::size_t i = 0; i < touching.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const Vec sum = touching[i].v + touching[j].v;
        if (norm(sum) < 1e-9) continue;
        const double r = std::min(touching[i].t, touching[j].t) / 2;
        CHECK(dis_membership(cube, a, r * normalized(sum), 1e-8));
      }
    }
  }
}

TEST_CASE("two tangent balls at the contact point") {
  const ClosedSet two = ClosedSet::union_of({ClosedSet::ball(Vec{-1, 0}, 1), ClosedSet::ball(Vec{1, 0}, 1)});
  // Dense sweep of directions at q = 0.1: the vertical directions fail since
  // dist((0, t), A) = sqrt(1 + t^2) - 1 < t, every other one enters a ball.
  int touching = 0;
  for (int k = 0; k < 100000; ++k) {
    const double th = 2 * std::numbers::pi * k / 100000;
    const Vec v{0.1 * std::cos(th), 0.1 * std::sin(th)};
    const double d = std::min(oracle::dist(v, Vec{-1, 0}), oracle::dist(v, Vec{1, 0})) - 1;
    if (std::abs(std::max(d, 0.0) - 0.1) < 1e-9) ++touching;
  }
  CHECK(touching == 0);
  const auto s = dis_sample(two, Vec{0, 0}, 0.1, 128, default_tol_touch(two));
  CHECK(s.est_dim == 0);
}

TEST_CASE("gamma examples") {
  CHECK(gamma_constant(PolyhedralCone(2, {Vec{1, 0}}), Subspace(2, {Vec{0, 1}}), Vec{1, 0}) ==
        doctest::Approx(1));
  CHECK(gamma_constant(PolyhedralCone(3, {Vec{0, 0, 1}}), Subspace(3, {Vec{1, 0, 0}, Vec{0, 1, 0}}),
                       Vec{0, 0, 1}) == doctest::Approx(1));
  const PolyhedralCone wedge(2, {Vec{1, 0}, Vec{1, 1}});
  const double g = gamma_constant(wedge, Subspace::zero(2), Vec{2, 1});
  CHECK(g == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(brute_gamma(polar(wedge), Subspace::zero(2), Vec{2, 1}, 100000, 1) - g) <= 1e-5 * g);
}

TEST_CASE("gamma hypotheses") {
  const PolyhedralCone quad(2, {Vec{1, 0}, Vec{0, 1}});
  CHECK_THROWS_AS(gamma_constant(quad, Subspace::zero(2), Vec{1, 0}), UnboundedGamma);
  CHECK_THROWS_AS(gamma_constant(quad, Subspace::zero(2), Vec{-1, 1}), PreconditionError);
  CHECK_THROWS_AS(gamma_constant(quad, Subspace(2, {Vec{1, 0}}), Vec{1, 1}), PreconditionError);
  const PolyhedralCone ray(2, {Vec{1, 0}});
  CHECK_THROWS_AS(gamma_constant(ray, Subspace::zero(2), Vec{1, 0}), PreconditionError);
  CHECK(gamma_constant(PolyhedralCone::whole(2), Subspace::zero(2), Vec{0, 0}) == 0.0);
}

TEST_CASE("cone control certificate and corollary on random instances") {
  Rng rng(31);
  int accepted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3;
    const int m = rng.uniform_int(0, 1);
    std::vector<Vec> ubasis;
    if (m == 1) ubasis.push_back(rng.unit(n));
    const Subspace u = Subspace::spanned_by(n, ubasis);
    const Subspace vsp = u.orthogonal_complement();
    std::vector<Vec> gens;
    for (int i = 0; i < rng.uniform_int(n - m, 5); ++i) {
      Vec g(n);
      for (const Vec& e : vsp.basis()) g += rng.normal() * e;
      gens.push_back(g);
    }
    const PolyhedralCone c(n, gens);
    if (c.dim() != n - m) continue;
    Vec v(n);
    for (const Vec& g : c.generators()) v += rng.uniform(0.2, 1.0) * normalized(g);
    if (!relint_contains(c, v, 1e-9)) continue;
    double gamma = 0;
    try {
      gamma = gamma_constant(c, u, v);
    } catch (const UnboundedGamma&) {
      continue;
    }
    ++accepted;
    const PolyhedralCone d = polar(c);
    for (int k = 0; k < 10000; ++k) {
      Vec dd(n);
      for (const Vec& g : d.generators()) dd += -std::log(rng.uniform(1e-12, 1.0)) * g;
      CHECK(dist_to_subspace(dd, u) <= -gamma * dot(dd, v) + 1e-9 * std::max(1.0, norm(dd)));
      const Vec b = rng.unit(n) * rng.uniform(0, 3);
      CHECK(dist_to_subspace(b, u) <= -gamma * dot(b, v) + (1 + gamma * norm(v)) * d.distance(b) + 1e-8);
    }
  }
  CHECK(accepted >= 30);
}

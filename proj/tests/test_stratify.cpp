#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/sampling.hpp"
#include "stratakit/stratify.hpp"

using namespace stratakit;

namespace {

ClosedSet box(const Vec& lo, const Vec& hi) {
  const int n = lo.dim();
  std::vector<Halfspace> hs;
  for (int i = 0; i < n; ++i) {
    hs.push_back({unit_vector(n, i), hi[i]});
    hs.push_back({-unit_vector(n, i), -lo[i]});
  }
  return ClosedSet::hpolytope(n, hs);
}

ClosedSet random_polytope(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Halfspace> hs;
  for (int k = 0; k < 10; ++k) {
    const Vec u = rng.unit(3);
    hs.push_back({u, rng.uniform(0.5, 1.0)});
  }
  for (int i = 0; i < 3; ++i) {
    hs.push_back({unit_vector(3, i), 1.2});
    hs.push_back({-unit_vector(3, i), 1.2});
  }
  return ClosedSet::hpolytope(3, hs);
}

}  // namespace

TEST_CASE("exact strata of the cube") {
  const ClosedSet cube = box(Vec{0, 0, 0}, Vec{1, 1, 1});
  const StratumReport r0 = stratify_exact_polytope(cube, 0);
  REQUIRE(r0.exact_faces);
  CHECK(r0.exact_faces->size() == 8);
  const StratumReport r2 = stratify_exact_polytope(cube, 2);
  CHECK(r2.exact_faces->size() == 8 + 12 + 6);
  const StratumReport r3 = stratify_exact_polytope(cube, 3);
  CHECK(r3.exact_faces->size() == 27);
  CHECK_THROWS_AS(stratify_exact_polytope(ClosedSet::sphere(Vec{0, 0}, 1), 0), UnsupportedInput);
  CHECK_THROWS_AS(stratify_exact_polytope(cube, 4), InvalidInput);
}

TEST_CASE("square probes: only the vertex is in B_0") {
  const ClosedSet sq = box(Vec{0, 0}, Vec{1, 1});
  const std::vector<Vec> probes = {Vec{0, 0}, Vec{0.5, 0}};
  const StratumReport r = stratify_sampled(sq, 0, probes);
  CHECK(r.classified[0].in_stratum);
  CHECK(r.classified[0].est_dim == 2);
  CHECK_FALSE(r.classified[1].in_stratum);
  CHECK(r.classified[1].est_dim == 1);
  CHECK_THROWS_AS(stratify_sampled(sq, 0, std::vector<Vec>{Vec{0.5, -1e-3}}), PreconditionError);
}

TEST_CASE("circle probes lie in B_1 and not in B_0") {
  const ClosedSet circle = ClosedSet::sphere(Vec{0, 0}, 1.0);
  const std::vector<Vec> probes = default_probes(circle, 40, 2);
  const StratumReport r1 = stratify_sampled(circle, 1, probes);
  const StratumReport r0 = stratify_sampled(circle, 0, probes);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    CHECK(r1.classified[i].est_dim == 1);
    CHECK(r1.classified[i].in_stratum);
    CHECK_FALSE(r0.classified[i].in_stratum);
  }
}

TEST_CASE("tangent balls: the contact point has a zero-dimensional bundle") {
  const ClosedSet two = ClosedSet::union_of({ClosedSet::ball(Vec{-1, 0}, 1.0), ClosedSet::ball(Vec{1, 0}, 1.0)});
  StratifyOptions o;
  o.q_grid = {0.1};
  const StratumReport r = stratify_sampled(two, 0, std::vector<Vec>{Vec{0, 0}}, o);
  CHECK(r.classified[0].est_dim == 0);
  CHECK_FALSE(stratify_sampled(two, 1, std::vector<Vec>{Vec{0, 0}}, o).classified[0].in_stratum);
  CHECK(stratify_sampled(two, 2, std::vector<Vec>{Vec{0, 0}}, o).classified[0].in_stratum);
}

TEST_CASE("sampled strata agree with the exact skeleton on random polytopes") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ClosedSet p = random_polytope(seed);
    const std::vector<Vec> probes = polytope_probes(*p.polytope(), 200, seed, true);
    const std::vector<ClassifiedPoint> dims = estimate_bundle_dims(p, probes);
    for (int m = 0; m <= 3; ++m) {
      const StratumReport exact = stratify_exact_polytope(p, m, probes);
      const StratumReport sampled = stratum_from_dims(p, m, dims);
      for (std::size_t i = 0; i < probes.size(); ++i) {
        CHECK(exact.classified[i].in_stratum == sampled.classified[i].in_stratum);
      }
      // every exact in-stratum probe lies on a listed face
      for (const ClassifiedPoint& c : exact.classified) {
        if (!c.in_stratum) continue;
        double best = 1e9;
        for (const FaceDescriptor& f : *exact.exact_faces) {
          const ClosedSet face = ClosedSet::vpolytope(f.vertices);
          best = std::min(best, distance(face, c.point));
        }
        CHECK(best <= 1e-9);
      }
    }
  }
}

// Random directions only find full-dimensional bundles; lower-dimensional
// normal cones have measure zero on the sphere and need the hints.
TEST_CASE("cube without normal hints") {
  const ClosedSet cube = box(Vec{0, 0, 0}, Vec{1, 1, 1});
  const std::vector<Vec> probes = polytope_probes(*cube.polytope(), 60, 4);
  StratifyOptions o;
  o.use_hints = false;
  o.num_dirs = 2000;
  const std::vector<ClassifiedPoint> dims = estimate_bundle_dims(cube, probes, o);
  for (const ClassifiedPoint& c : dims) {
    const int exact = cube.polytope()->normal_cone_dim(c.point);
    if (exact == 3) {
      CHECK(c.est_dim == 3);
    } else {
      CHECK(c.est_dim <= exact);
    }
  }
}

TEST_CASE("stratum monotonicity") {
  const ClosedSet two = ClosedSet::union_of({ClosedSet::ball(Vec{-1, 0}, 1.0), ClosedSet::sphere(Vec{2, 0}, 0.5)});
  const std::vector<Vec> probes = default_probes(two, 50, 9);
  const std::vector<ClassifiedPoint> dims = estimate_bundle_dims(two, probes);
  for (int m = 0; m < 2; ++m) {
    const StratumReport lo = stratum_from_dims(two, m, dims);
    const StratumReport hi = stratum_from_dims(two, m + 1, dims);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (lo.classified[i].in_stratum) CHECK(hi.classified[i].in_stratum);
    }
  }
}

TEST_CASE("polytope probes") {
  const ClosedSet cube = box(Vec{0, 0, 0}, Vec{1, 1, 1});
  const std::vector<Vec> probes = polytope_probes(*cube.polytope(), 100, 1);
  CHECK(probes.size() == 100);
  for (const Vec& x : probes) CHECK(distance(cube, x) <= 1e-12);
  int vertices = 0;
  for (const Vec& x : probes) vertices += cube.polytope()->normal_cone_dim(x) == 3;
  CHECK(vertices == 8);
}

TEST_CASE("projection cover of a point") {
  const ClosedSet origin = ClosedSet::point_cloud({Vec{0, 0}});
  const std::vector<AffineFlat> lines = {AffineFlat(Vec{0, 0.1}, {Vec{1, 0}}), AffineFlat(Vec{0.05, 0}, {Vec{0, 1}})};
  const std::vector<CoverPair> pairs = projection_cover(origin, 1, 4, lines, 200);
  CHECK_FALSE(pairs.empty());
  for (const CoverPair& p : pairs) {
    CHECK(norm(p.image) == 0.0);
    CHECK(norm(p.source) < 0.25);
  }
}

TEST_CASE("projection cover of the square's vertices") {
  const ClosedSet sq = box(Vec{0, 0}, Vec{1, 1});
  const Box b{Vec{-0.5, -0.5}, Vec{1.5, 1.5}};
  const std::vector<AffineFlat> pts = random_planes(2, 0, 4000, b, 3);
  const std::vector<CoverPair> pairs = projection_cover(sq, 0, 4, pts, 1);
  std::set<std::pair<double, double>> images;
  for (const CoverPair& p : pairs) {
    double best = 1e9;
    for (const Vec& v : sq.polytope()->vertices()) best = std::min(best, oracle::dist(v, p.image));
    CHECK(best <= 1e-12);
    images.insert({p.image[0], p.image[1]});
  }
  CHECK(images.size() == 4);
}

TEST_CASE("projection cover of the x-axis fills it") {
  const ClosedSet axis = ClosedSet::flat(AffineFlat(Vec{0, 0}, {Vec{1, 0}}));
  const std::vector<AffineFlat> planes = {AffineFlat(Vec{0, 0.1}, {Vec{1, 0}})};
  const std::vector<CoverPair> pairs = projection_cover(axis, 1, 4, planes, 500);
  CHECK(pairs.size() == 500);
  std::vector<double> xs;
  for (const CoverPair& p : pairs) {
    CHECK(p.image[1] == 0.0);
    CHECK(p.image[0] == doctest::Approx(p.source[0]));
    xs.push_back(p.image[0]);
  }
  std::sort(xs.begin(), xs.end());
  double gap = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) gap = std::max(gap, xs[k] - xs[k - 1]);
  CHECK(gap < 0.05);
}

TEST_CASE("projection cover images are in the stratum") {
  const ClosedSet circle = ClosedSet::sphere(Vec{0, 0}, 1.0);
  const Box b{Vec{-1.5, -1.5}, Vec{1.5, 1.5}};
  const std::vector<AffineFlat> lines = random_planes(2, 1, 20, b, 8);
  const std::vector<CoverPair> pairs = projection_cover(circle, 1, 4, lines, 100);
  CHECK(pairs.size() > 50);
  std::vector<Vec> images;
  for (const CoverPair& p : pairs) {
    images.push_back(p.image);
    CHECK(std::abs(norm(p.image) - 1.0) <= 1e-12);
    const double d = norm(p.source - p.image);
    CHECK(d > 0.0);
    CHECK(d < 0.25);
  }
  const StratumReport r = stratify_sampled(circle, 1, images);
  CHECK(r.in_stratum_count() == images.size());
  // i = 1 is empty: a unit vector is never in the relative interior of the unit ball
  CHECK(projection_cover(circle, 1, 1, lines, 100).empty());
}

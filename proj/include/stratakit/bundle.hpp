#pragma once

// Distance bundle Dis(A, a): membership, sampling by maximal touching radius,
// and the cone-control constant of a polyhedral cone.

#include <cstdint>
#include <vector>

#include "stratakit/closed_set.hpp"
#include "stratakit/cone.hpp"

namespace stratakit {

/// True iff |dist(A, a + v) - |v|| <= tol_touch. Throws PreconditionError
/// when a is farther than tol_touch from A.
bool dis_membership(const ClosedSet& a_set, const Vec& a, const Vec& v, double tol_touch);

struct BundleDirection {
  Vec v;               // unit direction
  double t = 0.0;      // largest radius in [0, q] with t * v in Dis(A, a)
  bool hint = false;   // came from the set's own normal data rather than sampling
};

struct DistanceBundleSample {
  Vec base;
  std::vector<BundleDirection> directions;
  double q = 0.0;
  double q_frac = 0.5;
  double tol_touch = 0.0;
  double tol_rank = 0.0;
  double resolution = 0.0;  // relative bisection resolution
  int est_dim = 0;
};

struct DisSampleOptions {
  double q_frac = 0.5;
  // Relative singular-value threshold for est_dim. Looser than the kernel
  // default: directions that graze the boundary of the normal cone pass the
  // touch test for small radii and would otherwise add spurious rank.
  double tol_rank = 1e-4;
  double resolution = 1e-6;
  std::uint64_t seed = 0;
  bool use_hints = true;
};

/// Default touch tolerance for a scene: 1e-12 times max(1, diameter).
double default_tol_touch(const ClosedSet& a_set);

/// For every sampled unit direction v (low-discrepancy directions plus the
/// representation's normal hints at a) finds the largest t <= q with
/// t * v in Dis(A, a) by bisection. est_dim is the rank of the directions
/// with t >= q_frac * q.
DistanceBundleSample dis_sample(const ClosedSet& a_set, const Vec& a, double q, int num_dirs,
                                double tol_touch, const DisSampleOptions& options = {});

/// Largest t in [0, q] with t * v in Dis(A, a), assuming v is a unit vector.
double max_touch_radius(const ClosedSet& a_set, const Vec& a, const Vec& v, double q,
                        double tol_touch, double resolution);

/// Cone spanned by the directions reaching q_frac * q.
PolyhedralCone bundle_cone(const DistanceBundleSample& sample);

/// Least gamma >= 0 with dist(d, U) <= -gamma d . v for every d in polar(C).
/// Throws PreconditionError unless U lies in polar(C), dim C >= n - dim U and
/// v lies in C; UnboundedGamma when v is on the relative boundary of C;
/// ContradictionError if dim C != n - dim U after those checks.
double gamma_constant(const PolyhedralCone& c, const Subspace& u, const Vec& v);

}  // namespace stratakit

#pragma once

// The strata B_m = {a in A : dim Dis(A, a) >= n - m}: exact for convex
// polytopes, sampled for general sets, and the covering of B by nearest
// point projections of shell points on m-planes.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratakit/closed_set.hpp"
#include "stratakit/cover.hpp"

namespace stratakit {

struct ClassifiedPoint {
  Vec point;
  int est_dim = 0;
  bool in_stratum = false;
  double q_used = 0.0;  // grid value attaining est_dim
};

struct FaceDescriptor {
  int dim = 0;
  std::vector<Vec> vertices;
  AffineFlat hull;
};

struct StratumReport {
  int m = 0;
  int n = 0;
  std::vector<ClassifiedPoint> classified;
  std::optional<std::vector<FaceDescriptor>> exact_faces;
  std::optional<PatchCover> coverage;
  std::map<std::string, double> params;
  std::vector<std::string> notes;

  std::size_t in_stratum_count() const;
};

/// The m-skeleton of a convex polytope. Probes, if given, are classified by
/// the exact normal cone dimension.
StratumReport stratify_exact_polytope(const ClosedSet& a_set, int m, std::span<const Vec> probes = {});

struct StratifyOptions {
  std::vector<double> q_grid;  // default_q_grid when empty
  int num_dirs = 0;            // 8 n when nonpositive
  double tol_probe = -1.0;     // 1e-9 max(1, diameter) when negative
  double tol_touch = -1.0;     // default_tol_touch when nonpositive
  double q_frac = 0.5;
  double tol_rank = 1e-4;
  bool use_hints = true;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Half the smallest distance between nonadjacent faces for polytopes (a
/// quarter of the diameter for simplices); diameter / 16, / 8, / 4 otherwise.
std::vector<double> default_q_grid(const ClosedSet& a_set);

/// Bundle dimension estimate per probe: the maximum of dis_sample's est_dim
/// over the q grid. Throws PreconditionError for probes off the set.
std::vector<ClassifiedPoint> estimate_bundle_dims(const ClosedSet& a_set, std::span<const Vec> probes,
                                                  const StratifyOptions& options = {});

/// Thresholds the estimates at n - m.
StratumReport stratum_from_dims(const ClosedSet& a_set, int m, std::vector<ClassifiedPoint> dims,
                                const StratifyOptions& options = {});

StratumReport stratify_sampled(const ClosedSet& a_set, int m, std::span<const Vec> probes,
                               const StratifyOptions& options = {});

/// Probe points for a polytope: every vertex once, then points in the
/// relative interior of the remaining faces in turn (random convex
/// combinations of the face's vertices), up to `count` points in total.
/// The polytope itself is included only when `include_interior`.
std::vector<Vec> polytope_probes(const ConvexPolytope& p, int count, std::uint64_t seed,
                                 bool include_interior = false);

/// Default probes for any set: polytope_probes for polytopes, otherwise
/// sample_points_on (plus sphere axis points and point-cloud points).
std::vector<Vec> default_probes(const ClosedSet& a_set, int count, std::uint64_t seed);

/// `count` m-planes with uniform base points in `box` and Haar-random
/// orthonormal directions.
std::vector<AffineFlat> random_planes(int n, int m, int count, const Box& box, std::uint64_t seed);

struct CoverPair {
  Vec source;
  Vec image;
};

struct ProjectionCoverOptions {
  int num_dirs = 0;  // 8 n when nonpositive
  double tol_rank = 1e-4;
  double tol_touch = -1.0;
  bool use_hints = true;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Shell points x on the planes (m-planes sampled `shell_samples` times in a
/// cube around the scene; 0-planes are their single point) that belong to
/// W_i: xi(x) is defined, 0 < dist(x, A) < 1/i, dim Dis(A, xi(x)) >= n - m,
/// and the direction of x - xi(x) scaled to length 1/i lies in the relative
/// interior of Dis(A, xi(x)) n B(0, 1). Returns (x, xi(x)) pairs.
std::vector<CoverPair> projection_cover(const ClosedSet& a_set, int m, int i, std::span<const AffineFlat> planes,
                                        int shell_samples, const ProjectionCoverOptions& options = {});

}  // namespace stratakit

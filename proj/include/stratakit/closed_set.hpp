#pragma once

// Closed subsets of R^n with exact distance, nearest-point-set and
// nearest-point-projection oracles.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stratakit/linalg.hpp"
#include "stratakit/polytope.hpp"

namespace stratakit {

class ClosedSet;

struct HPolytope {
  std::vector<Halfspace> halfspaces;
  std::shared_ptr<const ConvexPolytope> body;
};

struct VPolytope {
  std::vector<Vec> vertices;
  std::shared_ptr<const ConvexPolytope> body;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Sphere {
  Vec center;
  double radius = 1.0;
};

struct Flat {
  AffineFlat flat;
};

struct PointCloud {
  std::vector<Vec> points;
};

struct Union {
  std::vector<ClosedSet> parts;
};

/// Immutable tagged union of the supported closed-set primitives. Built only
/// through the validating factories below.
class ClosedSet {
 public:
  using Variant = std::variant<HPolytope, VPolytope, Ball, Sphere, Flat, PointCloud, Union>;

  /// Throws InvalidInput if the halfspaces describe an empty or unbounded set.
  static ClosedSet hpolytope(int n, std::vector<Halfspace> halfspaces);
  static ClosedSet vpolytope(std::vector<Vec> vertices);
  static ClosedSet ball(Vec center, double radius);
  static ClosedSet sphere(Vec center, double radius);
  static ClosedSet flat(AffineFlat flat);
  static ClosedSet point_cloud(std::vector<Vec> points);
  static ClosedSet union_of(std::vector<ClosedSet> parts);

  int ambient_dim() const { return n_; }
  const Variant& variant() const { return *v_; }
  /// Convex primitives: polytopes, balls, flats and single points.
  bool is_convex() const;
  /// The polytope body for H/V polytopes, nullptr otherwise.
  const ConvexPolytope* polytope() const;
  /// Short variant name as used by the scene format ("hpolytope", ...).
  const char* kind() const;

 private:
  ClosedSet(int n, Variant v) : n_(n), v_(std::make_shared<const Variant>(std::move(v))) {}
  int n_ = 0;
  std::shared_ptr<const Variant> v_;
};

struct ProjectionResult {
  double distance = 0.0;
  std::vector<Vec> nearest;  // representative nearest points
  double diameter_bound = 0.0;
  bool unique = true;
};

inline constexpr double kTolDist = 1e-10;

double distance(const ClosedSet& a, const Vec& x);

/// All minimizers up to the representation's resolution. Union parts whose
/// distance is within kTolDist of the minimum all contribute.
ProjectionResult nearest_point_set(const ClosedSet& a, const Vec& x, double tol_unique);

/// The unique nearest point, or nullopt outside the domain of the projection.
std::optional<Vec> xi(const ClosedSet& a, const Vec& x, double tol_unique);

struct Box {
  Vec lo;
  Vec hi;
};

/// Axis-aligned bounding box. Throws UnsupportedInput for unbounded flats.
Box bounding_box(const ClosedSet& a);
/// Diagonal of the bounding box; 1 for unbounded sets.
double scene_diameter(const ClosedSet& a);
/// 1e-8 times the scene diameter.
double default_tol_unique(const ClosedSet& a);

/// Exact directions of the normal cone at a point of the set, where the
/// representation knows them: facet normals of polytopes, radial directions
/// of balls and spheres, the orthogonal complement of flats.
std::vector<Vec> normal_hints(const ClosedSet& a, const Vec& point, double tol = 1e-9);

/// Points of the set whose covering radius is at most `step`: grid points of
/// spacing step / sqrt(n) over the inflated bounding box mapped to their
/// nearest points, plus polytope vertices and sphere axis points.
std::vector<Vec> cover_points(const ClosedSet& a, double step);

/// `count` points on the set: nearest points of uniform samples from the
/// bounding box inflated by `margin` (a quarter of the diameter if negative).
/// Flats of positive dimension are sampled in the cube of half-width `margin`
/// (1 if negative) around their base point in local coordinates.
std::vector<Vec> sample_points_on(const ClosedSet& a, int count, std::uint64_t seed,
                                  double margin = -1.0);

struct HausdorffEstimate {
  double value = 0.0;
  bool exact = true;
  double step = 0.0;  // covering radius of the sampling used (0 when exact)
};

/// Hausdorff distance between two bounded sets. Exact for polytope pairs and
/// finite point sets; otherwise sampled with covering radius `step`
/// (diameter / 64 when nonpositive). Throws UnsupportedInput for unbounded
/// sets.
HausdorffEstimate hausdorff_distance_sets(const ClosedSet& a, const ClosedSet& b, double step = 0.0);

}  // namespace stratakit

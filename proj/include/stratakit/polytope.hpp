#pragma once

#include <span>
#include <vector>

#include "stratakit/cone.hpp"
#include "stratakit/linalg.hpp"

namespace stratakit {

/// Closed halfspace {x : normal . x <= offset}.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// A face of a convex polytope. `vertices` and `facets` index into the
/// owning polytope; the polytope itself appears as the face of largest
/// dimension.
struct Face {
  int dim = 0;
  std::vector<int> vertices;
  std::vector<int> facets;
  AffineFlat hull;
};

/// Bounded nonempty convex polytope with both representations and the full
/// face lattice. Lower-dimensional polytopes (segments in the plane, a
/// triangle in R^3) are supported: facets are then relative to the affine
/// hull, which is described by `equalities`.
class ConvexPolytope {
 public:
  /// Convex hull of the given points (duplicates and interior points are
  /// discarded).
  static ConvexPolytope from_vertices(std::span<const Vec> points);
  /// Intersection of halfspaces. Throws InvalidInput when the intersection is
  /// empty or unbounded.
  static ConvexPolytope from_halfspaces(int n, std::span<const Halfspace> halfspaces);

  int ambient_dim() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  /// Unit-normal facet inequalities, relative to the affine hull.
  const std::vector<Halfspace>& facets() const { return facets_; }
  /// Orthonormal normals of the affine hull: n . x = n . vertices()[0].
  const std::vector<Vec>& equalities() const { return equalities_; }
  /// All nonempty faces ordered by dimension, vertices first.
  const std::vector<Face>& faces() const { return faces_; }

  bool contains(const Vec& x, double tol = 1e-10) const;

  struct Projection {
    Vec point;
    double distance = 0.0;
    int face = -1;  // index into faces()
  };
  /// Exact nearest point by face enumeration: project onto the affine hull
  /// of every face, keep the feasible candidates, take the closest.
  Projection project(const Vec& x) const;

  /// Indices of facets with normal . x >= offset - tol.
  std::vector<int> active_facets(const Vec& x, double tol = 1e-9) const;
  /// Generators of the normal cone at a point of the polytope.
  std::vector<Vec> normal_cone_generators(const Vec& x, double tol = 1e-9) const;
  /// Dimension of the normal cone at x, i.e. n minus the dimension of the
  /// smallest face containing x.
  int normal_cone_dim(const Vec& x, double tol = 1e-9) const;
  /// Index of the smallest face containing x (x must lie on the polytope).
  int minimal_face(const Vec& x, double tol = 1e-9) const;

  double diameter() const;

 private:
  ConvexPolytope() = default;
  void build_faces();

  int n_ = 0;
  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Vec> equalities_;
  std::vector<Face> faces_;
};

/// Smallest distance between two faces of the polytope that share no
/// vertex; infinity when every pair of faces is adjacent (simplices).
double min_nonadjacent_face_distance(const ConvexPolytope& p);

}  // namespace stratakit

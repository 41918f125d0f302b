#pragma once

#include <span>
#include <vector>

#include "stratakit/linalg.hpp"

namespace stratakit {

/// Generator form of a polyhedral cone: L + cone(rays) with L spanned by an
/// orthonormal `lineality` basis and every ray a unit vector orthogonal to L.
struct ConeGenerators {
  std::vector<Vec> lineality;
  std::vector<Vec> rays;
};

/// Double-description conversion. Returns the generators of
/// {x in R^n : a . x <= 0 for every a in normals}.
ConeGenerators cone_from_inequalities(int n, std::span<const Vec> normals);

/// Convex cone given by generating rays (not necessarily unit, zero vectors
/// ignored). The polar's generators are computed once at construction and
/// double as the inequality form of the cone itself.
class PolyhedralCone {
 public:
  PolyhedralCone(int ambient_dim, std::vector<Vec> generators);
  static PolyhedralCone zero(int ambient_dim) { return {ambient_dim, {}}; }
  static PolyhedralCone whole(int ambient_dim);

  int ambient_dim() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<Vec>& generators() const { return generators_; }

  /// Normals h with C = {x in span C : h . x <= 0}. None of them vanishes
  /// identically on span C.
  const std::vector<Vec>& inequalities() const { return polar_.rays; }
  /// Orthonormal basis of the orthogonal complement of span C.
  const std::vector<Vec>& equalities() const { return polar_.lineality; }
  /// Orthonormal basis of span C (the affine hull, as C contains 0).
  const std::vector<Vec>& span_basis() const { return span_basis_; }

  bool contains(const Vec& v, double tol = 1e-9) const;

  /// Nearest point of the cone to b (exact active-set NNLS on generators).
  Vec project(const Vec& b) const;
  double distance(const Vec& b) const { return norm(b - project(b)); }

 private:
  int n_;
  int dim_;
  std::vector<Vec> generators_;
  std::vector<Vec> span_basis_;
  ConeGenerators polar_;
};

/// D = {d : d . c <= 0 for c in C}, as a generator representation
/// (rays plus both signs of every lineality vector).
PolyhedralCone polar(const PolyhedralCone& c);

/// Tan = polar of the normal cone.
inline PolyhedralCone tangent_from_normal(const PolyhedralCone& normal) { return polar(normal); }

/// True iff v lies in span C within tol * max(1, |v|) and every inequality of
/// C is strictly negative at v by a margin exceeding tol * |v|. The origin is
/// in the relative interior exactly when C is a linear subspace.
bool relint_contains(const PolyhedralCone& c, const Vec& v, double tol);

/// Nonnegative least squares min |G mu - b|, mu >= 0 (Lawson-Hanson).
/// Returns G mu.
Vec nnls_combination(std::span<const Vec> generators, const Vec& b);

}  // namespace stratakit

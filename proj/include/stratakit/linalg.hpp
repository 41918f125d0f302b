#pragma once

// Small dense linear algebra in R^n for n <= 8: points, orthonormal bases,
// affine flats, subspaces, numerical rank and finite Hausdorff distances.

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

namespace stratakit {

inline constexpr int kMaxDim = 8;
// Storage capacity; one more than kMaxDim so homogenized coordinates fit.
inline constexpr int kVecCapacity = kMaxDim + 1;

/// A point or direction of R^n, stored inline. Ambient dimensions are capped
/// at kMaxDim; the extra slot is only used for homogenized coordinates.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim);
  Vec(std::initializer_list<double> coords);
  static Vec from(std::span<const double> coords);

  int dim() const { return n_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(n_)}; }
  std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + n_}; }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);
  Vec& operator/=(double s);

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a /= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  friend bool operator==(const Vec& a, const Vec& b);

 private:
  std::array<double, kVecCapacity> c_{};
  int n_ = 0;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double point_distance(const Vec& a, const Vec& b) { return norm(a - b); }
bool all_finite(const Vec& a);

/// Unit vector e_i of R^n.
Vec unit_vector(int n, int i);

/// a / |a|; the zero vector is returned unchanged.
Vec normalized(const Vec& a);

/// Throws InvalidInput when a coordinate is NaN or infinite or the
/// dimension is outside [1, kMaxDim]. `what` names the argument.
void require_valid(const Vec& a, const char* what);
void require_same_dim(const Vec& a, const Vec& b, const char* what);

/// Number of singular values of the stacked matrix of the normalized inputs
/// exceeding tol_rank * sigma_max (tol_rank alone when every singular value
/// is zero). Rescaling any input by a nonzero factor leaves the rank alone.
int rank_of(std::span<const Vec> vectors, double tol_rank);

/// Orthonormal basis of span(vectors) by modified Gram-Schmidt with one
/// re-orthogonalization pass. Vectors whose residual falls below
/// tol * max|v| are treated as dependent and dropped.
std::vector<Vec> orthonormalize(std::span<const Vec> vectors, double tol = 1e-10);

inline constexpr double kTolOrtho = 1e-12;

/// Linear subspace of R^n given by an orthonormal basis.
class Subspace {
 public:
  /// Validates orthonormality to kTolOrtho.
  Subspace(int ambient_dim, std::vector<Vec> orthonormal_basis);
  static Subspace spanned_by(int ambient_dim, std::span<const Vec> vectors);
  static Subspace zero(int ambient_dim) { return Subspace(ambient_dim, {}); }
  static Subspace whole(int ambient_dim);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }

  Vec project(const Vec& x) const;
  Subspace orthogonal_complement() const;

 private:
  int n_;
  std::vector<Vec> basis_;
};

/// Affine subspace base + span(basis) with an orthonormal basis.
class AffineFlat {
 public:
  AffineFlat(Vec base, std::vector<Vec> orthonormal_basis);
  static AffineFlat spanned_by(const Vec& base, std::span<const Vec> directions);
  static AffineFlat point(const Vec& p) { return AffineFlat(p, {}); }

  int ambient_dim() const { return base_.dim(); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const Vec& base() const { return base_; }
  const std::vector<Vec>& basis() const { return basis_; }
  Subspace direction() const { return Subspace(base_.dim(), basis_); }

  /// Coordinates of x - base in the flat's basis.
  std::vector<double> local_coords(const Vec& x) const;
  Vec from_local(std::span<const double> t) const;

 private:
  Vec base_;
  std::vector<Vec> basis_;
};

/// Nearest point of the flat to x.
Vec project_onto_flat(const Vec& x, const AffineFlat& flat);
double dist_to_subspace(const Vec& x, const Subspace& u);

/// Hausdorff distance between two nonempty finite point sets.
double hausdorff_distance(std::span<const Vec> a, std::span<const Vec> b);

}  // namespace stratakit

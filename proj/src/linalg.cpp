#include "stratakit/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>

#include "stratakit/errors.hpp"

namespace stratakit {

Vec::Vec(int dim) : n_(dim) {
  if (dim < 0 || dim > kVecCapacity) {
    throw InvalidInput("dimension " + std::to_string(dim) + " outside [0, " + std::to_string(kVecCapacity) + "]");
  }
}

Vec::Vec(std::initializer_list<double> coords) : Vec(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Vec Vec::from(std::span<const double> coords) {
  Vec v(static_cast<int>(coords.size()));
  std::copy(coords.begin(), coords.end(), v.c_.begin());
  return v;
}

Vec& Vec::operator+=(const Vec& o) {
  for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < n_; ++i) c_[i] *= s;
  return *this;
}

Vec& Vec::operator/=(double s) {
  for (int i = 0; i < n_; ++i) c_[i] /= s;
  return *this;
}

bool operator==(const Vec& a, const Vec& b) {
  if (a.n_ != b.n_) return false;
  for (int i = 0; i < a.n_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return dot(a, a); }

bool all_finite(const Vec& a) {
  for (double c : a.coords()) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

Vec unit_vector(int n, int i) {
  Vec e(n);
  e[i] = 1.0;
  return e;
}

Vec normalized(const Vec& a) {
  const double len = norm(a);
  return len > 0.0 ? a / len : a;
}

void require_valid(const Vec& a, const char* what) {
  if (a.dim() < 1 || a.dim() > kMaxDim) {
    throw InvalidInput(std::string(what) + ": dimension must be in [1, 8]");
  }
  if (!all_finite(a)) throw InvalidInput(std::string(what) + ": non-finite coordinate");
}

void require_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()) + ")");
  }
}

int rank_of(std::span<const Vec> vectors, double tol_rank) {
  if (!(tol_rank > 0.0)) throw InvalidInput("rank_of: tol_rank must be positive");
  if (vectors.empty()) return 0;
  const int n = vectors.front().dim();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()), n);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    const Vec& v = vectors[r];
    if (v.dim() != n) throw InvalidInput("rank_of: dimension mismatch");
    if (!all_finite(v)) throw InvalidInput("rank_of: non-finite coordinate");
    // Rows are scaled to unit length so the rank does not depend on the
    // relative lengths of the inputs; zero rows stay zero.
    const double len = norm(v);
    for (int c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), c) = len > 0.0 ? v[c] / len : 0.0;
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol_rank * (largest > 0.0 ? largest : 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  return rank;
}

std::vector<Vec> orthonormalize(std::span<const Vec> vectors, double tol) {
  std::vector<Vec> basis;
  double scale = 0.0;
  for (const Vec& v : vectors) scale = std::max(scale, norm(v));
  if (scale == 0.0) return basis;
  for (const Vec& v : vectors) {
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) w -= dot(w, b) * b;
    }
    const double len = norm(w);
    if (len > tol * scale) basis.push_back(w / len);
    if (static_cast<int>(basis.size()) == v.dim()) break;
  }
  return basis;
}

namespace {

void check_orthonormal(const std::vector<Vec>& basis, int n, const char* what) {
  if (static_cast<int>(basis.size()) > n) {
    throw InvalidInput(std::string(what) + ": more basis vectors than dimensions");
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != n) throw InvalidInput(std::string(what) + ": dimension mismatch");
    if (!all_finite(basis[i])) throw InvalidInput(std::string(what) + ": non-finite basis vector");
    if (std::abs(norm(basis[i]) - 1.0) > kTolOrtho) {
      throw InvalidInput(std::string(what) + ": basis vector is not unit length");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(dot(basis[i], basis[j])) > kTolOrtho) {
        throw InvalidInput(std::string(what) + ": basis vectors are not orthogonal");
      }
    }
  }
}

}  // namespace

Subspace::Subspace(int ambient_dim, std::vector<Vec> orthonormal_basis)
    : n_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (ambient_dim < 1 || ambient_dim > kVecCapacity) throw InvalidInput("Subspace: bad ambient dimension");
  check_orthonormal(basis_, n_, "Subspace");
}

Subspace Subspace::spanned_by(int ambient_dim, std::span<const Vec> vectors) {
  return Subspace(ambient_dim, orthonormalize(vectors));
}

Subspace Subspace::whole(int ambient_dim) {
  std::vector<Vec> basis;
  for (int i = 0; i < ambient_dim; ++i) basis.push_back(unit_vector(ambient_dim, i));
  return Subspace(ambient_dim, std::move(basis));
}

Vec Subspace::project(const Vec& x) const {
  Vec p(n_);
  for (const Vec& b : basis_) p += dot(x, b) * b;
  return p;
}

Subspace Subspace::orthogonal_complement() const {
  std::vector<Vec> all = basis_;
  for (int i = 0; i < n_; ++i) all.push_back(unit_vector(n_, i));
  std::vector<Vec> full = orthonormalize(all, 1e-8);
  return Subspace(n_, std::vector<Vec>(full.begin() + dim(), full.end()));
}

AffineFlat::AffineFlat(Vec base, std::vector<Vec> orthonormal_basis)
    : base_(std::move(base)), basis_(std::move(orthonormal_basis)) {
  require_valid(base_, "AffineFlat base");
  check_orthonormal(basis_, base_.dim(), "AffineFlat");
}

AffineFlat AffineFlat::spanned_by(const Vec& base, std::span<const Vec> directions) {
  return AffineFlat(base, orthonormalize(directions));
}

std::vector<double> AffineFlat::local_coords(const Vec& x) const {
  const Vec d = x - base_;
  std::vector<double> t;
  t.reserve(basis_.size());
  for (const Vec& b : basis_) t.push_back(dot(d, b));
  return t;
}

Vec AffineFlat::from_local(std::span<const double> t) const {
  Vec p = base_;
  for (std::size_t i = 0; i < basis_.size(); ++i) p += t[i] * basis_[i];
  return p;
}

Vec project_onto_flat(const Vec& x, const AffineFlat& flat) {
  require_same_dim(x, flat.base(), "project_onto_flat");
  const Vec d = x - flat.base();
  Vec p = flat.base();
  for (const Vec& b : flat.basis()) p += dot(d, b) * b;
  return p;
}

double dist_to_subspace(const Vec& x, const Subspace& u) {
  Vec r = x;
  for (const Vec& b : u.basis()) r -= dot(x, b) * b;
  return norm(r);
}

double hausdorff_distance(std::span<const Vec> a, std::span<const Vec> b) {
  if (a.empty() || b.empty()) throw InvalidInput("hausdorff_distance: empty point set");
  auto directed = [](std::span<const Vec> from, std::span<const Vec> to) {
    double worst = 0.0;
    for (const Vec& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& q : to) best = std::min(best, norm2(p - q));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace stratakit

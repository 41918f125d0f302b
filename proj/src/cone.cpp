#include "stratakit/cone.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "stratakit/errors.hpp"

namespace stratakit {

namespace {

constexpr double kSignTol = 1e-10;
constexpr double kSameRayTol = 1e-8;

// Projects rays onto the orthogonal complement of the lineality space,
// normalizes, and drops zero and duplicate rays.
std::vector<Vec> clean_rays(const std::vector<Vec>& rays, const std::vector<Vec>& lineality) {
  std::vector<Vec> out;
  for (Vec r : rays) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& l : lineality) r -= dot(r, l) * l;
    }
    const double len = norm(r);
    if (len <= kSignTol) continue;
    r /= len;
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const Vec& o) { return norm(o - r) < kSameRayTol; });
    if (!duplicate) out.push_back(r);
  }
  return out;
}

bool adjacent(const Vec& p, const Vec& m, const std::vector<Vec>& processed, int pointed_dim) {
  std::vector<Vec> common;
  for (const Vec& b : processed) {
    if (std::abs(dot(b, p)) <= kSignTol && std::abs(dot(b, m)) <= kSignTol) common.push_back(b);
  }
  if (static_cast<int>(common.size()) < pointed_dim - 2) return false;
  return rank_of(common, 1e-9) == pointed_dim - 2;
}

}  // namespace

ConeGenerators cone_from_inequalities(int n, std::span<const Vec> normals) {
  if (n < 1 || n > kVecCapacity) throw InvalidInput("cone_from_inequalities: bad dimension");
  ConeGenerators cone;
  for (int i = 0; i < n; ++i) cone.lineality.push_back(unit_vector(n, i));
  std::vector<Vec> processed;

  for (const Vec& raw : normals) {
    if (raw.dim() != n) throw InvalidInput("cone_from_inequalities: dimension mismatch");
    if (!all_finite(raw)) throw InvalidInput("cone_from_inequalities: non-finite normal");
    const double len = norm(raw);
    if (len == 0.0) continue;
    const Vec a = raw / len;

    // Cut the lineality space first if a is not orthogonal to it.
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < cone.lineality.size(); ++i) {
      const double s = std::abs(dot(a, cone.lineality[i]));
      if (s > best) {
        best = s;
        pivot = i;
      }
    }
    if (best > kSignTol) {
      const Vec l = cone.lineality[pivot];
      const double al = dot(a, l);
      std::vector<Vec> reduced;
      for (std::size_t i = 0; i < cone.lineality.size(); ++i) {
        if (i == pivot) continue;
        const Vec& li = cone.lineality[i];
        reduced.push_back(li - (dot(a, li) / al) * l);
      }
      std::vector<Vec> rays;
      for (const Vec& r : cone.rays) rays.push_back(r - (dot(a, r) / al) * l);
      rays.push_back(al > 0.0 ? -l : l);
      cone.lineality = orthonormalize(reduced, 1e-9);
      cone.rays = clean_rays(rays, cone.lineality);
      processed.push_back(a);
      continue;
    }

    std::vector<Vec> plus, next;
    std::vector<Vec> minus;
    for (const Vec& r : cone.rays) {
      const double s = dot(a, r);
      if (s > kSignTol) {
        plus.push_back(r);
      } else {
        next.push_back(r);
        if (s < -kSignTol) minus.push_back(r);
      }
    }
    const int pointed_dim = n - static_cast<int>(cone.lineality.size());
    for (const Vec& p : plus) {
      const double ap = dot(a, p);
      for (const Vec& m : minus) {
        if (!adjacent(p, m, processed, pointed_dim)) continue;
        next.push_back(ap * m - dot(a, m) * p);
      }
    }
    cone.rays = clean_rays(next, cone.lineality);
    processed.push_back(a);
  }
  return cone;
}

PolyhedralCone::PolyhedralCone(int ambient_dim, std::vector<Vec> generators) : n_(ambient_dim) {
  if (ambient_dim < 1 || ambient_dim > kVecCapacity) throw InvalidInput("PolyhedralCone: bad dimension");
  for (Vec& g : generators) {
    if (g.dim() != n_) throw InvalidInput("PolyhedralCone: generator dimension mismatch");
    if (!all_finite(g)) throw InvalidInput("PolyhedralCone: non-finite generator");
    if (norm(g) > 0.0) generators_.push_back(g);
  }
  dim_ = rank_of(generators_, 1e-9);
  span_basis_ = orthonormalize(generators_, 1e-9);
  polar_ = cone_from_inequalities(n_, generators_);
}

PolyhedralCone PolyhedralCone::whole(int ambient_dim) {
  std::vector<Vec> gens;
  for (int i = 0; i < ambient_dim; ++i) {
    gens.push_back(unit_vector(ambient_dim, i));
    gens.push_back(-unit_vector(ambient_dim, i));
  }
  return {ambient_dim, std::move(gens)};
}

bool PolyhedralCone::contains(const Vec& v, double tol) const {
  require_same_dim(v, Vec(n_), "PolyhedralCone::contains");
  const double slack = tol * std::max(1.0, norm(v));
  for (const Vec& h : polar_.rays) {
    if (dot(h, v) > slack) return false;
  }
  for (const Vec& l : polar_.lineality) {
    if (std::abs(dot(l, v)) > slack) return false;
  }
  return true;
}

Vec PolyhedralCone::project(const Vec& b) const {
  require_same_dim(b, Vec(n_), "PolyhedralCone::project");
  if (generators_.empty()) return Vec(n_);
  return nnls_combination(generators_, b);
}

PolyhedralCone polar(const PolyhedralCone& c) {
  std::vector<Vec> gens = c.inequalities();
  for (const Vec& l : c.equalities()) {
    gens.push_back(l);
    gens.push_back(-l);
  }
  return {c.ambient_dim(), std::move(gens)};
}

bool relint_contains(const PolyhedralCone& c, const Vec& v, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("relint_contains: tol must be positive");
  require_same_dim(v, Vec(c.ambient_dim()), "relint_contains");
  const double len = norm(v);
  if (len == 0.0) return c.inequalities().empty();  // 0 is relatively interior only in a subspace
  Vec residual = v;
  for (const Vec& b : c.span_basis()) residual -= dot(v, b) * b;
  if (norm(residual) > tol * std::max(1.0, len)) return false;
  for (const Vec& h : c.inequalities()) {
    if (!(dot(h, v) < -tol * len)) return false;
  }
  return true;
}

Vec nnls_combination(std::span<const Vec> generators, const Vec& b) {
  const int n = b.dim();
  const auto k = static_cast<Eigen::Index>(generators.size());
  Vec zero(n);
  if (k == 0) return zero;

  Eigen::MatrixXd g(n, k);
  double gscale = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = generators[static_cast<std::size_t>(j)][i];
    gscale = std::max(gscale, g.col(j).norm());
  }
  Eigen::VectorXd target(n);
  for (int i = 0; i < n; ++i) target(i) = b[i];
  const double tol = 1e-13 * std::max(1.0, target.norm()) * std::max(1.0, gscale);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  std::vector<bool> passive(static_cast<std::size_t>(k), false);

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = g.col(idx[c]);
    const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(target);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sol(static_cast<Eigen::Index>(c));
    return s;
  };

  const int max_outer = static_cast<int>(3 * k + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = g.transpose() * (target - g * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      const Eigen::VectorXd s = solve_passive();
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          feasible = false;
          const double denom = x(j) - s(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }

  const Eigen::VectorXd gx = g * x;
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = gx(i);
  return out;
}

}  // namespace stratakit

#include "stratakit/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <unordered_map>

#include <Eigen/Dense>

#include "stratakit/errors.hpp"
#include "stratakit/parallel.hpp"
#include "stratakit/sampling.hpp"

namespace stratakit {

// ---- quadratic patches ----------------------------------------------------

namespace {

int quad_terms(int m) { return m * (m + 1) / 2; }

// Monomials t_a t_b for a <= b, in row-major upper-triangle order.
void quad_row(const std::vector<double>& t, std::vector<double>& out) {
  out.clear();
  const int m = static_cast<int>(t.size());
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) out.push_back(t[static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(b)]);
  }
}

std::vector<double> local(const Vec& d, const std::vector<Vec>& basis) {
  std::vector<double> t;
  t.reserve(basis.size());
  for (const Vec& e : basis) t.push_back(dot(d, e));
  return t;
}

struct Pca {
  std::vector<Vec> directions;  // descending variance
  std::vector<double> variances;
};

Pca principal_directions(const std::vector<Vec>& points, const std::vector<int>& idx) {
  const int n = points.front().dim();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (int i : idx) {
    for (int k = 0; k < n; ++k) mean(k) += points[static_cast<std::size_t>(i)][k];
  }
  mean /= static_cast<double>(idx.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (int i : idx) {
    Eigen::VectorXd d(n);
    for (int k = 0; k < n; ++k) d(k) = points[static_cast<std::size_t>(i)][k] - mean(k);
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Pca out;
  for (int c = n - 1; c >= 0; --c) {
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = es.eigenvectors()(k, c);
    out.directions.push_back(v);
    out.variances.push_back(std::max(0.0, es.eigenvalues()(c)));
  }
  return out;
}

}  // namespace

double QuadraticPatch::deviation(const Vec& y) const {
  const Vec d = y - plane.base();
  const std::vector<double> t = local(d, plane.basis());
  std::vector<double> row;
  quad_row(t, row);
  const int m = plane.dim();
  double sum = 0.0;
  for (std::size_t k = 0; k < normals.size(); ++k) {
    double z = dot(d, normals[k]);
    for (int a = 0; a < m; ++a) z -= linear[k][static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(a)];
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        z -= quadratic[k][static_cast<std::size_t>(a * m + b)] * t[static_cast<std::size_t>(a)] *
             t[static_cast<std::size_t>(b)];
      }
    }
    sum += z * z;
  }
  return std::sqrt(sum);
}

namespace {

std::optional<QuadraticPatch> fit_patch(const std::vector<Vec>& points, const std::vector<int>& idx, int seed, int m,
                                        double support_radius) {
  const int n = points.front().dim();
  const Vec& base = points[static_cast<std::size_t>(seed)];
  const Pca pca = principal_directions(points, idx);
  QuadraticPatch patch{AffineFlat(base, {pca.directions.begin(), pca.directions.begin() + m}),
                       {pca.directions.begin() + m, pca.directions.end()},
                       {},
                       {},
                       support_radius,
                       seed};
  const int p = m + quad_terms(m);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(idx.size()), p);
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(idx.size()), n - m);
  std::vector<double> row;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Vec d = points[static_cast<std::size_t>(idx[r])] - base;
    const std::vector<double> t = local(d, patch.plane.basis());
    quad_row(t, row);
    const auto ri = static_cast<Eigen::Index>(r);
    for (int a = 0; a < m; ++a) design(ri, a) = t[static_cast<std::size_t>(a)];
    for (int a = 0; a < quad_terms(m); ++a) design(ri, m + a) = row[static_cast<std::size_t>(a)];
    for (int k = 0; k < n - m; ++k) rhs(ri, k) = dot(d, patch.normals[static_cast<std::size_t>(k)]);
  }
  const Eigen::MatrixXd coef = design.colPivHouseholderQr().solve(rhs);
  if (!coef.allFinite()) return std::nullopt;
  for (int k = 0; k < n - m; ++k) {
    std::vector<double> b(static_cast<std::size_t>(m));
    std::vector<double> q(static_cast<std::size_t>(m * m), 0.0);
    for (int a = 0; a < m; ++a) b[static_cast<std::size_t>(a)] = coef(a, k);
    int c = m;
    for (int a = 0; a < m; ++a) {
      for (int bb = a; bb < m; ++bb, ++c) {
        const double v = a == bb ? coef(c, k) : 0.5 * coef(c, k);
        q[static_cast<std::size_t>(a * m + bb)] = v;
        q[static_cast<std::size_t>(bb * m + a)] = v;
      }
    }
    patch.linear.push_back(std::move(b));
    patch.quadratic.push_back(std::move(q));
  }
  return patch;
}

bool meets_bound(const QuadraticPatch& p, const Vec& y, double tol_fit) {
  const double r2 = norm2(y - p.plane.base());
  if (r2 > p.support_radius * p.support_radius) return false;
  return p.deviation(y) <= tol_fit * r2;
}

}  // namespace

PatchCover quadratic_patch_cover(const std::vector<Vec>& points, int m, double tol_fit, double support_radius) {
  if (points.empty()) throw InvalidInput("quadratic_patch_cover: no points");
  const int n = points.front().dim();
  if (m < 1 || m > n) throw InvalidInput("quadratic_patch_cover: need 1 <= m <= n");
  if (!(tol_fit >= 0.0) || !(support_radius > 0.0)) {
    throw InvalidInput("quadratic_patch_cover: tol_fit must be nonnegative and support_radius positive");
  }
  for (const Vec& p : points) {
    if (p.dim() != n) throw InvalidInput("quadratic_patch_cover: mixed dimensions");
  }
  const std::size_t count = points.size();
  const int needed = m + quad_terms(m) + 2;
  const double rho2 = support_radius * support_radius;

  std::vector<std::vector<int>> nbr(count);
  std::vector<double> score(count, std::numeric_limits<double>::infinity());
  parallel_for(count, [&](std::size_t i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (norm2(points[j] - points[i]) <= rho2) nbr[i].push_back(static_cast<int>(j));
    }
    if (static_cast<int>(nbr[i].size()) < needed) return;
    const Pca pca = principal_directions(points, nbr[i]);
    const double top = pca.variances.front();
    score[i] = m < n && top > 0.0 ? pca.variances[static_cast<std::size_t>(m)] / top : 0.0;
  });
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[static_cast<std::size_t>(a)] < score[static_cast<std::size_t>(b)]; });

  PatchCover cover;
  cover.m = m;
  cover.residual_bound = tol_fit;
  cover.assignment.assign(count, -1);
  int too_sparse = 0;
  for (int s : order) {
    if (cover.assignment[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> idx = nbr[static_cast<std::size_t>(s)];
    if (static_cast<int>(idx.size()) < needed) {
      ++too_sparse;
      continue;
    }
    std::optional<QuadraticPatch> patch;
    // Refit on the inliers a few times so that neighbours from other pieces
    // (edges meeting at a corner) do not tilt the plane.
    for (int round = 0; round < 4; ++round) {
      patch = fit_patch(points, idx, s, m, support_radius);
      if (!patch) break;
      std::vector<int> inliers;
      for (int j : idx) {
        if (meets_bound(*patch, points[static_cast<std::size_t>(j)], tol_fit)) inliers.push_back(j);
      }
      if (inliers.size() == idx.size() || static_cast<int>(inliers.size()) < needed) break;
      idx = std::move(inliers);
    }
    if (!patch) continue;
    const int id = static_cast<int>(cover.patches.size());
    int claimed = 0;
    for (int j : nbr[static_cast<std::size_t>(s)]) {
      if (cover.assignment[static_cast<std::size_t>(j)] >= 0) continue;
      if (meets_bound(*patch, points[static_cast<std::size_t>(j)], tol_fit)) {
        cover.assignment[static_cast<std::size_t>(j)] = id;
        ++claimed;
      }
    }
    if (claimed == 0) continue;
    cover.patches.push_back(std::move(*patch));
  }
  // Leftovers may still fit an existing patch; lowest index wins.
  for (std::size_t j = 0; j < count; ++j) {
    if (cover.assignment[j] >= 0) continue;
    for (std::size_t p = 0; p < cover.patches.size(); ++p) {
      if (meets_bound(cover.patches[p], points[j], tol_fit)) {
        cover.assignment[j] = static_cast<int>(p);
        break;
      }
    }
  }
  const auto assigned = std::count_if(cover.assignment.begin(), cover.assignment.end(), [](int a) { return a >= 0; });
  cover.assigned_fraction = static_cast<double>(assigned) / static_cast<double>(count);
  if (too_sparse > 0) {
    cover.notes.push_back(std::to_string(too_sparse) + " seed candidates had fewer than " + std::to_string(needed) +
                          " neighbours");
  }
  cover.notes.push_back("greedy selection: seeds by local planarity, first fitting patch wins");
  cover.recheck_pass = recheck_patch_cover(points, cover);
  return cover;
}

bool recheck_patch_cover(const std::vector<Vec>& points, const PatchCover& cover) {
  if (cover.assignment.size() != points.size()) return false;
  std::vector<char> ok(points.size(), 1);
  parallel_for(points.size(), [&](std::size_t j) {
    const int p = cover.assignment[j];
    if (p < 0) return;
    if (p >= static_cast<int>(cover.patches.size())) {
      ok[j] = 0;
      return;
    }
    const QuadraticPatch& patch = cover.patches[static_cast<std::size_t>(p)];
    const Vec d = points[j] - patch.plane.base();
    ok[j] = norm(d) <= patch.support_radius && patch.deviation(points[j]) <= cover.residual_bound * norm2(d);
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

// ---- grids ----------------------------------------------------------------

std::int64_t GridMap::node_count() const {
  std::int64_t c = 1;
  for (std::int64_t s : shape) c *= s;
  return shape.empty() ? 0 : c;
}

std::vector<std::int64_t> GridMap::node_multi_index(std::int64_t index) const {
  std::vector<std::int64_t> mi(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    const std::int64_t s = shape[static_cast<std::size_t>(k)];
    mi[static_cast<std::size_t>(k)] = index % s;
    index /= s;
  }
  return mi;
}

std::int64_t GridMap::node_index(const std::vector<std::int64_t>& mi) const {
  std::int64_t index = 0;
  for (int k = 0; k < n; ++k) index = index * shape[static_cast<std::size_t>(k)] + mi[static_cast<std::size_t>(k)];
  return index;
}

double GridMap::spacing(int axis) const {
  const std::int64_t s = shape[static_cast<std::size_t>(axis)];
  return s > 1 ? (hi[axis] - lo[axis]) / static_cast<double>(s - 1) : 0.0;
}

Vec GridMap::node(std::int64_t index) const {
  const std::vector<std::int64_t> mi = node_multi_index(index);
  Vec x(n);
  for (int k = 0; k < n; ++k) x[k] = lo[k] + static_cast<double>(mi[static_cast<std::size_t>(k)]) * spacing(k);
  return x;
}

bool GridMap::defined(std::int64_t index) const {
  for (int k = 0; k < nu; ++k) {
    if (!std::isfinite(values[static_cast<std::size_t>(index * nu + k)])) return false;
  }
  return true;
}

Vec GridMap::value(std::int64_t index) const {
  return Vec::from({values.data() + index * nu, static_cast<std::size_t>(nu)});
}

namespace {

constexpr double kGridVersion = 1.0;

void put(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

bool get(std::istream& in, double& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  v = std::bit_cast<double>(bits);
  return true;
}

double header_field(std::istream& in, const char* name) {
  double v = 0.0;
  if (!get(in, v)) throw FormatError(std::string("grid: truncated header at field '") + name + "'");
  return v;
}

int header_int(std::istream& in, const char* name, double lo, double hi) {
  const double v = header_field(in, name);
  if (!(v >= lo && v <= hi) || v != std::floor(v)) {
    throw FormatError(std::string("grid: header field '") + name + "' out of range");
  }
  return static_cast<int>(v);
}

void validate(const GridMap& g) {
  if (g.n < 1 || g.n > kMaxDim) throw InvalidInput("grid: dimension out of range");
  if (g.nu < 1 || g.nu > kMaxDim) throw InvalidInput("grid: value dimension out of range");
  if (static_cast<int>(g.shape.size()) != g.n || g.lo.dim() != g.n || g.hi.dim() != g.n) {
    throw InvalidInput("grid: shape or bounds do not match the dimension");
  }
  for (int k = 0; k < g.n; ++k) {
    if (g.shape[static_cast<std::size_t>(k)] < 1) throw InvalidInput("grid: shape entries must be positive");
    if (!(g.lo[k] < g.hi[k]) && g.shape[static_cast<std::size_t>(k)] > 1) throw InvalidInput("grid: need lo < hi");
  }
  if (static_cast<std::int64_t>(g.values.size()) != g.node_count() * g.nu) {
    throw InvalidInput("grid: value count does not match the shape");
  }
}

}  // namespace

void write_grid(std::ostream& out, const GridMap& g) {
  validate(g);
  put(out, kGridVersion);
  put(out, g.n);
  put(out, g.m);
  put(out, g.nu);
  for (std::int64_t s : g.shape) put(out, static_cast<double>(s));
  for (int k = 0; k < g.n; ++k) put(out, g.lo[k]);
  for (int k = 0; k < g.n; ++k) put(out, g.hi[k]);
  for (double v : g.values) put(out, v);
  if (!out) throw FormatError("grid: write failed");
}

GridMap read_grid(std::istream& in) {
  const double version = header_field(in, "version");
  if (version != kGridVersion) throw FormatError("grid: unsupported version");
  GridMap g;
  g.n = header_int(in, "n", 1, kMaxDim);
  g.m = header_int(in, "m", 0, g.n);
  g.nu = header_int(in, "nu", 1, kMaxDim);
  double total = 1.0;
  for (int k = 0; k < g.n; ++k) {
    const int s = header_int(in, "shape", 1, 1 << 24);
    g.shape.push_back(s);
    total *= s;
  }
  if (total * g.nu > 1e9) throw FormatError("grid: too many values");
  g.lo = Vec(g.n);
  g.hi = Vec(g.n);
  for (int k = 0; k < g.n; ++k) g.lo[k] = header_field(in, "lo");
  for (int k = 0; k < g.n; ++k) g.hi[k] = header_field(in, "hi");
  for (int k = 0; k < g.n; ++k) {
    if (!std::isfinite(g.lo[k]) || !std::isfinite(g.hi[k]) || !(g.lo[k] < g.hi[k])) {
      throw FormatError("grid: box bounds must be finite with lo < hi");
    }
  }
  const auto count = static_cast<std::size_t>(g.node_count() * g.nu);
  g.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!get(in, g.values[i])) throw FormatError("grid: body shorter than the header's shape");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("grid: trailing bytes after the body");
  return g;
}

void write_grid_file(const std::string& path, const GridMap& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("grid: cannot open '" + path + "' for writing");
  write_grid(out, grid);
}

GridMap read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("grid: cannot open '" + path + "'");
  return read_grid(in);
}

// ---- slab covers ----------------------------------------------------------

namespace {

struct BinIndex {
  std::vector<int> node_bin;        // -1 for undefined nodes
  std::vector<std::int64_t> count;  // nodes per bin
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

BinIndex bin_values(const GridMap& g, double width) {
  BinIndex b;
  const std::int64_t count = g.node_count();
  b.node_bin.assign(static_cast<std::size_t>(count), -1);
  std::unordered_map<std::vector<std::int64_t>, int, KeyHash> ids;
  std::vector<std::int64_t> key(static_cast<std::size_t>(g.nu));
  for (std::int64_t i = 0; i < count; ++i) {
    if (!g.defined(i)) continue;
    for (int k = 0; k < g.nu; ++k) {
      key[static_cast<std::size_t>(k)] =
          static_cast<std::int64_t>(std::llround(g.values[static_cast<std::size_t>(i * g.nu + k)] / width));
    }
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(b.count.size()));
    if (inserted) b.count.push_back(0);
    ++b.count[static_cast<std::size_t>(it->second)];
    b.node_bin[static_cast<std::size_t>(i)] = it->second;
  }
  return b;
}

double pair_ratio(const GridMap& g, std::int64_t a, std::int64_t b) {
  const double dp = norm(g.node(a) - g.node(b));
  const double df = norm(g.value(a) - g.value(b));
  return df > 0.0 ? dp / df : std::numeric_limits<double>::infinity();
}

struct Candidate {
  std::vector<Vec> dirs;  // physical directions
  std::vector<std::int64_t> nodes;
};

// Lattice points base + sum k_j d_j inside the grid.
std::vector<std::int64_t> lattice_plane(const GridMap& g, const std::vector<std::int64_t>& base,
                                        const std::vector<std::vector<std::int64_t>>& dirs) {
  std::vector<std::int64_t> out;
  std::vector<std::vector<std::int64_t>> frontier{base};
  std::unordered_map<std::int64_t, bool> seen;
  seen[g.node_index(base)] = true;
  auto inside = [&](const std::vector<std::int64_t>& mi) {
    for (int k = 0; k < g.n; ++k) {
      if (mi[static_cast<std::size_t>(k)] < 0 || mi[static_cast<std::size_t>(k)] >= g.shape[static_cast<std::size_t>(k)]) {
        return false;
      }
    }
    return true;
  };
  while (!frontier.empty()) {
    std::vector<std::int64_t> mi = std::move(frontier.back());
    frontier.pop_back();
    out.push_back(g.node_index(mi));
    for (const auto& d : dirs) {
      for (int sign : {1, -1}) {
        std::vector<std::int64_t> next = mi;
        for (int k = 0; k < g.n; ++k) next[static_cast<std::size_t>(k)] += sign * d[static_cast<std::size_t>(k)];
        if (!inside(next)) continue;
        const std::int64_t id = g.node_index(next);
        if (seen.emplace(id, true).second) frontier.push_back(std::move(next));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Candidate> candidate_planes(const GridMap& g, int m, int random_count, std::uint64_t seed,
                                        const std::vector<std::int64_t>& seeds) {
  std::vector<Candidate> out;
  const int n = g.n;
  auto physical = [&](const std::vector<std::int64_t>& d) {
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = static_cast<double>(d[static_cast<std::size_t>(k)]) * g.spacing(k);
    return v;
  };
  // Axis-aligned: every m-subset of axes, every setting of the other indices.
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - m, pick.end(), 1);
  do {
    std::vector<std::vector<std::int64_t>> dirs;
    std::vector<int> fixed;
    for (int k = 0; k < n; ++k) {
      if (pick[static_cast<std::size_t>(k)]) {
        std::vector<std::int64_t> d(static_cast<std::size_t>(n), 0);
        d[static_cast<std::size_t>(k)] = 1;
        dirs.push_back(d);
      } else {
        fixed.push_back(k);
      }
    }
    std::vector<std::int64_t> mi(static_cast<std::size_t>(n), 0);
    for (;;) {
      Candidate c;
      for (const auto& d : dirs) c.dirs.push_back(physical(d));
      c.nodes = lattice_plane(g, mi, dirs);
      out.push_back(std::move(c));
      std::size_t f = 0;
      for (; f < fixed.size(); ++f) {
        auto& v = mi[static_cast<std::size_t>(fixed[f])];
        if (++v < g.shape[static_cast<std::size_t>(fixed[f])]) break;
        v = 0;
      }
      if (f == fixed.size()) break;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));

  if (seeds.empty()) return out;
  Rng rng(seed);
  for (int r = 0; r < random_count; ++r) {
    std::vector<std::vector<std::int64_t>> dirs;
    std::vector<Vec> phys;
    while (static_cast<int>(dirs.size()) < m) {
      std::vector<std::int64_t> d(static_cast<std::size_t>(n));
      std::int64_t gcd = 0;
      for (auto& v : d) {
        v = rng.uniform_int(-3, 3);
        gcd = std::gcd(gcd, v < 0 ? -v : v);
      }
      if (gcd != 1) continue;
      std::vector<Vec> trial = phys;
      trial.push_back(physical(d));
      if (orthonormalize(trial, 1e-9).size() != trial.size()) continue;
      dirs.push_back(d);
      phys.push_back(physical(d));
    }
    const std::int64_t base = seeds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(seeds.size()) - 1))];
    Candidate c;
    c.dirs = phys;
    c.nodes = lattice_plane(g, g.node_multi_index(base), dirs);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

SlabCoverReport coarea_slab_cover(const GridMap& g, const SlabCoverOptions& o) {
  validate(g);
  const int m = o.m >= 0 ? o.m : g.m;
  if (m < 1 || m > g.n) throw InvalidInput("coarea_slab_cover: need 1 <= m <= n");
  if (!(o.lip_bound > 0.0)) throw InvalidInput("coarea_slab_cover: lip_bound must be positive");
  double width = o.bin_width;
  if (!(width > 0.0)) {
    width = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.n; ++k) {
      if (g.spacing(k) > 0.0) width = std::min(width, g.spacing(k));
    }
    if (!std::isfinite(width)) width = 1.0;
  }
  const BinIndex bins = bin_values(g, width);
  if (bins.count.empty()) throw InvalidInput("coarea_slab_cover: the grid has no defined values");

  SlabCoverReport rep;
  rep.m = m;
  rep.z_threshold = o.z_threshold;
  rep.bin_width = width;
  rep.lip_bound = o.lip_bound;
  std::vector<char> in_z(bins.count.size(), 0);
  for (std::size_t b = 0; b < bins.count.size(); ++b) {
    in_z[b] = static_cast<double>(bins.count[b]) >= o.z_threshold;
    rep.z_bins += in_z[b];
  }
  if (rep.z_bins == 0) {
    rep.covered_fraction = 1.0;
    rep.notes.push_back("Z is empty: no value bin reaches the cell threshold; covered_fraction is 1 by convention");
    return rep;
  }
  auto z_node = [&](std::int64_t i) {
    const int b = bins.node_bin[static_cast<std::size_t>(i)];
    return b >= 0 && in_z[static_cast<std::size_t>(b)];
  };
  std::vector<std::int64_t> seeds;
  for (std::int64_t i = 0; i < g.node_count(); ++i) {
    if (z_node(i)) seeds.push_back(i);
  }
  std::vector<Candidate> cands = candidate_planes(g, m, o.random_planes, o.seed, seeds);
  rep.candidate_planes = static_cast<std::int64_t>(cands.size());

  // Greedy injective, inverse-Lipschitz subset on each candidate.
  struct Piece {
    std::vector<std::int64_t> nodes;
    std::vector<int> bins;
    double inv_lip = 0.0;
  };
  std::vector<Piece> pieces(cands.size());
  parallel_for(cands.size(), [&](std::size_t c) {
    Piece& p = pieces[c];
    std::vector<Vec> xs;
    std::vector<Vec> fs;
    for (std::int64_t i : cands[c].nodes) {
      if (!z_node(i)) continue;
      const Vec x = g.node(i);
      const Vec f = g.value(i);
      double worst = 0.0;
      bool ok = true;
      for (std::size_t k = 0; k < xs.size() && ok; ++k) {
        const double dp = norm(x - xs[k]);
        const double df = norm(f - fs[k]);
        ok = df > 0.0 && dp <= o.lip_bound * df;
        worst = std::max(worst, dp / df);
      }
      if (!ok) continue;
      xs.push_back(x);
      fs.push_back(f);
      p.nodes.push_back(i);
      p.inv_lip = std::max(p.inv_lip, worst);
      p.bins.push_back(bins.node_bin[static_cast<std::size_t>(i)]);
    }
    std::sort(p.bins.begin(), p.bins.end());
    p.bins.erase(std::unique(p.bins.begin(), p.bins.end()), p.bins.end());
  });

  // Lazy greedy max coverage; gains only shrink, ties go to the lower index.
  std::vector<char> covered(bins.count.size(), 0);
  using Entry = std::pair<std::int64_t, std::int64_t>;  // (gain, -index)
  std::priority_queue<Entry> heap;
  for (std::size_t c = 0; c < pieces.size(); ++c) {
    if (!pieces[c].bins.empty()) heap.emplace(static_cast<std::int64_t>(pieces[c].bins.size()), -static_cast<std::int64_t>(c));
  }
  while (!heap.empty() && static_cast<int>(rep.pieces.size()) < o.max_pieces) {
    const auto [stale, neg] = heap.top();
    heap.pop();
    const auto c = static_cast<std::size_t>(-neg);
    std::int64_t gain = 0;
    for (int b : pieces[c].bins) gain += !covered[static_cast<std::size_t>(b)];
    if (gain == 0) continue;
    if (gain < stale) {
      heap.emplace(gain, neg);
      continue;
    }
    for (int b : pieces[c].bins) covered[static_cast<std::size_t>(b)] = 1;
    const Vec base = g.node(pieces[c].nodes.front());
    rep.pieces.push_back({AffineFlat::spanned_by(base, cands[c].dirs), std::move(pieces[c].nodes), pieces[c].inv_lip,
                          static_cast<int>(gain)});
  }
  for (std::size_t b = 0; b < covered.size(); ++b) rep.covered_bins += covered[b] && in_z[b];
  rep.covered_fraction = static_cast<double>(rep.covered_bins) / static_cast<double>(rep.z_bins);
  rep.notes.push_back("greedy selection over " + std::to_string(rep.candidate_planes) +
                      " lattice planes; H^(n-m) positivity discretized as a cell count per value bin");
  rep.recheck_pass = recheck_slab_cover(g, rep);
  return rep;
}

bool recheck_slab_cover(const GridMap& g, const SlabCoverReport& rep) {
  const BinIndex bins = bin_values(g, rep.bin_width);
  std::vector<char> ok(rep.pieces.size(), 1);
  parallel_for(rep.pieces.size(), [&](std::size_t p) {
    const SlabPiece& piece = rep.pieces[p];
    double worst = 0.0;
    for (std::size_t a = 0; a < piece.nodes.size(); ++a) {
      if (!g.defined(piece.nodes[a])) {
        ok[p] = 0;
        return;
      }
      if (norm(g.node(piece.nodes[a]) - project_onto_flat(g.node(piece.nodes[a]), piece.plane)) > 1e-9 * std::max(1.0, norm(g.hi - g.lo))) {
        ok[p] = 0;
        return;
      }
      for (std::size_t b = 0; b < a; ++b) worst = std::max(worst, pair_ratio(g, piece.nodes[a], piece.nodes[b]));
    }
    ok[p] = worst <= rep.lip_bound && worst <= piece.inverse_lipschitz * (1.0 + 1e-12) + 1e-300;
  });
  if (!std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) return false;
  if (rep.z_bins == 0) return rep.covered_fraction == 1.0;
  std::vector<char> hit(bins.count.size(), 0);
  for (const SlabPiece& piece : rep.pieces) {
    for (std::int64_t i : piece.nodes) hit[static_cast<std::size_t>(bins.node_bin[static_cast<std::size_t>(i)])] = 1;
  }
  std::int64_t z = 0;
  std::int64_t covered = 0;
  for (std::size_t b = 0; b < bins.count.size(); ++b) {
    if (static_cast<double>(bins.count[b]) < rep.z_threshold) continue;
    ++z;
    covered += hit[b];
  }
  return z == rep.z_bins && covered == rep.covered_bins;
}

}  // namespace stratakit

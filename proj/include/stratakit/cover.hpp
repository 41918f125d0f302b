#pragma once

// Witnesses of second-order rectifiability at desk scale: quadratic graph
// patches over m-planes, and slab covers of gridded maps by m-planes on
// which the map is injective with Lipschitz inverse.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stratakit/linalg.hpp"

namespace stratakit {

// ---- quadratic patches ----------------------------------------------------

/// Graph y = base + sum_j t_j e_j + sum_k (b_k . t + t^T Q_k t) nu_k over the
/// plane F = base + span(e_j).
struct QuadraticPatch {
  AffineFlat plane;
  std::vector<Vec> normals;                    // nu_k, orthonormal complement of the plane
  std::vector<std::vector<double>> linear;     // b_k, m entries each
  std::vector<std::vector<double>> quadratic;  // Q_k, row-major symmetric m x m
  double support_radius = 0.0;
  int seed_point = -1;

  /// Vertical deviation of y from the graph: the norm of the normal
  /// components of y - graph(t(y)). Bounds the distance to the graph.
  double deviation(const Vec& y) const;
};

struct PatchCover {
  int m = 0;
  std::vector<QuadraticPatch> patches;
  std::vector<int> assignment;  // patch index per input point, -1 if unassigned
  double residual_bound = 0.0;  // tol_fit
  double assigned_fraction = 0.0;
  bool recheck_pass = true;
  std::vector<std::string> notes;
};

/// Greedy cover. Seeds are taken in order of local planarity (ratio of the
/// (m+1)-st to the largest principal variance of the neighbourhood), the
/// plane comes from local principal directions, the quadratic form from a
/// least-squares fit of the normal deviations. A point y joins the first
/// patch (lowest index) with |y - base| <= support_radius and
/// deviation(y) <= tol_fit |y - base|^2.
PatchCover quadratic_patch_cover(const std::vector<Vec>& points, int m, double tol_fit, double support_radius);

/// Independent pass over the assignment: true iff every assigned point meets
/// the residual bound of its patch.
bool recheck_patch_cover(const std::vector<Vec>& points, const PatchCover& cover);

// ---- gridded maps and slab covers -----------------------------------------

/// Values of f : R^n -> R^nu at the nodes of a regular grid. Nodes are
/// row-major with the last coordinate fastest; NaN marks nodes outside the
/// domain of f.
struct GridMap {
  int n = 0;
  int m = 1;   // default plane dimension for slab covers
  int nu = 0;  // value dimension
  std::vector<std::int64_t> shape;
  Vec lo;
  Vec hi;
  std::vector<double> values;  // nodes * nu

  std::int64_t node_count() const;
  Vec node(std::int64_t index) const;
  std::vector<std::int64_t> node_multi_index(std::int64_t index) const;
  std::int64_t node_index(const std::vector<std::int64_t>& multi) const;
  double spacing(int axis) const;
  bool defined(std::int64_t index) const;
  Vec value(std::int64_t index) const;
};

/// Samples f at every node; f returns false outside its domain.
template <class F>
GridMap make_grid(int m, int nu, std::vector<std::int64_t> shape, Vec lo, Vec hi, F&& f);

/// Binary layout, all little-endian float64:
///   version (1), n, m, nu, shape[n], lo[n], hi[n], then node_count * nu values.
void write_grid(std::ostream& out, const GridMap& grid);
GridMap read_grid(std::istream& in);
void write_grid_file(const std::string& path, const GridMap& grid);
GridMap read_grid_file(const std::string& path);

struct SlabPiece {
  AffineFlat plane;
  std::vector<std::int64_t> nodes;  // retained sample set P
  double inverse_lipschitz = 0.0;   // max |p1 - p2| / |f(p1) - f(p2)| over P
  int new_bins = 0;                 // Z-bins first hit by this piece (greedy gain)
};

struct SlabCoverOptions {
  int m = -1;                 // grid header value if negative
  double z_threshold = 8.0;   // minimum cells per value bin
  double bin_width = -1.0;    // smallest grid spacing if nonpositive
  double lip_bound = 4.0;
  int random_planes = 64;     // lattice-direction planes on top of the axis-aligned ones
  int max_pieces = 100000;
  std::uint64_t seed = 0;
};

struct SlabCoverReport {
  int m = 0;
  std::vector<SlabPiece> pieces;
  double covered_fraction = 0.0;
  double z_threshold = 0.0;
  double bin_width = 0.0;
  double lip_bound = 0.0;
  std::int64_t z_bins = 0;
  std::int64_t covered_bins = 0;
  std::int64_t candidate_planes = 0;
  bool recheck_pass = true;
  std::vector<std::string> notes;
};

/// Value bins with at least z_threshold defined nodes form Z. Candidate
/// planes are spanned by lattice directions through grid nodes; on each the
/// nodes are scanned in order and kept when f stays injective with
/// |p1 - p2| <= lip_bound |f(p1) - f(p2)| against every kept node. Pieces
/// are then chosen greedily by the number of new Z-bins their images hit.
SlabCoverReport coarea_slab_cover(const GridMap& grid, const SlabCoverOptions& options = {});

/// Recomputes every piece's inverse-Lipschitz constant over all pairs and
/// the covered fraction; true iff both agree with the report and every
/// constant is within the bound.
bool recheck_slab_cover(const GridMap& grid, const SlabCoverReport& report);

// ---- template implementation ----------------------------------------------

template <class F>
GridMap make_grid(int m, int nu, std::vector<std::int64_t> shape, Vec lo, Vec hi, F&& f) {
  GridMap g;
  g.n = lo.dim();
  g.m = m;
  g.nu = nu;
  g.shape = std::move(shape);
  g.lo = lo;
  g.hi = hi;
  const std::int64_t count = g.node_count();
  g.values.assign(static_cast<std::size_t>(count * nu), std::numeric_limits<double>::quiet_NaN());
  Vec out(nu);
  for (std::int64_t i = 0; i < count; ++i) {
    if (f(g.node(i), out)) {
      for (int k = 0; k < nu; ++k) g.values[static_cast<std::size_t>(i * nu + k)] = out[k];
    }
  }
  return g;
}

}  // namespace stratakit

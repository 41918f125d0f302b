#pragma once

// Residual checks for the quantitative estimates on distance bundles, nearest
// point projections and polyhedral cones. Every check returns a report with
// the worst residual (positive means the inequality failed) and the inputs
// that produced it.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratakit/closed_set.hpp"
#include "stratakit/cone.hpp"

namespace stratakit {

enum class EstimateId {
  angle,
  projection_lipschitz,
  cone_distance,
  one_sided,
  cone_control,
  corollary_cone_control,
  quadratic_contact,
};

std::string_view estimate_name(EstimateId id);
/// Throws InvalidInput for unknown names.
EstimateId parse_estimate_id(std::string_view name);
const std::vector<EstimateId>& all_estimates();

/// An auxiliary inequality from the proof of an estimate, tracked separately.
struct SubCheck {
  std::string name;
  std::int64_t samples = 0;
  double worst_residual = -std::numeric_limits<double>::infinity();
  double tol = 0.0;
  bool pass = true;
};

struct EstimateReport {
  EstimateId estimate_id = EstimateId::angle;
  std::map<std::string, double> params;
  std::int64_t samples = 0;
  std::int64_t skipped = 0;  // candidate samples rejected as inadmissible
  double worst_residual = -std::numeric_limits<double>::infinity();
  std::map<std::string, Vec> worst_witness;
  double tol_report = 0.0;
  bool pass = true;
  // Set when a conclusion the estimate guarantees (not just the inequality)
  // failed, e.g. a projection that should be single valued is not.
  bool theorem_violation = false;
  std::vector<SubCheck> sub_checks;
  std::vector<std::string> notes;

  void record(double residual, std::map<std::string, Vec> witness);
  void record_sub(const std::string& name, double residual, double tol);
  /// Folds another report of the same estimate into this one.
  void merge(const EstimateReport& other);
  /// pass = worst_residual <= tol_report, every sub-check passes and no
  /// theorem violation was seen.
  void finalize();
};

/// Tolerances; negative values select the scene-relative defaults:
/// second-order residuals 1e-8 * diam^2, first-order 1e-8 * diam, bundle
/// membership 1e-9 * max(1, diam), uniqueness default_tol_unique.
struct VerifyOptions {
  double tol_report = -1.0;
  double tol_touch = -1.0;
  double tol_unique = -1.0;
};

/// (b - a) . v <= (2q)^-1 |b - a|^2 |v| for a, b on A and v = 0 or
/// q v / |v| in Dis(A, a).
EstimateReport check_angle(const ClosedSet& a_set, const Vec& a, const Vec& b, const Vec& v, double q,
                           const VerifyOptions& opt = {});

/// |xi(x) - xi(y)| <= q / (q - r) |y - x| when dist(x, A), dist(y, A) <= r
/// and the nearest points see x, y along touching directions of radius q.
EstimateReport check_projection_lipschitz(const ClosedSet& a_set, const Vec& x, const Vec& y, double q,
                                          double r, const VerifyOptions& opt = {});

/// dist(b - a, polar C) <= (2q)^-1 |b - a|^2 when q v is in Dis(A, a) for
/// the unit generators v of C.
EstimateReport check_cone_distance(const ClosedSet& a_set, const Vec& a, const Vec& b, const PolyhedralCone& c,
                                   double q, const VerifyOptions& opt = {});

/// (xi(x) - xi(y)) . v <= kappa |y - x|^2 with
/// kappa = (2s)^-1 (1 + 2q / (q - r))^2 for s <= dist(x, A), dist(y, A) <= r.
/// Sub-checks replay the proof on alpha = xi(x) + s v, beta = xi(y) + s w.
EstimateReport check_one_sided(const ClosedSet& a_set, const Vec& x, const Vec& y, double q, double r, double s,
                               const VerifyOptions& opt = {});

double one_sided_kappa(double q, double r, double s);

/// dist(d, U) <= -gamma d . v on `samples` points of D = polar(C) (extreme
/// rays included), gamma from gamma_constant.
EstimateReport check_cone_control(const PolyhedralCone& c, const Subspace& u, const Vec& v, int samples,
                                  std::uint64_t seed, double tol = 1e-9);

/// dist(b, U) <= -gamma b . v + (1 + gamma |v|) dist(b, D) on `samples`
/// points b of the ball of radius `radius`.
EstimateReport check_corollary_cone_control(const PolyhedralCone& c, const Subspace& u, const Vec& v, int samples,
                                            std::uint64_t seed, double radius = 3.0, double tol = 1e-8);

struct QuadraticContactOptions {
  std::vector<double> radius_grid{1e-2, 1e-3, 1e-4, 1e-5};
  int samples_per_radius = 64;
  int num_dirs = 0;  // bundle sampling directions at xi(x); 0 selects 16 n
  std::uint64_t seed = 0;
  VerifyOptions verify;
};

/// Evaluates R(y) = |y - x|^-2 dist(xi(y) - a, U) for admissible y at each
/// radius of the grid (a = xi(x)). The limsup is judged by a two-scale
/// heuristic: pass iff the largest R over the two smallest radii is at most
/// 4 times the largest R over the two largest radii (plus tolerance).
/// params carries lambda (max R overall) and the per-radius maxima.
EstimateReport check_quadratic_contact(const ClosedSet& a_set, const Vec& x, const Subspace& u, double q,
                                       const QuadraticContactOptions& opt = {});

struct CampaignOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  double q = 0.4;
  double r = 0.2;
  double s = 0.1;
  int num_dirs = 0;    // bundle sampling directions; 0 selects 8 n
  int base_points = 0; // bundle-based estimates: points of A used; 0 selects an estimate default
  std::vector<Vec> bases;  // explicit base points; overrides base_points when nonempty
  QuadraticContactOptions contact;
  VerifyOptions verify;
  int threads = 0;
};

/// Randomized campaign for one estimate on one scene set. Inadmissible
/// candidates are redrawn (and counted in `skipped`). Throws
/// InsufficientSample if no admissible sample was found.
EstimateReport run_campaign(const ClosedSet& a_set, EstimateId id, const CampaignOptions& opt);

}  // namespace stratakit

#include "stratakit/estimates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "stratakit/bundle.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/parallel.hpp"
#include "stratakit/sampling.hpp"
#include "stratakit/stratify.hpp"

namespace stratakit {

namespace {

constexpr std::array<std::string_view, 7> kNames = {
    "angle", "projection_lipschitz", "cone_distance", "one_sided", "cone_control", "corollary_cone_control",
    "quadratic_contact"};

struct Tols {
  double second;
  double first;
  double touch;
  double unique;
};

Tols resolve(const ClosedSet& a_set, const VerifyOptions& o) {
  const double diam = scene_diameter(a_set);
  Tols t{1e-8 * diam * diam, 1e-8 * diam, 1e-9 * std::max(1.0, diam), default_tol_unique(a_set)};
  if (o.tol_report >= 0.0) t.second = t.first = o.tol_report;
  if (o.tol_touch > 0.0) t.touch = o.tol_touch;
  if (o.tol_unique > 0.0) t.unique = o.tol_unique;
  return t;
}

void require_on_set(const ClosedSet& a_set, const Vec& p, double tol, const char* what) {
  if (distance(a_set, p) > tol) throw PreconditionError(std::string(what) + " is not on the set");
}

// Nearest point of x seen along a touching direction of radius q: the
// theorem's "either x = a or q (x - a) / |x - a| in Dis(A, a)".
struct Seen {
  ProjectionResult pr;
  std::optional<Vec> a;  // a representative satisfying the direction condition
};

Seen seen_from(const ClosedSet& a_set, const Vec& x, double q, const Tols& t) {
  Seen s{nearest_point_set(a_set, x, t.unique), std::nullopt};
  if (s.pr.distance <= t.touch) {
    s.a = s.pr.nearest.front();
    return s;
  }
  for (const Vec& a : s.pr.nearest) {
    if (dis_membership(a_set, a, (q / norm(x - a)) * (x - a), t.touch)) {
      s.a = a;
      break;
    }
  }
  return s;
}

Box sampling_box(const ClosedSet& a_set, double pad) {
  const int n = a_set.ambient_dim();
  Box b{Vec(n), Vec(n)};
  try {
    b = bounding_box(a_set);
  } catch (const UnsupportedInput&) {
    const auto& f = std::get<Flat>(a_set.variant()).flat;
    for (int i = 0; i < n; ++i) {
      b.lo[i] = f.base()[i] - 1.0;
      b.hi[i] = f.base()[i] + 1.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    b.lo[i] -= pad;
    b.hi[i] += pad;
  }
  return b;
}

Vec relint_direction(const PolyhedralCone& c) {
  Vec sum(c.ambient_dim());
  for (const Vec& g : c.generators()) sum += normalized(g);
  if (norm(sum) > 1e-6) return normalized(sum);
  return normalized(c.generators().front());
}

}  // namespace

std::string_view estimate_name(EstimateId id) { return kNames[static_cast<std::size_t>(id)]; }

EstimateId parse_estimate_id(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<EstimateId>(i);
  }
  throw InvalidInput("unknown estimate id '" + std::string(name) + "'");
}

const std::vector<EstimateId>& all_estimates() {
  static const std::vector<EstimateId> ids = {
      EstimateId::angle,        EstimateId::projection_lipschitz,   EstimateId::cone_distance,
      EstimateId::one_sided,    EstimateId::cone_control,           EstimateId::corollary_cone_control,
      EstimateId::quadratic_contact};
  return ids;
}

void EstimateReport::record(double residual, std::map<std::string, Vec> witness) {
  ++samples;
  if (residual > worst_residual || (std::isnan(residual) && !std::isnan(worst_residual))) {
    worst_residual = residual;
    worst_witness = std::move(witness);
  }
}

void EstimateReport::record_sub(const std::string& name, double residual, double tol) {
  auto it = std::find_if(sub_checks.begin(), sub_checks.end(), [&](const SubCheck& c) { return c.name == name; });
  if (it == sub_checks.end()) {
    sub_checks.push_back({name, 0, -std::numeric_limits<double>::infinity(), tol, true});
    it = sub_checks.end() - 1;
  }
  ++it->samples;
  it->worst_residual = std::max(it->worst_residual, residual);
  it->pass = it->worst_residual <= it->tol;
}

void EstimateReport::merge(const EstimateReport& other) {
  samples += other.samples;
  skipped += other.skipped;
  if (other.samples > 0 && other.worst_residual > worst_residual) {
    worst_residual = other.worst_residual;
    worst_witness = other.worst_witness;
  }
  theorem_violation = theorem_violation || other.theorem_violation;
  for (const SubCheck& c : other.sub_checks) {
    auto it = std::find_if(sub_checks.begin(), sub_checks.end(), [&](const SubCheck& s) { return s.name == c.name; });
    if (it == sub_checks.end()) {
      sub_checks.push_back(c);
      continue;
    }
    it->samples += c.samples;
    it->worst_residual = std::max(it->worst_residual, c.worst_residual);
    it->pass = it->worst_residual <= it->tol;
  }
  for (const std::string& note : other.notes) {
    if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(note);
  }
}

void EstimateReport::finalize() {
  pass = !(worst_residual > tol_report) && !std::isnan(worst_residual) && !theorem_violation &&
         std::all_of(sub_checks.begin(), sub_checks.end(), [](const SubCheck& c) { return c.pass; });
}

double one_sided_kappa(double q, double r, double s) {
  const double f = 1.0 + 2.0 * q / (q - r);
  return f * f / (2.0 * s);
}

EstimateReport check_angle(const ClosedSet& a_set, const Vec& a, const Vec& b, const Vec& v, double q,
                           const VerifyOptions& opt) {
  if (!(q > 0.0)) throw InvalidInput("check_angle: q must be positive");
  const Tols t = resolve(a_set, opt);
  require_on_set(a_set, a, t.touch, "check_angle: a");
  require_on_set(a_set, b, t.touch, "check_angle: b");
  const double len = norm(v);
  if (len > 0.0 && !dis_membership(a_set, a, (q / len) * v, t.touch)) {
    throw PreconditionError("check_angle: q v / |v| is not in Dis(A, a)");
  }
  EstimateReport rep;
  rep.estimate_id = EstimateId::angle;
  rep.params = {{"q", q}};
  rep.tol_report = t.second;
  const Vec ba = b - a;
  rep.record(dot(ba, v) - norm2(ba) * len / (2.0 * q), {{"a", a}, {"b", b}, {"v", v}});
  rep.finalize();
  return rep;
}

EstimateReport check_projection_lipschitz(const ClosedSet& a_set, const Vec& x, const Vec& y, double q, double r,
                                          const VerifyOptions& opt) {
  if (!(0.0 < r && r < q)) throw InvalidInput("check_projection_lipschitz: need 0 < r < q");
  const Tols t = resolve(a_set, opt);
  EstimateReport rep;
  rep.estimate_id = EstimateId::projection_lipschitz;
  rep.params = {{"q", q}, {"r", r}, {"lipschitz_bound", q / (q - r)}};
  rep.tol_report = t.first;

  const Seen sx = seen_from(a_set, x, q, t);
  const Seen sy = seen_from(a_set, y, q, t);
  for (const Seen* s : {&sx, &sy}) {
    if (s->pr.distance > r + t.touch) throw PreconditionError("check_projection_lipschitz: dist > r");
    if (!s->a) throw PreconditionError("check_projection_lipschitz: direction condition fails");
  }
  if (!sx.pr.unique || !sy.pr.unique) {
    // The estimate asserts xi(x) = a; a second nearest point contradicts it.
    rep.theorem_violation = true;
    rep.notes.push_back("nearest point not unique although the direction condition holds");
    rep.record(std::numeric_limits<double>::infinity(), {{"x", x}, {"y", y}, {"a", *sx.a}, {"b", *sy.a}});
    rep.finalize();
    return rep;
  }
  const Vec& a = *sx.a;
  const Vec& b = *sy.a;
  rep.record(norm(b - a) - q / (q - r) * norm(y - x), {{"x", x}, {"y", y}, {"a", a}, {"b", b}});
  rep.finalize();
  return rep;
}

EstimateReport check_cone_distance(const ClosedSet& a_set, const Vec& a, const Vec& b, const PolyhedralCone& c,
                                   double q, const VerifyOptions& opt) {
  if (!(q > 0.0)) throw InvalidInput("check_cone_distance: q must be positive");
  const Tols t = resolve(a_set, opt);
  require_on_set(a_set, a, t.touch, "check_cone_distance: a");
  require_on_set(a_set, b, t.touch, "check_cone_distance: b");
  for (const Vec& g : c.generators()) {
    if (!dis_membership(a_set, a, q * normalized(g), t.touch)) {
      throw PreconditionError("check_cone_distance: q v not in Dis(A, a) for a generator v of C");
    }
  }
  EstimateReport rep;
  rep.estimate_id = EstimateId::cone_distance;
  rep.params = {{"q", q}, {"dim_C", static_cast<double>(c.dim())}};
  rep.tol_report = t.second;
  const Vec ba = b - a;
  rep.record(polar(c).distance(ba) - norm2(ba) / (2.0 * q), {{"a", a}, {"b", b}});
  rep.finalize();
  return rep;
}

EstimateReport check_one_sided(const ClosedSet& a_set, const Vec& x, const Vec& y, double q, double r, double s,
                               const VerifyOptions& opt) {
  if (!(0.0 < s && s < r && r < q)) throw InvalidInput("check_one_sided: need 0 < s < r < q");
  const Tols t = resolve(a_set, opt);
  auto side = [&](const Vec& p, const char* name) {
    const ProjectionResult pr = nearest_point_set(a_set, p, t.unique);
    if (!pr.unique) throw PreconditionError(std::string("check_one_sided: ") + name + " not in the domain of xi");
    if (pr.distance < s - t.touch || pr.distance > r + t.touch) {
      throw PreconditionError(std::string("check_one_sided: dist(") + name + ", A) outside [s, r]");
    }
    const Vec a = pr.nearest.front();
    const Vec dir = (p - a) / pr.distance;
    if (!dis_membership(a_set, a, q * dir, t.touch)) {
      throw PreconditionError(std::string("check_one_sided: q v not in Dis(A, xi(") + name + "))");
    }
    return std::pair{a, dir};
  };
  const auto [a, v] = side(x, "x");
  const auto [b, w] = side(y, "y");
  const double kappa = one_sided_kappa(q, r, s);

  EstimateReport rep;
  rep.estimate_id = EstimateId::one_sided;
  rep.params = {{"q", q}, {"r", r}, {"s", s}, {"kappa", kappa}};
  rep.tol_report = t.second;
  rep.record(dot(a - b, v) - kappa * norm2(y - x), {{"x", x}, {"y", y}, {"a", a}, {"b", b}});

  // The proof reduces to points at distance exactly s.
  const Vec alpha = a + s * v;
  const Vec beta = b + s * w;
  const double ab2 = norm2(beta - alpha);
  rep.record_sub("alpha_beta_intermediate", dot(alpha - beta, v) - ab2 / (2.0 * s), t.second);
  rep.record_sub("alpha_beta_reduced", dot(a - b, v) - ab2 / (2.0 * s), t.second);
  rep.record_sub("alpha_beta_growth", std::sqrt(ab2) - (1.0 + 2.0 * q / (q - r)) * norm(y - x), t.first);
  for (const auto& [p, base, name] : {std::tuple{alpha, a, "xi_alpha"}, std::tuple{beta, b, "xi_beta"}}) {
    const auto xp = xi(a_set, p, t.unique);
    rep.record_sub(name, xp ? norm(*xp - base) : std::numeric_limits<double>::infinity(), t.first);
  }
  rep.finalize();
  return rep;
}

EstimateReport check_cone_control(const PolyhedralCone& c, const Subspace& u, const Vec& v, int samples,
                                  std::uint64_t seed, double tol) {
  const double gamma = gamma_constant(c, u, v);
  const PolyhedralCone d = polar(c);
  EstimateReport rep;
  rep.estimate_id = EstimateId::cone_control;
  rep.params = {{"gamma", gamma}, {"dim_C", static_cast<double>(c.dim())}, {"dim_U", static_cast<double>(u.dim())}};
  rep.tol_report = tol;
  auto eval = [&](const Vec& dd) {
    rep.record(dist_to_subspace(dd, u) + gamma * dot(dd, v), {{"d", dd}, {"v", v}});
  };
  if (d.generators().empty()) {
    eval(Vec(c.ambient_dim()));
  } else {
    for (const Vec& g : d.generators()) eval(normalized(g));
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
      Vec dd(c.ambient_dim());
      for (const Vec& g : d.generators()) dd += -std::log(1.0 - rng.uniform01()) * normalized(g);
      if (norm(dd) == 0.0) continue;
      eval(normalized(dd));
    }
  }
  rep.finalize();
  return rep;
}

EstimateReport check_corollary_cone_control(const PolyhedralCone& c, const Subspace& u, const Vec& v, int samples,
                                            std::uint64_t seed, double radius, double tol) {
  const double gamma = gamma_constant(c, u, v);
  const PolyhedralCone d = polar(c);
  EstimateReport rep;
  rep.estimate_id = EstimateId::corollary_cone_control;
  rep.params = {{"gamma", gamma}, {"radius", radius}};
  rep.tol_report = tol;
  Rng rng(seed);
  const int n = c.ambient_dim();
  for (int k = 0; k < samples; ++k) {
    const Vec b = rng.unit(n) * (radius * std::pow(rng.uniform01(), 1.0 / n));
    rep.record(dist_to_subspace(b, u) + gamma * dot(b, v) - (1.0 + gamma * norm(v)) * d.distance(b),
               {{"b", b}, {"v", v}});
  }
  rep.finalize();
  return rep;
}

EstimateReport check_quadratic_contact(const ClosedSet& a_set, const Vec& x, const Subspace& u, double q,
                                       const QuadraticContactOptions& opt) {
  const int n = a_set.ambient_dim();
  if (!(q > 0.0)) throw InvalidInput("check_quadratic_contact: q must be positive");
  if (opt.radius_grid.size() < 2) throw InvalidInput("check_quadratic_contact: need at least two radii");
  const Tols t = resolve(a_set, opt.verify);

  const ProjectionResult px = nearest_point_set(a_set, x, t.unique);
  if (!px.unique) throw PreconditionError("check_quadratic_contact: x not in the domain of xi");
  if (!(px.distance > 0.0 && px.distance < q)) throw PreconditionError("check_quadratic_contact: need 0 < dist(x, A) < q");
  const Vec a = px.nearest.front();
  const Vec dir = (x - a) / px.distance;

  DisSampleOptions so;
  so.seed = derive_seed(opt.seed, "contact-bundle", 0);
  const int num_dirs = opt.num_dirs > 0 ? opt.num_dirs : 16 * n;
  const DistanceBundleSample bundle = dis_sample(a_set, a, q, num_dirs, default_tol_touch(a_set), so);
  const PolyhedralCone cone = bundle_cone(bundle);
  if (!relint_contains(cone, q * dir, 1e-9)) {
    throw PreconditionError("check_quadratic_contact: direction of x is not in the relative interior of Dis(A, a)");
  }
  const PolyhedralCone tan = tangent_from_normal(cone);
  for (const Vec& e : u.basis()) {
    if (!tan.contains(e, 1e-9) || !tan.contains(-e, 1e-9)) {
      throw PreconditionError("check_quadratic_contact: U is not contained in Tan(A, a)");
    }
  }
  if (bundle.est_dim < n - u.dim()) throw PreconditionError("check_quadratic_contact: dim Dis(A, a) < n - dim U");

  std::vector<double> radii = opt.radius_grid;
  std::sort(radii.begin(), radii.end(), std::greater<>());
  EstimateReport rep;
  rep.estimate_id = EstimateId::quadratic_contact;
  rep.tol_report = t.second;
  std::vector<double> rmax(radii.size(), 0.0);
  double lambda = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double rho = radii[k];
    int admissible = 0;
    for (const Vec& e : sphere_directions(n, opt.samples_per_radius, derive_seed(opt.seed, "contact", k))) {
      const Vec y = x + rho * e;
      const ProjectionResult py = nearest_point_set(a_set, y, t.unique);
      if (!py.unique || !(py.distance > 0.0 && py.distance < q)) continue;
      const Vec b = py.nearest.front();
      if (!dis_membership(a_set, b, (q / py.distance) * (y - b), t.touch)) continue;
      ++admissible;
      ++rep.samples;
      const double ratio = dist_to_subspace(b - a, u) / (rho * rho);
      rmax[k] = std::max(rmax[k], ratio);
      if (ratio > lambda || rep.worst_witness.empty()) {
        lambda = std::max(lambda, ratio);
        rep.worst_witness = {{"x", x}, {"y", y}, {"a", a}, {"xi_y", b}};
      }
    }
    if (admissible == 0) {
      throw InsufficientSample("check_quadratic_contact: no admissible y at radius " + std::to_string(rho));
    }
  }
  const std::size_t last = radii.size() - 1;
  const double large = std::max(rmax[0], rmax[1]);
  const double small = std::max(rmax[last], rmax[last - 1]);
  rep.worst_residual = small - 4.0 * large;
  rep.params = {{"q", q}, {"lambda", lambda}, {"R_large", large}, {"R_small", small}, {"factor", 4.0},
                {"dim_U", static_cast<double>(u.dim())}};
  for (std::size_t k = 0; k < radii.size(); ++k) {
    rep.params["radius_" + std::to_string(k)] = radii[k];
    rep.params["R_max_" + std::to_string(k)] = rmax[k];
  }
  rep.notes.push_back("limsup judged by a two-scale boundedness heuristic with factor 4");
  rep.finalize();
  return rep;
}

namespace {

struct Sampler {
  const ClosedSet& a_set;
  Tols t;
  Box box;
  double diam;

  Vec draw(Rng& rng) const { return rng.in_box(box.lo, box.hi); }

  Vec point_on(Rng& rng) const { return nearest_point_set(a_set, draw(rng), t.unique).nearest.front(); }

  // Candidate near x at a log-uniform distance, or an independent one.
  Vec partner(Rng& rng, const Vec& x, bool near) const {
    if (!near) return draw(rng);
    const double rho = diam * std::pow(10.0, -3.0 * rng.uniform01());
    return x + rho * rng.unit(x.dim());
  }
};

constexpr int kMaxTries = 2000;

template <class Accept>
std::optional<Vec> draw_admissible(const Sampler& sm, Rng& rng, Accept&& accept, const Vec* near_to,
                                   std::int64_t& rejected) {
  for (int tries = 0; tries < kMaxTries; ++tries) {
    const bool near = near_to != nullptr && tries < kMaxTries / 2;
    const Vec x = near ? sm.partner(rng, *near_to, true) : sm.draw(rng);
    if (accept(x)) return x;
    ++rejected;
  }
  return std::nullopt;
}

std::vector<Vec> campaign_bases(const ClosedSet& a_set, const CampaignOptions& opt, int fallback) {
  if (!opt.bases.empty()) return opt.bases;
  if (const ConvexPolytope* p = a_set.polytope()) {
    // every boundary face gets at least one base point
    const int k = opt.base_points > 0 ? opt.base_points : std::max(fallback, static_cast<int>(p->faces().size()));
    return polytope_probes(*p, k, derive_seed(opt.seed, "bases", 0));
  }
  const int k = opt.base_points > 0 ? opt.base_points : fallback;
  try {
    return sample_points_on(a_set, k, derive_seed(opt.seed, "bases", 0));
  } catch (const UnsupportedInput&) {
    return sample_points_on(a_set, k, derive_seed(opt.seed, "bases", 0), 1.0);
  }
}

EstimateReport pair_campaign(const ClosedSet& a_set, EstimateId id, const CampaignOptions& opt, const Sampler& sm) {
  const std::string tag(estimate_name(id));
  std::vector<EstimateReport> parts(static_cast<std::size_t>(opt.samples));
  const Tols& t = sm.t;

  parallel_for(parts.size(), [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, tag, i));
    EstimateReport& out = parts[i];
    out.estimate_id = id;
    const bool near = i % 2 == 0;
    try {
      switch (id) {
        case EstimateId::projection_lipschitz: {
          auto ok = [&](const Vec& p) {
            const Seen s = seen_from(a_set, p, opt.q, t);
            return s.pr.distance <= opt.r && s.a.has_value();
          };
          const auto x = draw_admissible(sm, rng, ok, nullptr, out.skipped);
          if (!x) return;
          const auto y = draw_admissible(sm, rng, ok, near ? &*x : nullptr, out.skipped);
          if (!y) return;
          out.merge(check_projection_lipschitz(a_set, *x, *y, opt.q, opt.r, opt.verify));
          break;
        }
        case EstimateId::one_sided: {
          auto ok = [&](const Vec& p) {
            const ProjectionResult pr = nearest_point_set(a_set, p, t.unique);
            if (!pr.unique || pr.distance < opt.s || pr.distance > opt.r) return false;
            const Vec& a = pr.nearest.front();
            return dis_membership(a_set, a, (opt.q / pr.distance) * (p - a), t.touch);
          };
          const auto x = draw_admissible(sm, rng, ok, nullptr, out.skipped);
          if (!x) return;
          const auto y = draw_admissible(sm, rng, ok, near ? &*x : nullptr, out.skipped);
          if (!y) return;
          out.merge(check_one_sided(a_set, *x, *y, opt.q, opt.r, opt.s, opt.verify));
          break;
        }
        case EstimateId::angle: {
          auto ok = [&](const Vec& p) {
            const ProjectionResult pr = nearest_point_set(a_set, p, t.unique);
            if (!pr.unique || pr.distance <= t.touch) return false;
            const Vec& a = pr.nearest.front();
            return dis_membership(a_set, a, (opt.q / pr.distance) * (p - a), t.touch);
          };
          const auto x = draw_admissible(sm, rng, ok, nullptr, out.skipped);
          if (!x) return;
          const Vec a = nearest_point_set(a_set, *x, t.unique).nearest.front();
          const Vec b = near ? nearest_point_set(a_set, sm.partner(rng, a, true), t.unique).nearest.front()
                             : sm.point_on(rng);
          out.merge(check_angle(a_set, a, b, *x - a, opt.q, opt.verify));
          break;
        }
        default:
          break;
      }
    } catch (const PreconditionError&) {
      ++out.skipped;
    }
  }, opt.threads);

  EstimateReport rep;
  rep.estimate_id = id;
  for (const EstimateReport& p : parts) rep.merge(p);
  return rep;
}

EstimateReport bundle_campaign(const ClosedSet& a_set, EstimateId id, const CampaignOptions& opt, const Sampler& sm) {
  const int n = a_set.ambient_dim();
  const std::string tag(estimate_name(id));
  const int fallback = id == EstimateId::quadratic_contact ? 8 : 50;
  const std::vector<Vec> bases = campaign_bases(a_set, opt, fallback);
  const int per_base = std::max(1, opt.samples / static_cast<int>(bases.size()));
  const int num_dirs = opt.num_dirs > 0 ? opt.num_dirs : 8 * n;
  std::vector<EstimateReport> parts(bases.size());

  parallel_for(bases.size(), [&](std::size_t i) {
    EstimateReport& out = parts[i];
    out.estimate_id = id;
    const Vec& a = bases[i];
    DisSampleOptions so;
    so.seed = derive_seed(opt.seed, tag + "-bundle", i);
    const DistanceBundleSample bundle = dis_sample(a_set, a, opt.q, num_dirs, default_tol_touch(a_set), so);
    Rng rng(derive_seed(opt.seed, tag, i));
    try {
      if (id == EstimateId::cone_distance) {
        std::vector<Vec> gens;
        for (const BundleDirection& d : bundle.directions) {
          if (d.t >= opt.q) gens.push_back(d.v);
        }
        // The estimate needs q v in Dis(A, a) on all of C n S^{n-1}, not only
        // on the generators; spot-check pairwise bisectors as well.
        bool convex_ok = true;
        for (std::size_t p = 0; p < gens.size() && convex_ok; ++p) {
          for (std::size_t r = 0; r < p && convex_ok; ++r) {
            const Vec mid = gens[p] + gens[r];
            if (norm(mid) < 1e-9) continue;
            convex_ok = dis_membership(a_set, a, opt.q * normalized(mid), sm.t.touch);
          }
        }
        if (!convex_ok) {
          out.notes.push_back("touching directions at a base point are not convex at radius q; used one ray");
          gens.resize(1);
        }
        const PolyhedralCone c(n, gens);
        for (int k = 0; k < per_base; ++k) {
          const bool near = k % 2 == 0;
          const Vec b = near ? nearest_point_set(a_set, sm.partner(rng, a, true), sm.t.unique).nearest.front()
                             : sm.point_on(rng);
          out.merge(check_cone_distance(a_set, a, b, c, opt.q, opt.verify));
        }
        return;
      }
      const PolyhedralCone c = bundle_cone(bundle);
      if (c.dim() == 0) {
        ++out.skipped;
        return;
      }
      const Subspace u = Subspace(n, c.span_basis()).orthogonal_complement();
      const Vec v = relint_direction(c);
      if (!relint_contains(c, v, 1e-9)) {
        ++out.skipped;
        return;
      }
      const std::uint64_t seed = derive_seed(opt.seed, tag + "-check", i);
      if (id == EstimateId::cone_control) {
        out.merge(check_cone_control(c, u, v, per_base, seed));
      } else if (id == EstimateId::corollary_cone_control) {
        out.merge(check_corollary_cone_control(c, u, v, per_base, seed, std::max(1.0, sm.diam)));
      } else if (id == EstimateId::quadratic_contact) {
        if (c.dim() >= n) {
          ++out.skipped;
          return;
        }
        QuadraticContactOptions qo = opt.contact;
        qo.seed = seed;
        qo.verify = opt.verify;
        const EstimateReport r = check_quadratic_contact(a_set, a + (0.5 * opt.q) * v, u, opt.q, qo);
        out.merge(r);
        out.params["lambda"] = r.params.at("lambda");
      }
    } catch (const PreconditionError&) {
      ++out.skipped;
    } catch (const UnboundedGamma&) {
      ++out.skipped;
    } catch (const InsufficientSample&) {
      ++out.skipped;
    }
  }, opt.threads);

  EstimateReport rep;
  rep.estimate_id = id;
  double lambda = 0.0;
  for (const EstimateReport& p : parts) {
    rep.merge(p);
    if (auto it = p.params.find("lambda"); it != p.params.end()) lambda = std::max(lambda, it->second);
  }
  if (id == EstimateId::quadratic_contact) rep.params["lambda"] = lambda;
  rep.params["base_points"] = static_cast<double>(bases.size());
  return rep;
}

}  // namespace

EstimateReport run_campaign(const ClosedSet& a_set, EstimateId id, const CampaignOptions& opt) {
  if (opt.samples < 1) throw InvalidInput("run_campaign: samples must be positive");
  const Tols t = resolve(a_set, opt.verify);
  const double pad = std::max({opt.q, opt.r, 0.0});
  const Sampler sm{a_set, t, sampling_box(a_set, pad), scene_diameter(a_set)};

  EstimateReport rep;
  switch (id) {
    case EstimateId::angle:
    case EstimateId::projection_lipschitz:
    case EstimateId::one_sided:
      if (id != EstimateId::angle && !(0.0 < opt.r && opt.r < opt.q)) throw InvalidInput("campaign: need 0 < r < q");
      if (id == EstimateId::one_sided && !(0.0 < opt.s && opt.s < opt.r)) throw InvalidInput("campaign: need 0 < s < r");
      rep = pair_campaign(a_set, id, opt, sm);
      break;
    default:
      rep = bundle_campaign(a_set, id, opt, sm);
      break;
  }

  rep.params["q"] = opt.q;
  switch (id) {
    case EstimateId::angle:
    case EstimateId::cone_distance:
    case EstimateId::one_sided:
    case EstimateId::quadratic_contact:
      rep.tol_report = t.second;
      break;
    case EstimateId::projection_lipschitz:
      rep.tol_report = t.first;
      break;
    case EstimateId::cone_control:
      rep.tol_report = 1e-9;
      break;
    case EstimateId::corollary_cone_control:
      rep.tol_report = 1e-8;
      break;
  }
  if (opt.verify.tol_report >= 0.0) rep.tol_report = opt.verify.tol_report;
  if (id == EstimateId::projection_lipschitz || id == EstimateId::one_sided) {
    rep.params["r"] = opt.r;
    if (id == EstimateId::projection_lipschitz) rep.params["lipschitz_bound"] = opt.q / (opt.q - opt.r);
  }
  if (id == EstimateId::one_sided) {
    rep.params["s"] = opt.s;
    rep.params["kappa"] = one_sided_kappa(opt.q, opt.r, opt.s);
  }
  rep.params["samples_requested"] = opt.samples;
  if (rep.samples == 0) {
    throw InsufficientSample("campaign " + std::string(estimate_name(id)) + ": no admissible samples");
  }
  rep.finalize();
  return rep;
}

}  // namespace stratakit

// Supremum of |Tz| over the unit sphere with open balls around a set of
// centers removed. In dim 2 the feasible set is a finite union of closed arcs:
// in a two-dimensional normed space, |z(t) - c| grows monotonically as z(t)
// travels along the unit circle from c to -c, so each ball cuts out one arc
// whose endpoints bisection finds to machine precision. In higher dimension
// the feasible set is explored by sampling followed by a feasible ascent.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bpb/operator_analysis.hpp"
#include "sphere_search.hpp"

namespace bpb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Interval {
  double lo;
  double hi;
};

double min_center_distance(const LpSpace& space, const Vector& z, const std::vector<Vector>& centers) {
  double d = kInf;
  for (const Vector& c : centers) d = std::min(d, lp_norm(z - c, space.p));
  return d;
}

// Among near-ties for the supremum, report the point farthest from the
// centers; for isometries every feasible point ties.
Vector pick_witness(const LpSpace& space, const std::vector<detail::Candidate>& cands, double sup,
                    const std::vector<Vector>& centers, double tie) {
  const Vector* best = nullptr;
  double best_d = -1.0;
  for (const auto& c : cands) {
    if (c.value < sup - tie) continue;
    const double d = min_center_distance(space, c.z, centers);
    if (d > best_d) {
      best_d = d;
      best = &c.z;
    }
  }
  return *best;
}

// Arc half-width on one side of center c: smallest s in (0, pi] with
// |z(theta_c + dir * s) - c| >= eps.
double arc_reach(const LpSpace& space, const Vector& c, double theta_c, double dir, double eps) {
  double lo = 0.0;
  double hi = std::numbers::pi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lp_norm(angle_point(space, theta_c + dir * mid) - c, space.p) >= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ConstrainedSup planar_sup(const Operator& op, const std::vector<Vector>& centers, double eps,
                          const ToleranceConfig& cfg) {
  const LpSpace& space = op.domain;
  const detail::RatioObjective obj(op);
  std::vector<Interval> blocked;
  for (const Vector& c : centers) {
    const double theta = detail::angle_of(c);
    const double right = arc_reach(space, c, theta, 1.0, eps);
    const double left = arc_reach(space, c, theta, -1.0, eps);
    double lo = std::fmod(theta - left, kTwoPi);
    if (lo < 0) lo += kTwoPi;
    const double hi = lo + left + right;
    if (left + right >= kTwoPi) {
      blocked.push_back({0.0, kTwoPi});
    } else if (hi > kTwoPi) {
      blocked.push_back({lo, kTwoPi});
      blocked.push_back({0.0, hi - kTwoPi});
    } else {
      blocked.push_back({lo, hi});
    }
  }
  std::sort(blocked.begin(), blocked.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  // Complement of the union of open arcs, as closed intervals of positive length.
  std::vector<Interval> feasible;
  double cursor = 0.0;
  for (const Interval& b : blocked) {
    if (b.lo > cursor) feasible.push_back({cursor, b.lo});
    cursor = std::max(cursor, b.hi);
  }
  if (cursor < kTwoPi) feasible.push_back({cursor, kTwoPi});

  ConstrainedSup out;
  out.exact = true;
  if (feasible.empty()) {
    out.empty = true;
    return out;
  }

  const int density = 2 * std::max(cfg.grid_points, 8);
  std::vector<detail::Candidate> cands;
  auto value_at = [&](double t) { return obj.value(angle_point(space, t)); };
  for (const Interval& iv : feasible) {
    const double len = iv.hi - iv.lo;
    const int n = std::max(8, static_cast<int>(std::ceil(density * len / kTwoPi)));
    const double h = len / n;
    std::vector<double> vals(n + 1);
    for (int k = 0; k <= n; ++k) vals[k] = value_at(iv.lo + h * k);
    cands.push_back({angle_point(space, iv.lo), vals[0]});
    cands.push_back({angle_point(space, iv.hi), vals[n]});
    for (int k = 1; k < n; ++k) {
      if (vals[k] > vals[k - 1] && vals[k] >= vals[k + 1]) {
        const double t = golden_section_minimize([&](double s) { return -value_at(s); }, iv.lo + h * (k - 1),
                                                 iv.lo + h * (k + 1), cfg.tol_opt);
        const double v = value_at(t);
        if (v >= vals[k])
          cands.push_back({angle_point(space, t), v});
        else
          cands.push_back({angle_point(space, iv.lo + h * k), vals[k]});
      } else {
        cands.push_back({angle_point(space, iv.lo + h * k), vals[k]});
      }
    }
  }
  double sup = -1.0;
  for (const auto& c : cands) sup = std::max(sup, c.value);
  out.sup_value = sup;
  out.witness = pick_witness(space, cands, sup, centers, cfg.tol_opt * std::max(1.0, sup));
  return out;
}

// Pushes z out of the ball around c by rotating it away from c inside the
// plane span{c, z} until |z - c| = eps (monotone along that planar circle).
std::optional<Vector> push_out(const LpSpace& space, const Vector& z, const Vector& c, double eps) {
  const Vector cu = c.normalized();
  Vector v = z - cu.dot(z) * cu;
  const double vn = v.norm();
  if (vn < 1e-14) return std::nullopt;
  v /= vn;
  auto point = [&](double s) {
    Vector w = std::cos(s) * cu + std::sin(s) * v;
    return Vector(w / lp_norm(w, space.p));
  };
  double lo = std::atan2(v.dot(z), cu.dot(z));
  double hi = std::numbers::pi;
  if (lp_norm(point(hi) - c, space.p) < eps) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lp_norm(point(mid) - c, space.p) >= eps)
      hi = mid;
    else
      lo = mid;
  }
  return point(hi);
}

std::optional<Vector> make_feasible(const LpSpace& space, Vector z, const std::vector<Vector>& centers, double eps) {
  for (int round = 0; round < 8; ++round) {
    const Vector* worst = nullptr;
    double worst_d = eps;
    for (const Vector& c : centers) {
      const double d = lp_norm(z - c, space.p);
      if (d < worst_d) {
        worst_d = d;
        worst = &c;
      }
    }
    if (worst == nullptr) return z;
    auto pushed = push_out(space, z, *worst, eps);
    if (!pushed) return std::nullopt;
    z = std::move(*pushed);
  }
  if (min_center_distance(space, z, centers) >= eps) return z;
  return std::nullopt;
}

detail::Candidate feasible_ascent(const detail::RatioObjective& obj, const LpSpace& space, Vector z,
                                  const std::vector<Vector>& centers, double eps) {
  double f = obj.value(z);
  double step = 0.05;
  int stalls = 0;
  for (int it = 0; it < 3000; ++it) {
    const Vector g = obj.gradient(z) / obj.scale();
    const double gn = g.norm();
    if (!(gn > 1e-15)) break;
    const Vector dir = g / gn;
    bool moved = false;
    Vector next;
    double next_f = f;
    while (step > 1e-13) {
      Vector y = z + step * dir;
      y /= lp_norm(y, space.p);
      auto feasible = make_feasible(space, y, centers, eps);
      if (feasible) {
        const double fy = obj.value(*feasible);
        if (fy > f) {
          next = std::move(*feasible);
          next_f = fy;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) break;
    const double dz = (next - z).cwiseAbs().maxCoeff();
    z = std::move(next);
    f = next_f;
    step = std::min(2.0 * step, 0.5);
    stalls = dz < 1e-13 ? stalls + 1 : 0;
    if (stalls >= 3) break;
  }
  return {z, f};
}

ConstrainedSup sampled_sup(const Operator& op, const std::vector<Vector>& centers, double eps,
                           const ToleranceConfig& cfg) {
  const LpSpace& space = op.domain;
  const detail::RatioObjective obj(op);
  const int n = space.dim;
  std::vector<Vector> pool = sphere_sample(space, std::max(20000, 100 * cfg.n_starts), derive_seed(cfg.seed, 0xD15C));
  for (int i = 0; i < n; ++i) {
    pool.push_back(Vector::Unit(n, i));
    pool.push_back(-Vector::Unit(n, i));
  }
  ConstrainedSup out;
  out.exact = false;
  out.samples = static_cast<int>(pool.size());
  std::vector<detail::Candidate> feasible;
  for (const Vector& z : pool)
    if (min_center_distance(space, z, centers) >= eps) feasible.push_back({z, obj.value(z)});
  out.feasible_samples = static_cast<int>(feasible.size());
  if (feasible.empty()) {
    out.empty = true;
    out.empty_confidence_fraction = 3.0 / out.samples;
    return out;
  }
  std::stable_sort(feasible.begin(), feasible.end(),
                   [](const detail::Candidate& a, const detail::Candidate& b) { return a.value > b.value; });

  // Up to eight well-separated starting points among the best samples.
  std::vector<const detail::Candidate*> starts;
  for (const auto& c : feasible) {
    if (starts.size() >= 8) break;
    bool separated = true;
    for (const auto* s : starts)
      if (pair_distance(space, s->z, c.z) < 0.2) separated = false;
    if (separated) starts.push_back(&c);
  }
  std::vector<detail::Candidate> cands;
  for (const auto* s : starts) cands.push_back(feasible_ascent(obj, space, s->z, centers, eps));
  double sup = -1.0;
  for (const auto& c : cands) sup = std::max(sup, c.value);
  out.sup_value = sup;
  out.witness = pick_witness(space, cands, sup, centers, cfg.tol_opt * std::max(1.0, sup));
  return out;
}

}  // namespace

ConstrainedSup constrained_sup(const Operator& op, const std::vector<Vector>& centers, double eps,
                               bool include_antipodes, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  if (centers.empty()) throw Error(ErrorKind::OutOfRange, "need at least one center");
  std::vector<Vector> all;
  for (const Vector& c : centers) {
    if (c.size() != op.domain.dim) throw Error(ErrorKind::DimensionMismatch, "center does not live in the domain");
    if (!is_unit(op.domain, c, std::max(cfg.tol_unit, 1e-9)))
      throw Error(ErrorKind::NonUnitPoint, "centers must be unit points");
    all.push_back(c);
    if (include_antipodes) all.push_back(-c);
  }
  ConstrainedSup out;
  // Two unit points are never more than 2 apart.
  if (eps > 2.0) {
    out.empty = true;
    return out;
  }
  const detail::RatioObjective obj(op);
  if (op.domain.dim == 1) {
    std::vector<detail::Candidate> cands;
    for (double s : {1.0, -1.0}) {
      const Vector z = Vector::Constant(1, s);
      if (min_center_distance(op.domain, z, all) >= eps) cands.push_back({z, obj.value(z)});
    }
    if (cands.empty()) {
      out.empty = true;
      return out;
    }
    out.sup_value = cands.front().value;
    out.witness = cands.front().z;
    return out;
  }
  if (op.domain.dim == 2) return planar_sup(op, all, eps, cfg);
  return sampled_sup(op, all, eps, cfg);
}

}  // namespace bpb

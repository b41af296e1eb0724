#include "bpb/operator_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sphere_search.hpp"

namespace bpb {

Operator::Operator(Matrix m, LpSpace domain_, LpSpace codomain_)
    : matrix(std::move(m)), domain(domain_), codomain(codomain_) {
  if (matrix.rows() != codomain.dim || matrix.cols() != domain.dim)
    throw Error(ErrorKind::DimensionMismatch, "matrix is " + std::to_string(matrix.rows()) + "x" +
                                                  std::to_string(matrix.cols()) + ", spaces need " +
                                                  std::to_string(codomain.dim) + "x" + std::to_string(domain.dim));
  if (!matrix.allFinite()) throw Error(ErrorKind::OutOfRange, "matrix has non-finite entries");
}

Operator Operator::on(const LpSpace& space, Matrix m) { return Operator(std::move(m), space, space); }

Operator Operator::scaled(double c) const { return Operator(c * matrix, domain, codomain); }

Operator difference(const Operator& a, const Operator& b) {
  if (!(a.domain == b.domain) || !(a.codomain == b.codomain))
    throw Error(ErrorKind::DimensionMismatch, "operators act between different spaces");
  return Operator(a.matrix - b.matrix, a.domain, a.codomain);
}

Vector apply(const Operator& op, const Vector& x) {
  if (x.size() != op.domain.dim) throw Error(ErrorKind::DimensionMismatch, "point does not live in the domain");
  return op.matrix * x;
}

double chord_distance(const LpSpace& space, const Vector& x, const Vector& y) { return norm_of(space, x - y); }

double pair_distance(const LpSpace& space, const Vector& x, const Vector& y) {
  return std::min(lp_norm(x - y, space.p), lp_norm(x + y, space.p));
}

bool is_signed_permutation(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Eigen::Index n = m.rows();
  std::vector<int> col_hits(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int row_hits = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = std::abs(m(i, j));
      if (std::abs(a - 1.0) <= tol) {
        ++row_hits;
        ++col_hits[j];
      } else if (a > tol) {
        return false;
      }
    }
    if (row_hits != 1) return false;
  }
  return std::all_of(col_hits.begin(), col_hits.end(), [](int c) { return c == 1; });
}

namespace detail {

RatioObjective::RatioObjective(const Operator& op)
    : op_(op), scale_(op.matrix.norm()), smooth_(op.domain.is_smooth() && op.codomain.is_smooth()) {
  if (scale_ == 0.0) scale_ = 1.0;
}

double RatioObjective::value(const Vector& z) const {
  return lp_norm(op_.matrix * z, op_.codomain.p) / lp_norm(z, op_.domain.p);
}

Vector RatioObjective::gradient(const Vector& z) const {
  const double n = lp_norm(z, op_.domain.p);
  const Vector y = op_.matrix * z;
  const double v = lp_norm(y, op_.codomain.p);
  return op_.matrix.transpose() * duality_map(y, op_.codomain.p) / n - (v / (n * n)) * duality_map(z, op_.domain.p);
}

std::optional<Vector> RatioObjective::power_step(const Vector& z) const {
  if (!smooth_) return std::nullopt;
  const Vector y = op_.matrix * z;
  if (lp_norm(y, op_.codomain.p) == 0.0) return std::nullopt;
  const Vector w = op_.matrix.transpose() * duality_map(y, op_.codomain.p);
  if (w.cwiseAbs().maxCoeff() == 0.0) return std::nullopt;
  return duality_map(w, op_.domain.dual_exponent());
}

namespace {

bool better(double a, double b, Sense sense) { return sense == Sense::Maximize ? a > b : a < b; }

Vector unit(const Vector& z, double p) { return z / lp_norm(z, p); }

}  // namespace

Candidate local_search(const RatioObjective& obj, Vector start, Sense sense, int max_iter) {
  const double p = obj.op().domain.p;
  Vector z = unit(start, p);
  double f = obj.value(z);
  double step = 0.25;
  int stalls = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (sense == Sense::Minimize && f == 0.0) break;
    Vector best = z;
    double best_f = f;
    if (sense == Sense::Maximize) {
      if (auto y = obj.power_step(z)) {
        const double fy = obj.value(*y);
        if (fy > best_f) {
          best = *y;
          best_f = fy;
        }
      }
    }
    const Vector g = obj.gradient(z) / obj.scale();
    const double gn = g.norm();
    if (gn > 0.0 && std::isfinite(gn)) {
      const Vector dir = (sense == Sense::Maximize ? g : Vector(-g)) / gn;
      bool moved = false;
      for (int k = 0; k < 48; ++k) {
        const Vector y = unit(z + step * dir, p);
        const double fy = obj.value(y);
        if (better(fy, f, sense)) {
          if (better(fy, best_f, sense)) {
            best = y;
            best_f = fy;
          }
          moved = true;
          break;
        }
        step *= 0.5;
      }
      step = moved ? std::min(2.0 * step, 1.0) : 0.25;
    }
    if (!better(best_f, f, sense)) break;
    const double dz = (best - z).cwiseAbs().maxCoeff();
    z = std::move(best);
    f = best_f;
    stalls = dz < 1e-14 ? stalls + 1 : 0;
    if (stalls >= 3) break;
  }
  return {z, f};
}

double angle_of(const Vector& z) { return std::atan2(z[1], z[0]); }

std::vector<Candidate> grid_extrema_2d(const LpSpace& space, const std::function<double(const Vector&)>& f, Sense sense,
                                       int grid_points, double tol) {
  const int n = std::max(grid_points, 8);
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<double> vals(n);
  for (int k = 0; k < n; ++k) vals[k] = f(angle_point(space, h * k));
  int global = 0;
  for (int k = 1; k < n; ++k)
    if (better(vals[k], vals[global], sense)) global = k;

  auto signed_f = [&](double t) {
    const double v = f(angle_point(space, t));
    return sense == Sense::Maximize ? -v : v;
  };
  std::vector<Candidate> out;
  for (int k = 0; k < n; ++k) {
    const double prev = vals[(k + n - 1) % n];
    const double next = vals[(k + 1) % n];
    const bool extremum = better(vals[k], prev, sense) && !better(next, vals[k], sense);
    if (!extremum && k != global) continue;
    const double t = golden_section_minimize(signed_f, h * (k - 1), h * (k + 1), tol);
    Vector z = angle_point(space, t);
    double v = f(z);
    if (better(vals[k], v, sense)) {
      z = angle_point(space, h * k);
      v = vals[k];
    }
    out.push_back({std::move(z), v});
  }
  return out;
}

Candidate polish_2d(const LpSpace& space, const std::function<double(const Vector&)>& f, const Vector& z, Sense sense,
                    double half_width, double tol) {
  const double t0 = angle_of(z);
  auto signed_f = [&](double t) {
    const double v = f(angle_point(space, t));
    return sense == Sense::Maximize ? -v : v;
  };
  const double t = golden_section_minimize(signed_f, t0 - half_width, t0 + half_width, tol);
  Vector refined = angle_point(space, t);
  const double v = f(refined);
  const double v0 = f(z);
  if (better(v0, v, sense)) return {z, v0};
  return {std::move(refined), v};
}

Candidate refine_stationary_2d(const RatioObjective& obj, const Candidate& c, Sense sense, double half_width) {
  const LpSpace& space = obj.op().domain;
  auto slope = [&](double t) {
    const Vector z = angle_point(space, t);
    const Vector j = duality_map(z, space.p);
    const Vector tangent = (Vector(2) << -j[1], j[0]).finished();
    const double s = obj.gradient(z).dot(tangent);
    return sense == Sense::Maximize ? s : -s;
  };
  const double t0 = angle_of(c.z);
  // Widen the bracket until the slope changes sign; golden-section output
  // can sit far from the stationary point when the objective is very flat.
  double lo = t0, hi = t0;
  bool bracketed = false;
  for (double w = half_width; w <= 64.0 * half_width && !bracketed; w *= 4.0) {
    lo = t0 - w;
    hi = t0 + w;
    bracketed = slope(lo) > 0.0 && slope(hi) < 0.0;
  }
  if (!bracketed) return c;
  for (int it = 0; it < 64 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  Vector z = angle_point(space, 0.5 * (lo + hi));
  const double v = obj.value(z);
  if (better(c.value, v, sense)) return c;
  return {std::move(z), v};
}

namespace {

// Exact maximization when one of the norms is polyhedral: a convex function
// on a polytope peaks at a vertex, and |Tz|_inf, |Tz|_1 are maxima of
// finitely many dual pairings.
std::vector<Candidate> extreme_point_candidates(const RatioObjective& obj) {
  const Operator& op = obj.op();
  const double p = op.domain.p;
  const double q = op.codomain.p;
  const int n = op.domain.dim;
  const int m = op.codomain.dim;
  std::vector<Candidate> out;
  auto push = [&](Vector z) {
    z /= lp_norm(z, p);
    out.push_back({z, obj.value(z)});
  };
  auto sign_vectors = [](int len, const std::function<void(const Vector&)>& visit) {
    for (long mask = 0; mask < (1L << (len - 1)); ++mask) {
      Vector s = Vector::Ones(len);
      for (int i = 1; i < len; ++i)
        if (mask & (1L << (i - 1))) s[i] = -1.0;
      visit(s);
    }
  };
  if (p == 1.0) {
    for (int j = 0; j < n; ++j) push(Vector::Unit(n, j));
  } else if (p == kInf && n <= 16) {
    sign_vectors(n, [&](const Vector& s) { push(s); });
  } else if (op.domain.is_smooth() && q == kInf) {
    for (int i = 0; i < m; ++i) {
      const Vector row = op.matrix.row(i).transpose();
      if (row.cwiseAbs().maxCoeff() > 0.0) push(duality_map(row, op.domain.dual_exponent()));
    }
  } else if (op.domain.is_smooth() && q == 1.0 && m <= 16) {
    sign_vectors(m, [&](const Vector& s) {
      const Vector w = op.matrix.transpose() * s;
      if (w.cwiseAbs().maxCoeff() > 0.0) push(duality_map(w, op.domain.dual_exponent()));
    });
  }
  return out;
}

}  // namespace

std::vector<Candidate> sphere_search(const Operator& op, Sense sense, const ToleranceConfig& cfg) {
  const RatioObjective obj(op);
  const int n = op.domain.dim;
  const LpSpace& space = op.domain;
  auto f = [&](const Vector& z) { return obj.value(z); };
  std::vector<Candidate> out;
  if (n == 1) {
    Vector e = Vector::Ones(1);
    out.push_back({e, obj.value(e)});
    return out;
  }
  bool exact = false;
  if (sense == Sense::Maximize) {
    out = extreme_point_candidates(obj);
    exact = !out.empty();
  }
  if (n == 2) {
    auto grid = grid_extrema_2d(space, f, sense, cfg.grid_points, cfg.tol_opt);
    out.insert(out.end(), grid.begin(), grid.end());
  }
  if (exact) return out;

  std::vector<Vector> starts;
  for (int i = 0; i < n; ++i) {
    starts.push_back(Vector::Unit(n, i));
    starts.push_back(-Vector::Unit(n, i));
  }
  // Right singular vectors: exact kernel directions for rank-deficient T and
  // good first guesses otherwise.
  const Eigen::JacobiSVD<Matrix> svd(op.matrix, Eigen::ComputeFullV);
  for (Eigen::Index j = 0; j < svd.matrixV().cols(); ++j) {
    starts.push_back(svd.matrixV().col(j));
    starts.push_back(-svd.matrixV().col(j));
  }
  auto random_starts = sphere_sample(space, cfg.n_starts, derive_seed(cfg.seed, 0x5EA2C4));
  starts.insert(starts.end(), random_starts.begin(), random_starts.end());
  const double half_width = 2.0 * std::numbers::pi / std::max(cfg.grid_points, 8);
  for (const Vector& s : starts) {
    Candidate c = local_search(obj, s, sense);
    if (n == 2) {
      c = polish_2d(space, f, c.z, sense, half_width, cfg.tol_opt);
    }
    out.push_back(std::move(c));
  }
  if (n == 2 && obj.smooth()) {
    // Only near-optimal candidates matter downstream; refine each angle once.
    double best = out.front().value;
    for (const Candidate& c : out)
      if (better(c.value, best, sense)) best = c.value;
    const double band = 1e-6 * std::max(std::abs(best), 1e-300);
    std::vector<std::pair<double, Candidate>> done;
    for (Candidate& c : out) {
      if (std::abs(c.value - best) > band) continue;
      const double t = angle_of(c.z);
      bool cached = false;
      for (const auto& [dt, rc] : done) {
        if (std::abs(std::remainder(t - dt, 2.0 * std::numbers::pi)) < 1e-7) {
          if (better(rc.value, c.value, sense)) c = rc;
          cached = true;
          break;
        }
      }
      if (cached) continue;
      c = refine_stationary_2d(obj, c, sense, 1e-3);
      done.emplace_back(t, c);
    }
  }
  return out;
}

}  // namespace detail

namespace {

using detail::Candidate;
using detail::Sense;

Vector canonical_sign(Vector z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > 1e-9) {
      if (z[i] < 0) z = -z;
      break;
    }
  }
  return z;
}

double power_iteration_norm(const Matrix& m, std::uint64_t seed) {
  const Matrix gram = m.transpose() * m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  Vector v(gram.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = jitter(rng);
  v.normalize();
  double lambda = v.dot(gram * v);
  for (int it = 0; it < 20000; ++it) {
    Vector w = gram * v;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    w /= wn;
    const double next = w.dot(gram * w);
    const double change = (w - v).cwiseAbs().maxCoeff();
    v = std::move(w);
    lambda = next;
    if (change < 1e-15) break;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

struct Searched {
  std::vector<Candidate> candidates;
  NormResult result;
};

Searched search_norm(const Operator& op, const ToleranceConfig& cfg) {
  cfg.validate();
  Searched s;
  NormResult& r = s.result;
  if (op.is_zero()) {
    r.zero_operator = true;
    r.argmax = Vector::Unit(op.domain.dim, 0);
    return s;
  }
  s.candidates = detail::sphere_search(op, Sense::Maximize, cfg);
  const auto best = std::max_element(s.candidates.begin(), s.candidates.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  r.value = best->value;
  r.argmax = canonical_sign(best->z);
  r.exact = (op.domain.p == 1.0) || (op.domain.is_inf() && op.domain.dim <= 16) ||
            (op.domain.is_smooth() && (op.codomain.is_inf() || (op.codomain.p == 1.0 && op.codomain.dim <= 16)));
  if (op.domain.p == 2.0 && op.codomain.p == 2.0) {
    const double sigma = power_iteration_norm(op.matrix, derive_seed(cfg.seed, 0x90E4));
    r.power_check = sigma;
    if (sigma > r.value * (1.0 + 1e-12)) {
      // The singular vector beats every local search; adopt it.
      Eigen::JacobiSVD<Matrix> svd(op.matrix, Eigen::ComputeFullV);
      Vector v = svd.matrixV().col(0);
      const detail::RatioObjective obj(op);
      s.candidates.push_back({v, obj.value(v)});
      r.value = std::max(r.value, obj.value(v));
      r.argmax = canonical_sign(v);
    }
  }
  return s;
}

bool ridge_connected(const detail::RatioObjective& obj, const LpSpace& space, const Vector& a, const Vector& b,
                     double drop) {
  const Vector bb = lp_norm(a - b, space.p) <= lp_norm(a + b, space.p) ? b : Vector(-b);
  const double floor = std::min(obj.value(a), obj.value(bb)) - drop;
  for (int k = 1; k < 16; ++k) {
    const double s = k / 16.0;
    const Vector w = (1.0 - s) * a + s * bb;
    if (lp_norm(w, space.p) == 0.0) return false;
    if (obj.value(w) < floor) return false;
  }
  return true;
}

}  // namespace

NormResult operator_norm(const Operator& op, const ToleranceConfig& cfg) { return search_norm(op, cfg).result; }

MinNormResult min_norm_on_sphere(const Operator& op, const ToleranceConfig& cfg) {
  cfg.validate();
  MinNormResult r;
  if (op.is_zero()) {
    r.argmin = Vector::Unit(op.domain.dim, 0);
    return r;
  }
  const auto cands = detail::sphere_search(op, Sense::Minimize, cfg);
  const auto best = std::min_element(cands.begin(), cands.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  r.value = best->value;
  r.argmin = canonical_sign(best->z);
  return r;
}

AttainmentReport attainment_set(const Operator& op, const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "attainment set of the zero operator");
  const Searched searched = search_norm(op, cfg);
  AttainmentReport rep;
  rep.norm_value = searched.result.value;
  const MinNormResult kmin = min_norm_on_sphere(op, cfg);
  rep.min_norm = std::min(kmin.value, rep.norm_value);
  rep.min_argmin = kmin.argmin;

  const double norm = rep.norm_value;
  if (op.domain == op.codomain) {
    rep.structural_check = true;
    const Matrix scaled = op.matrix / norm;
    if (op.domain.p == 2.0) {
      const Matrix gram = scaled.transpose() * scaled;
      rep.entire_sphere =
          (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= cfg.tol_val;
    } else {
      rep.entire_sphere = is_signed_permutation(scaled, cfg.tol_val);
    }
  } else {
    rep.entire_sphere = norm - rep.min_norm <= cfg.tol_val * norm;
  }
  rep.is_isometry = rep.entire_sphere && std::abs(norm - 1.0) <= cfg.tol_val;
  if (rep.entire_sphere) return rep;

  const detail::RatioObjective obj(op);
  const double threshold = norm - cfg.tol_val * norm;
  std::vector<Candidate> top;
  for (const Candidate& c : searched.candidates)
    if (c.value >= threshold) top.push_back(c);
  std::stable_sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  for (const Candidate& c : top) {
    const Vector z = canonical_sign(c.z);
    bool merged = false;
    for (const Vector& r : rep.pairs) {
      if (pair_distance(op.domain, z, r) <= cfg.tol_merge ||
          ridge_connected(obj, op.domain, r, z, cfg.tol_val * norm)) {
        merged = true;
        break;
      }
    }
    if (!merged) {
      rep.pairs.push_back(z);
      rep.residuals.push_back(std::abs(c.value - norm));
    }
  }
  return rep;
}

bool approx_attainment_member(const Operator& op, double norm_value, double delta, const Vector& z,
                              const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "M_T(delta) needs a nonzero operator");
  if (z.size() != op.domain.dim) throw Error(ErrorKind::DimensionMismatch, "point does not live in the domain");
  if (!is_unit(op.domain, z, cfg.tol_unit)) throw Error(ErrorKind::NonUnitPoint, "membership test needs a unit point");
  if (!(delta > 0.0 && delta < norm_value))
    throw Error(ErrorKind::OutOfRange, "delta must lie in (0, |T|)");
  return lp_norm(op.matrix * z, op.codomain.p) > norm_value - delta;
}

bool approx_attainment_member(const Operator& op, double delta, const Vector& z, const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "M_T(delta) needs a nonzero operator");
  return approx_attainment_member(op, operator_norm(op, cfg).value, delta, z, cfg);
}

SmoothnessCertificate smoothness_certificate(const Operator& op, const AttainmentReport& attain,
                                             const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "smoothness of the zero operator");
  SmoothnessCertificate cert;
  cert.pair_count = attain.entire_sphere ? -1 : static_cast<int>(attain.pairs.size());
  if (attain.entire_sphere || attain.pairs.empty()) return cert;

  const Vector& x0 = attain.pairs.front();
  cert.x0 = x0;
  const auto sup = constrained_sup(op, {x0}, 10.0 * cfg.tol_merge, true, cfg);
  cert.margin = attain.norm_value - (sup.empty ? 0.0 : sup.sup_value);
  if (attain.pairs.size() != 1) return cert;

  if (!op.codomain.is_smooth()) {
    // Only smoothness of the codomain at T x0 matters.
    const Vector y = (op.matrix * x0).cwiseAbs();
    bool smooth_at_image = false;
    if (op.codomain.p == 1.0) {
      smooth_at_image = y.minCoeff() > cfg.tol_val * attain.norm_value;
    } else {
      std::vector<double> sorted(y.data(), y.data() + y.size());
      std::sort(sorted.rbegin(), sorted.rend());
      smooth_at_image = sorted.size() < 2 || sorted[0] - sorted[1] > cfg.tol_val * attain.norm_value;
    }
    if (!smooth_at_image)
      throw Error(ErrorKind::NonSmoothExponent,
                  "codomain " + op.codomain.label() + " is not smooth at T x0; smoothness cannot be certified");
  }
  cert.smooth = cert.margin > 0.0;
  return cert;
}

SmoothnessCertificate smoothness_certificate(const Operator& op, const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "smoothness of the zero operator");
  return smoothness_certificate(op, attainment_set(op, cfg), cfg);
}

BruteForceResult brute_force_norm(const Operator& op, int grid_points, std::uint64_t seed) {
  const int n = op.domain.dim;
  if (n > 4) throw Error(ErrorKind::DimensionMismatch, "brute-force oracle supports dim <= 4");
  if (grid_points < 8) throw Error(ErrorKind::OutOfRange, "brute-force oracle needs at least 8 points");
  BruteForceResult r;
  auto eval = [&](const Vector& z) {
    ++r.evaluations;
    const double v = lp_norm(op.matrix * z, op.codomain.p);
    if (v > r.value || r.argmax.size() == 0) {
      r.value = v;
      r.argmax = z;
    }
    return v;
  };
  if (n == 1) {
    eval(Vector::Ones(1));
    return r;
  }
  if (n >= 3) {
    for (const Vector& z : sphere_sample(op.domain, grid_points, seed)) eval(z);
    return r;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = two_pi / grid_points;
  std::vector<double> vals(grid_points);
  for (int k = 0; k < grid_points; ++k) vals[k] = eval(sphere_point_2d(op.domain, h * k));
  // Zoom into the four best local maxima of the coarse grid, three levels deep.
  std::vector<int> peaks;
  for (int k = 0; k < grid_points; ++k)
    if (vals[k] >= vals[(k + grid_points - 1) % grid_points] && vals[k] >= vals[(k + 1) % grid_points])
      peaks.push_back(k);
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  if (peaks.size() > 4) peaks.resize(4);
  for (int k : peaks) {
    double lo = h * (k - 1);
    double hi = h * (k + 1);
    for (int level = 0; level < 3; ++level) {
      const double step = (hi - lo) / (grid_points - 1);
      double best_t = lo;
      double best_v = -1.0;
      for (int j = 0; j < grid_points; ++j) {
        const double t = lo + step * j;
        const double v = eval(sphere_point_2d(op.domain, t));
        if (v > best_v) {
          best_v = v;
          best_t = t;
        }
      }
      lo = best_t - step;
      hi = best_t + step;
    }
  }
  return r;
}

}  // namespace bpb

#include "bpb/space_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace bpb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::ZeroVector: return "zero vector";
    case ErrorKind::NonSmoothExponent: return "non-smooth exponent";
    case ErrorKind::NonUnitPoint: return "non-unit point";
    case ErrorKind::DegenerateBasis: return "degenerate basis";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::ZeroOperator: return "zero operator";
    case ErrorKind::NotNormOne: return "operator not norm one";
    case ErrorKind::NotMaximizer: return "point is not a maximizer";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::RejectionBudget: return "rejection budget exhausted";
  }
  return "unknown";
}

LpSpace::LpSpace(int dim_, double p_) : dim(dim_), p(p_) {
  if (dim < 1) throw Error(ErrorKind::OutOfRange, "dim must be >= 1");
  if (!(p >= 1.0)) throw Error(ErrorKind::OutOfRange, "p must be >= 1");
}

double LpSpace::dual_exponent() const {
  if (p == 1.0) return kInf;
  if (is_inf()) return 1.0;
  return p / (p - 1.0);
}

std::string LpSpace::label() const {
  std::string ps;
  if (is_inf()) {
    ps = "inf";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    ps = buf;
  }
  return "l_" + ps + "^" + std::to_string(dim);
}

LpSpace parse_space(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidConfig, "space must be p:dim, got '" + text + "'");
  const std::string ps = text.substr(0, colon);
  const std::string ds = text.substr(colon + 1);
  double p = 0.0;
  int dim = 0;
  try {
    p = (ps == "inf" || ps == "Inf" || ps == "INF") ? kInf : std::stod(ps);
    std::size_t used = 0;
    dim = std::stoi(ds, &used);
    if (used != ds.size()) throw std::invalid_argument(ds);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidConfig, "cannot parse space '" + text + "'");
  }
  return LpSpace(dim, p);
}

void ToleranceConfig::validate() const {
  if (!(tol_unit > 0 && tol_val > 0 && tol_merge > 0 && tol_opt > 0))
    throw Error(ErrorKind::InvalidConfig, "tolerances must be positive");
  if (n_starts < 1 || grid_points < 1) throw Error(ErrorKind::InvalidConfig, "n_starts and grid_points must be positive");
}

double lp_norm(const Vector& x, double p) {
  if (x.size() == 0) return 0.0;
  if (p == kInf) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

static void check_dim(const LpSpace& space, const Vector& x) {
  if (x.size() != space.dim)
    throw Error(ErrorKind::DimensionMismatch,
                "point has " + std::to_string(x.size()) + " coordinates, space " + space.label());
}

static void require_smooth(const LpSpace& space) {
  if (!space.is_smooth())
    throw Error(ErrorKind::NonSmoothExponent, space.label() + " is not smooth (needs 1 < p < inf)");
}

double norm_of(const LpSpace& space, const Vector& x) {
  check_dim(space, x);
  return lp_norm(x, space.p);
}

Vector duality_map(const Vector& x, double p) {
  Vector f = Vector::Zero(x.size());
  const double n = lp_norm(x, p);
  if (n == 0.0) return f;
  if (p == kInf) {
    Eigen::Index k = 0;
    x.cwiseAbs().maxCoeff(&k);
    f[k] = x[k] > 0 ? 1.0 : -1.0;
    return f;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double s = x[i] > 0 ? 1.0 : -1.0;
    f[i] = p == 1.0 ? s : s * std::pow(std::abs(x[i]) / n, p - 1.0);
  }
  return f;
}

Vector norming_functional(const LpSpace& space, const Vector& x) {
  check_dim(space, x);
  require_smooth(space);
  if (lp_norm(x, space.p) == 0.0) throw Error(ErrorKind::ZeroVector, "norming functional of zero");
  return duality_map(x, space.p);
}

Vector normalize(const LpSpace& space, const Vector& x) {
  const double n = norm_of(space, x);
  if (n == 0.0) throw Error(ErrorKind::ZeroVector, "cannot normalize zero");
  return x / n;
}

bool is_unit(const LpSpace& space, const Vector& x, double tol_unit) {
  return x.size() == space.dim && std::abs(lp_norm(x, space.p) - 1.0) <= tol_unit;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

BjDetail bj_analysis(const LpSpace& space, const Vector& x, const Vector& y, const ToleranceConfig& cfg) {
  check_dim(space, x);
  check_dim(space, y);
  const double nx = lp_norm(x, space.p);
  const double ny = lp_norm(y, space.p);
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorKind::ZeroVector, "Birkhoff-James orthogonality needs nonzero x and y");
  const Vector xs = x / nx;
  const Vector ys = y / ny;

  BjDetail out;
  // For |lambda| > 2 the triangle inequality already gives ||xs + lambda ys|| > 1.
  auto along = [&](double lambda) { return lp_norm(xs + lambda * ys, space.p); };
  out.argmin_lambda = golden_section_minimize(along, -2.0, 2.0, cfg.tol_opt);
  out.min_norm = std::min(along(out.argmin_lambda), 1.0);
  const bool by_search = out.min_norm >= 1.0 - cfg.tol_val;

  if (space.is_smooth()) {
    out.functional_pairing = std::abs(duality_map(xs, space.p).dot(ys));
    out.used_functional = true;
    out.orthogonal = out.functional_pairing <= cfg.tol_val;
  } else {
    out.functional_pairing = std::numeric_limits<double>::quiet_NaN();
    out.orthogonal = by_search;
  }
  return out;
}

bool bj_orthogonal(const LpSpace& space, const Vector& x, const Vector& y, const ToleranceConfig& cfg) {
  return bj_analysis(space, x, y, cfg).orthogonal;
}

std::vector<Vector> bj_hyperplane(const LpSpace& space, const Vector& x0, const ToleranceConfig& cfg) {
  check_dim(space, x0);
  require_smooth(space);
  if (!is_unit(space, x0, cfg.tol_unit)) throw Error(ErrorKind::NonUnitPoint, "hyperplane base point must be unit");
  const Vector f = duality_map(x0, space.p);
  Eigen::Index k = 0;
  f.cwiseAbs().maxCoeff(&k);
  std::vector<Vector> basis;
  basis.reserve(space.dim - 1);
  for (int j = 0; j < space.dim; ++j) {
    if (j == k) continue;
    Vector h = Vector::Zero(space.dim);
    h[j] = 1.0;
    h[k] = -f[j] / f[k];
    basis.push_back(h / lp_norm(h, space.p));
  }
  return basis;
}

Decomposition decompose(const LpSpace& space, const Vector& z, const Vector& x0, const std::vector<Vector>& hyperplane) {
  check_dim(space, z);
  check_dim(space, x0);
  if (static_cast<int>(hyperplane.size()) + 1 != space.dim)
    throw Error(ErrorKind::DegenerateBasis, "need dim-1 hyperplane vectors");
  Matrix basis(space.dim, space.dim);
  basis.col(0) = x0;
  for (std::size_t j = 0; j < hyperplane.size(); ++j) {
    check_dim(space, hyperplane[j]);
    basis.col(static_cast<Eigen::Index>(j) + 1) = hyperplane[j];
  }
  Eigen::FullPivLU<Matrix> lu(basis);
  lu.setThreshold(1e-12);
  if (lu.rank() < space.dim) throw Error(ErrorKind::DegenerateBasis, "{x0} u H is not a basis");
  const Vector coeff = lu.solve(z);
  Decomposition out;
  out.alpha = coeff[0];
  out.h = basis.rightCols(space.dim - 1) * coeff.tail(space.dim - 1);
  return out;
}

Vector sphere_point_2d(const LpSpace& space, double t) {
  if (space.dim != 2) throw Error(ErrorKind::DimensionMismatch, "2-d parametrization needs dim 2");
  if (space.is_inf()) return angle_point(space, t);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double e = 2.0 / space.p;
  Vector z(2);
  z[0] = std::copysign(std::pow(std::abs(c), e), c);
  z[1] = std::copysign(std::pow(std::abs(s), e), s);
  if (std::abs(c) < 1e-300) z[0] = 0.0;
  if (std::abs(s) < 1e-300) z[1] = 0.0;
  return z;
}

Vector angle_point(const LpSpace& space, double t) {
  Vector z(2);
  z[0] = std::cos(t);
  z[1] = std::sin(t);
  return z / lp_norm(z, space.p);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Vector> sphere_sample(const LpSpace& space, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(std::max(count, 0));
  while (static_cast<int>(out.size()) < count) {
    Vector v(space.dim);
    for (int i = 0; i < space.dim; ++i) v[i] = gauss(rng);
    const double n = lp_norm(v, space.p);
    if (n == 0.0) continue;
    out.push_back(v / n);
  }
  return out;
}

std::vector<Vector> sphere_grid_2d(const LpSpace& space, int count) {
  std::vector<Vector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(sphere_point_2d(space, 2.0 * std::numbers::pi * k / count));
  return out;
}

}  // namespace bpb

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bpb/error.hpp"

namespace bpb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real space R^dim equipped with the l_p norm, 1 <= p <= inf.
struct LpSpace {
  int dim = 2;
  double p = 2.0;

  LpSpace() = default;
  LpSpace(int dim_, double p_);

  bool is_inf() const { return p == kInf; }
  /// Strictly convex and smooth, i.e. 1 < p < inf.
  bool is_smooth() const { return p > 1.0 && p < kInf; }
  double dual_exponent() const;
  std::string label() const;

  friend bool operator==(const LpSpace&, const LpSpace&) = default;
};

/// Parses "p:dim", with p given as a number or "inf".
LpSpace parse_space(const std::string& text);

struct ToleranceConfig {
  double tol_unit = 1e-10;
  double tol_val = 1e-8;
  double tol_merge = 1e-4;
  double tol_opt = 1e-10;
  int n_starts = 64;
  int grid_points = 720;
  std::uint64_t seed = 0;

  void validate() const;
};

double norm_of(const LpSpace& space, const Vector& x);
/// Same as norm_of without the dimension check; used in hot loops.
double lp_norm(const Vector& x, double p);

/// Unit functional in l_q (q the dual exponent) with f(x) = ||x||_p.
Vector norming_functional(const LpSpace& space, const Vector& x);

/// Duality map with subgradient fallback for p in {1, inf}. Never throws on
/// the exponent; returns the zero vector for x = 0.
Vector duality_map(const Vector& x, double p);

Vector normalize(const LpSpace& space, const Vector& x);
bool is_unit(const LpSpace& space, const Vector& x, double tol_unit);

/// Golden-section minimization of a unimodal f on [a, b].
double golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol);

struct BjDetail {
  bool orthogonal = false;
  /// min over lambda of ||x/|x| + lambda y/|y| ||, searched on |lambda| <= 2.
  double min_norm = 0.0;
  double argmin_lambda = 0.0;
  /// |f_x(y)| / |y| for smooth exponents, NaN otherwise.
  double functional_pairing = 0.0;
  bool used_functional = false;
};

BjDetail bj_analysis(const LpSpace& space, const Vector& x, const Vector& y,
                     const ToleranceConfig& cfg = {});
bool bj_orthogonal(const LpSpace& space, const Vector& x, const Vector& y,
                   const ToleranceConfig& cfg = {});

/// Basis of ker f_{x0}: dim-1 unit vectors, each Birkhoff-James orthogonal
/// to x0 from the right.
std::vector<Vector> bj_hyperplane(const LpSpace& space, const Vector& x0,
                                  const ToleranceConfig& cfg = {});

struct Decomposition {
  double alpha = 0.0;
  Vector h;
};

/// Splits z = alpha * x0 + h with h in span(H) by solving in the basis
/// {x0} u H.
Decomposition decompose(const LpSpace& space, const Vector& z, const Vector& x0,
                        const std::vector<Vector>& hyperplane);

/// Exact parametrization of the 2-d unit sphere,
/// t -> (sgn cos t |cos t|^{2/p}, sgn sin t |sin t|^{2/p}); p = inf uses the
/// radial projection of (cos t, sin t).
Vector sphere_point_2d(const LpSpace& space, double t);

/// Radial projection of (cos t, sin t) onto the unit sphere. Uniform in angle,
/// which keeps grids evenly spread for every exponent.
Vector angle_point(const LpSpace& space, double t);

/// Seeded random unit points (Gaussian directions projected radially).
std::vector<Vector> sphere_sample(const LpSpace& space, int count, std::uint64_t seed);

/// Even grid t_k = 2 pi k / count over the exact 2-d parametrization.
std::vector<Vector> sphere_grid_2d(const LpSpace& space, int count);

/// splitmix64 mix of (seed, index); gives schedule-independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace bpb

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpb/space_geometry.hpp"

namespace bpb {

/// Dense linear map between two l_p spaces; matrix is codomain.dim x domain.dim.
struct Operator {
  Matrix matrix;
  LpSpace domain;
  LpSpace codomain;

  Operator() = default;
  Operator(Matrix m, LpSpace domain_, LpSpace codomain_);

  /// Endomorphism of l_p^n.
  static Operator on(const LpSpace& space, Matrix m);

  Operator scaled(double c) const;
  bool is_zero() const { return matrix.cwiseAbs().maxCoeff() == 0.0; }
};

/// A - B; both operators must act between the same spaces.
Operator difference(const Operator& a, const Operator& b);

Vector apply(const Operator& op, const Vector& x);

double chord_distance(const LpSpace& space, const Vector& x, const Vector& y);
/// min(|x - y|, |x + y|): distance between the antipodal pairs {+-x} and {+-y}.
double pair_distance(const LpSpace& space, const Vector& x, const Vector& y);

/// True iff m has exactly one entry of modulus 1 (within tol) per row and
/// column and zeros elsewhere.
bool is_signed_permutation(const Matrix& m, double tol);

struct NormResult {
  double value = 0.0;
  Vector argmax;
  bool zero_operator = false;
  /// Value came from exact extreme-point enumeration (p or q in {1, inf}).
  bool exact = false;
  /// sqrt(lambda_max(T^T T)) by power iteration when both exponents are 2.
  std::optional<double> power_check;
};

NormResult operator_norm(const Operator& op, const ToleranceConfig& cfg = {});

struct MinNormResult {
  double value = 0.0;
  Vector argmin;
};

MinNormResult min_norm_on_sphere(const Operator& op, const ToleranceConfig& cfg = {});

struct AttainmentReport {
  double norm_value = 0.0;
  /// One representative per antipodal pair of M_T. Empty when entire_sphere.
  std::vector<Vector> pairs;
  std::vector<double> residuals;
  double min_norm = 0.0;
  Vector min_argmin;
  /// M_T is the whole sphere (T is a multiple of an isometry).
  bool entire_sphere = false;
  bool is_isometry = false;
  /// Which check decided entire_sphere: structural matrix test or k_T = |T|.
  bool structural_check = false;
};

AttainmentReport attainment_set(const Operator& op, const ToleranceConfig& cfg = {});

/// z in M_T(delta), i.e. |Tz| > |T| - delta with 0 < delta < |T|.
bool approx_attainment_member(const Operator& op, double delta, const Vector& z, const ToleranceConfig& cfg = {});
/// Same, reusing an already computed operator norm.
bool approx_attainment_member(const Operator& op, double norm_value, double delta, const Vector& z,
                              const ToleranceConfig& cfg = {});

struct ConstrainedSup {
  /// The feasible set {z unit : |z - c| >= eps for all centers} is empty.
  bool empty = false;
  double sup_value = 0.0;
  Vector witness;
  /// dim <= 2 uses an exact arc decomposition; otherwise sampling + ascent.
  bool exact = true;
  int samples = 0;
  int feasible_samples = 0;
  /// When empty was decided by sampling: the feasible fraction of the sphere
  /// is below this at 95% confidence (rule of three).
  double empty_confidence_fraction = 0.0;
};

/// sup{ |Tz| : z unit, |z - c| >= eps for all c in centers }.
ConstrainedSup constrained_sup(const Operator& op, const std::vector<Vector>& centers, double eps,
                               bool include_antipodes, const ToleranceConfig& cfg = {});

struct SmoothnessCertificate {
  bool smooth = false;
  std::optional<Vector> x0;
  /// |T| minus the best value outside the +-x0 caps of radius 10 tol_merge.
  double margin = 0.0;
  int pair_count = 0;
};

SmoothnessCertificate smoothness_certificate(const Operator& op, const ToleranceConfig& cfg = {});
SmoothnessCertificate smoothness_certificate(const Operator& op, const AttainmentReport& attain,
                                             const ToleranceConfig& cfg = {});

struct BruteForceResult {
  double value = 0.0;
  Vector argmax;
  long evaluations = 0;
};

/// Test oracle. dim 2: nested zoom grids over the exact parametrization;
/// dim 3..4: `grid_points` random sphere samples. Not used by the main path.
BruteForceResult brute_force_norm(const Operator& op, int grid_points, std::uint64_t seed = 0);

}  // namespace bpb

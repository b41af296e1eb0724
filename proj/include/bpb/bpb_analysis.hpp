#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpb/operator_analysis.hpp"

namespace bpb {

/// delta*(eps, T) = |T| - sup{ |Tz| : z in D(T, eps) }, D(T, eps) being the
/// sphere with the open eps-balls around M_T (and its antipodes) removed.
/// It is the largest eta that works for T in the strong BPB property.
struct BpbModulus {
  double epsilon = 0.0;
  double norm_value = 0.0;
  double delta_star = 0.0;
  double sup_value = 0.0;
  /// Absent when D(T, eps) is empty.
  std::optional<Vector> witness;
  std::vector<Vector> centers;
  bool entire_sphere = false;
  bool exact = true;
};

BpbModulus delta_star(const Operator& op, double eps, const ToleranceConfig& cfg = {});
BpbModulus delta_star(const Operator& op, const AttainmentReport& attain, double eps, const ToleranceConfig& cfg = {});

enum class Verdict { Approx, NotApprox, Inconclusive };

const char* to_string(Verdict v);

struct ApproximationVerdict {
  Verdict verdict = Verdict::NotApprox;
  bool is_approx = false;
  double epsilon = 0.0;
  /// |A - T|.
  double distance = 0.0;
  std::optional<double> delta_found;
  /// sup{ |Tz| : dist(z, +-M_A) >= eps }, absent when that set is empty.
  std::optional<double> sup_value;
  /// A point where T is (almost) normed but A attains its norm nowhere within eps.
  std::optional<Vector> failure_witness;
  std::vector<Vector> approximant_pairs;
  bool approximant_entire_sphere = false;
  bool distance_ok = false;
};

/// Is A a uniform eps-BPB approximation of T? Both operators must have norm one.
ApproximationVerdict is_uniform_eps_bpb_approx(const Operator& target, const Operator& approximant, double eps,
                                               const ToleranceConfig& cfg = {});

/// A_n(alpha x0 + h) = alpha T x0 + (1 - 1/n) T h for h in the hyperplane
/// Birkhoff-James orthogonal to x0.
Operator construct_bpb_perturbation(const Operator& op, const Vector& x0, int n, const ToleranceConfig& cfg = {});

struct FamilyReport {
  double epsilon = 0.0;
  std::vector<BpbModulus> moduli;
  /// inf over members of delta_star.
  double uniform_modulus = 0.0;
  int worst_member_index = 0;
  /// sup{ |Tz| : T in F, z in D(T, eps) } computed jointly (0 if every D is empty).
  double joint_sup = 0.0;
  int joint_sup_member_index = -1;
  /// 1 - joint_sup.
  double joint_modulus = 0.0;
  bool sup_below_one = false;
};

FamilyReport uniform_family_modulus(const std::vector<Operator>& family, double eps, const ToleranceConfig& cfg = {});

struct DecayRow {
  int n = 0;
  double norm_value = 0.0;
  std::vector<Vector> pairs;
  bool smooth = false;
  double smooth_margin = 0.0;
  /// |A_n y0| for the unit y0 in the orthogonal hyperplane.
  double image_of_y0 = 0.0;
  /// min(|y0 - x0|, |y0 + x0|).
  double y0_distance = 0.0;
  double delta_star = 0.0;
};

struct DecayTable {
  LpSpace space;
  Vector x0;
  Vector y0;
  double epsilon = 0.0;
  std::vector<DecayRow> rows;
  std::vector<Operator> family;
};

/// Norm-one smooth operators A_n = (x0-fixing contraction of the orthogonal
/// hyperplane) with delta_star(A_n, eps) -> 0: no eta(eps) works uniformly.
DecayTable sbpbp_counterexample_demo(const LpSpace& space, const Vector& x0, double eps, int n_max,
                                     const ToleranceConfig& cfg = {});

/// All signed permutation matrices on l_p^dim (the isometries when p != 2).
std::vector<Operator> enumerate_isometries(const LpSpace& space, const ToleranceConfig& cfg = {});

struct RigidityTrial {
  int index = 0;
  Operator approximant;
  double distance = 0.0;
  ApproximationVerdict verdict;
  int attainment_points = 0;
  /// min over M_A of dist(witness, .).
  double witness_distance = 0.0;
};

struct RigidityReport {
  LpSpace space;
  Operator isometry;
  /// min |V - S| over distinct isometries.
  double eps1 = 0.0;
  /// 2 (8p - 5).
  int count_bound = 0;
  double epsilon = 0.0;
  ApproximationVerdict self_check;
  std::vector<double> other_isometry_distances;
  std::vector<ApproximationVerdict> other_isometry_verdicts;
  std::vector<RigidityTrial> trials;
  int rejected_samples = 0;
  /// Every assertion of the check held.
  bool all_passed = false;
  std::vector<std::string> failures;
};

/// Isometries of l_p^2 (integer p > 2) admit no nontrivial uniform
/// eps-BPB approximation for small eps: exercised on seeded random
/// norm-one non-isometries in the eps-ball around `isometry`.
RigidityReport isometry_rigidity_check(const LpSpace& space, const Operator& isometry, int trials, std::uint64_t seed,
                                       const ToleranceConfig& cfg = {});

/// A = (T + G eps / (2|G|)) / |T + G eps / (2|G|)| for seeded Gaussian G,
/// retried until A is not a signed permutation and |A - T| < radius.
std::optional<Operator> sample_near(const Operator& op, double radius, std::uint64_t seed, int budget,
                                    const ToleranceConfig& cfg, int* rejected = nullptr);

}  // namespace bpb

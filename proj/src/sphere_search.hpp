#pragma once

// Local search machinery on the unit sphere of an l_p space, shared by the
// operator norm, minimum norm and constrained supremum computations.

#include <functional>
#include <vector>

#include "bpb/operator_analysis.hpp"

namespace bpb::detail {

enum class Sense { Maximize, Minimize };

struct Candidate {
  Vector z;
  double value = 0.0;
};

/// z -> |Tz|_q / |z|_p together with its gradient.
class RatioObjective {
 public:
  explicit RatioObjective(const Operator& op);

  double value(const Vector& z) const;
  /// Gradient of the ratio at a unit z (subgradient for p, q in {1, inf}).
  Vector gradient(const Vector& z) const;
  /// Nonlinear power step z -> J_{p*}(T^T J_q(Tz)); never decreases the ratio.
  std::optional<Vector> power_step(const Vector& z) const;

  /// Frobenius norm of T; gradients are divided by it so iterates do not
  /// depend on the scale of T.
  double scale() const { return scale_; }
  bool smooth() const { return smooth_; }
  const Operator& op() const { return op_; }

 private:
  const Operator& op_;
  double scale_;
  bool smooth_;
};

Candidate local_search(const RatioObjective& obj, Vector start, Sense sense, int max_iter = 4000);

/// Local extrema of theta -> value(angle_point(theta)) on an even grid,
/// each refined by golden-section search between its grid neighbours.
std::vector<Candidate> grid_extrema_2d(const LpSpace& space, const std::function<double(const Vector&)>& f, Sense sense,
                                       int grid_points, double tol);

/// Polishes a 2-d candidate by golden-section search in angle around it.
Candidate polish_2d(const LpSpace& space, const std::function<double(const Vector&)>& f, const Vector& z, Sense sense,
                    double half_width, double tol);

/// Sharpens a 2-d stationary point by bisection on the sign of the
/// tangential derivative; value-based searches stall near sqrt(machine eps)
/// in angle because the objective is flat at its extrema.
Candidate refine_stationary_2d(const RatioObjective& obj, const Candidate& c, Sense sense, double half_width);

/// All candidates found by the multi-start search (plus the 2-d grid).
std::vector<Candidate> sphere_search(const Operator& op, Sense sense, const ToleranceConfig& cfg);

double angle_of(const Vector& z);

}  // namespace bpb::detail

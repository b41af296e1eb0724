#pragma once

#include <cstdint>
#include <optional>

#include "bpb/operator_analysis.hpp"

namespace bpb {

enum class ConstraintKind { NormOne, Smooth, Near };

struct OperatorConstraint {
  ConstraintKind kind = ConstraintKind::NormOne;
  /// Center and radius for Near.
  std::optional<Operator> center;
  double radius = 0.0;

  static OperatorConstraint norm_one() { return {}; }
  static OperatorConstraint smooth() { return {ConstraintKind::Smooth, std::nullopt, 0.0}; }
  static OperatorConstraint near(const Operator& t, double r) { return {ConstraintKind::Near, t, r}; }
};

/// Seeded Gaussian operator normalized to norm one. Smooth draws are
/// rejected until the smoothness certificate holds; Near draws normalize a
/// Gaussian perturbation of the center (see sample_near). Throws
/// RejectionBudget when `budget` draws do not satisfy the constraint.
Operator gen_random_operator(const LpSpace& domain, const LpSpace& codomain, std::uint64_t seed,
                             const OperatorConstraint& constraint = {}, const ToleranceConfig& cfg = {},
                             int budget = 200);

}  // namespace bpb

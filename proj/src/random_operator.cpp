#include "bpb/random_operator.hpp"

#include <random>

#include "bpb/bpb_analysis.hpp"

namespace bpb {

namespace {

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
  return g;
}

bool certified_smooth(const Operator& op, const ToleranceConfig& cfg) {
  try {
    return smoothness_certificate(op, cfg).smooth;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonSmoothExponent) return false;
    throw;
  }
}

}  // namespace

Operator gen_random_operator(const LpSpace& domain, const LpSpace& codomain, std::uint64_t seed,
                             const OperatorConstraint& constraint, const ToleranceConfig& cfg, int budget) {
  cfg.validate();
  if (budget < 1) throw Error(ErrorKind::InvalidConfig, "budget must be >= 1");
  if (constraint.kind == ConstraintKind::Near) {
    if (!constraint.center) throw Error(ErrorKind::InvalidConfig, "near constraint needs a center");
    const Operator& t = *constraint.center;
    if (!(t.domain == domain) || !(t.codomain == codomain))
      throw Error(ErrorKind::DimensionMismatch, "center acts between other spaces");
    if (!(constraint.radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "radius must be positive");
    auto a = sample_near(t, constraint.radius, seed, budget, cfg);
    if (!a) throw Error(ErrorKind::RejectionBudget, "no draw landed inside the ball");
    return *a;
  }

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < budget; ++attempt) {
    Operator g(gaussian(codomain.dim, domain.dim, rng), domain, codomain);
    const double n = operator_norm(g, cfg).value;
    if (n == 0.0) continue;
    Operator a = g.scaled(1.0 / n);
    if (constraint.kind == ConstraintKind::NormOne || certified_smooth(a, cfg)) return a;
  }
  throw Error(ErrorKind::RejectionBudget, "no smooth draw within the budget");
}

}  // namespace bpb

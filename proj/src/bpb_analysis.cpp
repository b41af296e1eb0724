#include "bpb/bpb_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace bpb {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Approx: return "approx";
    case Verdict::NotApprox: return "not_approx";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

void require_norm_one(double value, const ToleranceConfig& cfg, const char* who) {
  if (std::abs(value - 1.0) > cfg.tol_val)
    throw Error(ErrorKind::NotNormOne, std::string(who) + " has norm " + std::to_string(value));
}

}  // namespace

BpbModulus delta_star(const Operator& op, const AttainmentReport& attain, double eps, const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "delta* of the zero operator");
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  BpbModulus m;
  m.epsilon = eps;
  m.norm_value = attain.norm_value;
  m.entire_sphere = attain.entire_sphere;
  if (attain.entire_sphere) {
    m.delta_star = attain.norm_value;
    return m;
  }
  m.centers = attain.pairs;
  const ConstrainedSup sup = constrained_sup(op, attain.pairs, eps, true, cfg);
  m.exact = sup.exact;
  if (sup.empty) {
    m.delta_star = attain.norm_value;
    return m;
  }
  m.sup_value = sup.sup_value;
  m.witness = sup.witness;
  m.delta_star = std::max(0.0, attain.norm_value - sup.sup_value);
  return m;
}

BpbModulus delta_star(const Operator& op, double eps, const ToleranceConfig& cfg) {
  if (op.is_zero()) throw Error(ErrorKind::ZeroOperator, "delta* of the zero operator");
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  return delta_star(op, attainment_set(op, cfg), eps, cfg);
}

ApproximationVerdict is_uniform_eps_bpb_approx(const Operator& target, const Operator& approximant, double eps,
                                               const ToleranceConfig& cfg) {
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  const Operator diff = difference(approximant, target);
  if (target.is_zero() || approximant.is_zero()) throw Error(ErrorKind::NotNormOne, "zero operator");
  require_norm_one(operator_norm(target, cfg).value, cfg, "T");
  const AttainmentReport attain = attainment_set(approximant, cfg);
  require_norm_one(attain.norm_value, cfg, "A");

  ApproximationVerdict v;
  v.epsilon = eps;
  v.distance = diff.is_zero() ? 0.0 : operator_norm(diff, cfg).value;
  v.approximant_pairs = attain.pairs;
  v.approximant_entire_sphere = attain.entire_sphere;

  // |A - T| < eps, with a band of width tol_val around eps left undecided.
  const bool distance_fails = v.distance >= eps + cfg.tol_val;
  const bool distance_unclear = !distance_fails && v.distance > eps - cfg.tol_val;
  v.distance_ok = !distance_fails && !distance_unclear;

  // There is delta > 0 with |Tz| <= 1 - delta whenever z is eps-far from +-M_A.
  bool attainment_ok = true;
  if (attain.entire_sphere) {
    v.delta_found = 1.0;
  } else {
    const ConstrainedSup sup = constrained_sup(target, attain.pairs, eps, true, cfg);
    if (sup.empty) {
      v.delta_found = 1.0;
    } else {
      v.sup_value = sup.sup_value;
      if (sup.sup_value < 1.0 - cfg.tol_val) {
        v.delta_found = 1.0 - sup.sup_value;
      } else {
        attainment_ok = false;
        v.failure_witness = sup.witness;
      }
    }
  }

  if (distance_fails || !attainment_ok)
    v.verdict = Verdict::NotApprox;
  else if (distance_unclear)
    v.verdict = Verdict::Inconclusive;
  else
    v.verdict = Verdict::Approx;
  v.is_approx = v.verdict == Verdict::Approx;
  return v;
}

Operator construct_bpb_perturbation(const Operator& op, const Vector& x0, int n, const ToleranceConfig& cfg) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "n must be >= 1");
  if (!op.domain.is_smooth())
    throw Error(ErrorKind::NonSmoothExponent, op.domain.label() + " has no unique orthogonal hyperplane");
  if (x0.size() != op.domain.dim) throw Error(ErrorKind::DimensionMismatch, "x0 does not live in the domain");
  if (!is_unit(op.domain, x0, cfg.tol_unit)) throw Error(ErrorKind::NonUnitPoint, "x0 must be a unit point");
  require_norm_one(operator_norm(op, cfg).value, cfg, "T");
  const Vector tx0 = op.matrix * x0;
  if (lp_norm(tx0, op.codomain.p) < 1.0 - cfg.tol_val)
    throw Error(ErrorKind::NotMaximizer, "|T x0| < 1; x0 is not in M_T");

  const std::vector<Vector> hyperplane = bj_hyperplane(op.domain, x0, cfg);
  const double shrink = 1.0 - 1.0 / n;
  const int d = op.domain.dim;
  Matrix a(op.codomain.dim, d);
  for (int j = 0; j < d; ++j) {
    const Decomposition parts = decompose(op.domain, Vector::Unit(d, j), x0, hyperplane);
    a.col(j) = parts.alpha * tx0 + shrink * (op.matrix * parts.h);
  }
  return Operator(std::move(a), op.domain, op.codomain);
}

FamilyReport uniform_family_modulus(const std::vector<Operator>& family, double eps, const ToleranceConfig& cfg) {
  if (family.empty()) throw Error(ErrorKind::OutOfRange, "empty family");
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  FamilyReport r;
  r.epsilon = eps;
  for (const Operator& op : family) {
    if (op.is_zero()) throw Error(ErrorKind::NotNormOne, "family member is zero");
    const AttainmentReport attain = attainment_set(op, cfg);
    require_norm_one(attain.norm_value, cfg, "family member");
    r.moduli.push_back(delta_star(op, attain, eps, cfg));
  }
  r.uniform_modulus = r.moduli.front().delta_star;
  for (std::size_t i = 0; i < r.moduli.size(); ++i) {
    const BpbModulus& m = r.moduli[i];
    if (m.delta_star < r.uniform_modulus) {
      r.uniform_modulus = m.delta_star;
      r.worst_member_index = static_cast<int>(i);
    }
    if (m.witness && (r.joint_sup_member_index < 0 || m.sup_value > r.joint_sup)) {
      r.joint_sup = m.sup_value;
      r.joint_sup_member_index = static_cast<int>(i);
    }
  }
  r.joint_modulus = 1.0 - r.joint_sup;
  r.sup_below_one = r.joint_sup < 1.0 - cfg.tol_val;
  return r;
}

DecayTable sbpbp_counterexample_demo(const LpSpace& space, const Vector& x0, double eps, int n_max,
                                     const ToleranceConfig& cfg) {
  if (!space.is_smooth()) throw Error(ErrorKind::NonSmoothExponent, space.label() + " is not smooth");
  if (space.dim < 2) throw Error(ErrorKind::OutOfRange, "needs dim >= 2");
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0, 1]");
  if (n_max < 2) throw Error(ErrorKind::OutOfRange, "n_max must be >= 2");
  if (x0.size() != space.dim || !is_unit(space, x0, cfg.tol_unit))
    throw Error(ErrorKind::NonUnitPoint, "x0 must be a unit point of the space");

  DecayTable table;
  table.space = space;
  table.x0 = x0;
  table.epsilon = eps;
  table.y0 = bj_hyperplane(space, x0, cfg).front();
  const Operator identity = Operator::on(space, Matrix::Identity(space.dim, space.dim));
  for (int n = 2; n <= n_max; ++n) {
    Operator a = construct_bpb_perturbation(identity, x0, n, cfg);
    const AttainmentReport attain = attainment_set(a, cfg);
    const SmoothnessCertificate cert = smoothness_certificate(a, attain, cfg);
    DecayRow row;
    row.n = n;
    row.norm_value = attain.norm_value;
    row.pairs = attain.pairs;
    row.smooth = cert.smooth;
    row.smooth_margin = cert.margin;
    row.image_of_y0 = norm_of(space, apply(a, table.y0));
    row.y0_distance = pair_distance(space, table.y0, x0);
    row.delta_star = delta_star(a, attain, eps, cfg).delta_star;
    table.rows.push_back(std::move(row));
    table.family.push_back(std::move(a));
  }
  return table;
}

std::vector<Operator> enumerate_isometries(const LpSpace& space, const ToleranceConfig& cfg) {
  if (space.p == 2.0) throw Error(ErrorKind::OutOfRange, "l_2 has infinitely many isometries");
  const int n = space.dim;
  if (n > 8) throw Error(ErrorKind::OutOfRange, "enumeration limited to dim <= 8");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Operator> out;
  const auto probes = sphere_sample(space, 64, derive_seed(cfg.seed, 0x150));
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      Matrix m = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) m(i, perm[i]) = (mask & (1 << i)) ? -1.0 : 1.0;
      for (const Vector& z : probes)
        if (std::abs(lp_norm(m * z, space.p) - 1.0) > cfg.tol_val)
          throw Error(ErrorKind::OutOfRange, "signed permutation failed the isometry probe");
      out.push_back(Operator::on(space, std::move(m)));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::optional<Operator> sample_near(const Operator& op, double radius, std::uint64_t seed, int budget,
                                    const ToleranceConfig& cfg, int* rejected) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < budget; ++attempt) {
    Matrix g(op.matrix.rows(), op.matrix.cols());
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
    const Operator noise(g, op.domain, op.codomain);
    const double gn = operator_norm(noise, cfg).value;
    if (gn == 0.0) continue;
    const Operator shifted(op.matrix + g * (radius / (2.0 * gn)), op.domain, op.codomain);
    const double sn = operator_norm(shifted, cfg).value;
    if (sn == 0.0) continue;
    Operator a = shifted.scaled(1.0 / sn);
    const bool isometry_like = is_signed_permutation(a.matrix, cfg.tol_val);
    if (!isometry_like && operator_norm(difference(a, op), cfg).value < radius) return a;
    if (rejected) ++*rejected;
  }
  return std::nullopt;
}

RigidityReport isometry_rigidity_check(const LpSpace& space, const Operator& isometry, int trials, std::uint64_t seed,
                                       const ToleranceConfig& cfg) {
  if (space.dim != 2) throw Error(ErrorKind::OutOfRange, "rigidity check is stated on l_p^2");
  if (!(space.p > 2.0 && space.p < kInf && space.p == std::floor(space.p)))
    throw Error(ErrorKind::OutOfRange, "rigidity check needs an integer p > 2");
  if (!(isometry.domain == space) || !(isometry.codomain == space))
    throw Error(ErrorKind::DimensionMismatch, "isometry must act on the given space");
  if (!is_signed_permutation(isometry.matrix, cfg.tol_val))
    throw Error(ErrorKind::OutOfRange, "T must be a signed permutation");
  if (trials < 0) throw Error(ErrorKind::OutOfRange, "trials must be >= 0");

  RigidityReport r;
  r.space = space;
  r.isometry = isometry;
  auto fail = [&](std::string msg) { r.failures.push_back(std::move(msg)); };

  const std::vector<Operator> isos = enumerate_isometries(space, cfg);
  r.eps1 = kInf;
  for (std::size_t i = 0; i < isos.size(); ++i)
    for (std::size_t j = i + 1; j < isos.size(); ++j)
      r.eps1 = std::min(r.eps1, operator_norm(difference(isos[i], isos[j]), cfg).value);
  r.count_bound = static_cast<int>(2.0 * (8.0 * space.p - 5.0));
  r.epsilon = std::min(r.eps1, 1.0 / r.count_bound) / 2.0;

  r.self_check = is_uniform_eps_bpb_approx(isometry, isometry, r.epsilon, cfg);
  if (!r.self_check.is_approx) fail("T is not a uniform eps-BPB approximation of itself");

  for (const Operator& s : isos) {
    if ((s.matrix - isometry.matrix).cwiseAbs().maxCoeff() == 0.0) continue;
    const double d = operator_norm(difference(s, isometry), cfg).value;
    r.other_isometry_distances.push_back(d);
    ApproximationVerdict v = is_uniform_eps_bpb_approx(isometry, s, r.epsilon, cfg);
    if (v.verdict != Verdict::NotApprox) fail("another isometry was accepted");
    if (d < r.eps1 - cfg.tol_val || !(d > r.epsilon)) fail("isometry distance below eps1");
    r.other_isometry_verdicts.push_back(std::move(v));
  }

  for (int i = 0; i < trials; ++i) {
    auto a = sample_near(isometry, r.epsilon, derive_seed(seed, static_cast<std::uint64_t>(i)), 100, cfg,
                         &r.rejected_samples);
    if (!a) {
      fail("trial " + std::to_string(i) + ": rejection budget exhausted");
      continue;
    }
    RigidityTrial t;
    t.index = i;
    t.distance = operator_norm(difference(*a, isometry), cfg).value;
    t.verdict = is_uniform_eps_bpb_approx(isometry, *a, r.epsilon, cfg);
    t.approximant = std::move(*a);
    const std::string tag = "trial " + std::to_string(i) + ": ";
    if (t.verdict.approximant_entire_sphere) {
      fail(tag + "sampled operator attains its norm everywhere");
      t.attainment_points = -1;
    } else {
      t.attainment_points = 2 * static_cast<int>(t.verdict.approximant_pairs.size());
      if (t.attainment_points > r.count_bound) fail(tag + "attainment count above 2(8p-5)");
    }
    if (t.verdict.verdict != Verdict::NotApprox) fail(tag + "non-isometry accepted");
    if (!t.verdict.failure_witness) {
      fail(tag + "no failure witness");
    } else {
      t.witness_distance = kInf;
      for (const Vector& m : t.verdict.approximant_pairs)
        t.witness_distance = std::min(t.witness_distance, pair_distance(space, *t.verdict.failure_witness, m));
      if (t.witness_distance < r.epsilon - 1e-8) fail(tag + "witness inside an eps-ball of M_A");
    }
    r.trials.push_back(std::move(t));
  }
  r.all_passed = r.failures.empty();
  return r;
}

}  // namespace bpb

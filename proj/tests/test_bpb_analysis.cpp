#include <doctest.h>

#include <cmath>
#include <functional>

#include "bpb/bpb_analysis.hpp"
#include "bpb/random_operator.hpp"

using namespace bpb;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Operator diag(const LpSpace& s, std::initializer_list<double> d) { return Operator::on(s, vec(d).asDiagonal().toDenseMatrix()); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::OutOfRange;
}

const LpSpace l2(2, 2.0);
const LpSpace l3(2, 3.0);

// Independent values computed offline.
constexpr double kDiagDeltaL2 = 0.09213505960412816;  // 1 - sqrt(cos^2 t + sin^2 t / 4), t = 2 asin(1/4)
constexpr double kEps1L3 = 1.5874010519681994;        // min distance between distinct isometries of l_3^2
constexpr double kRigidityEpsL3 = 0.013157894736842105;  // min(eps1, 1/38) / 2

}  // namespace

TEST_CASE("delta star examples") {
  const BpbModulus m = delta_star(diag(l2, {1, 0.5}), 0.5);
  CHECK(std::abs(m.delta_star - kDiagDeltaL2) <= 1e-10);
  REQUIRE(m.witness);
  CHECK(m.delta_star == doctest::Approx(m.norm_value - m.sup_value).epsilon(1e-15));

  for (double p : {1.5, 3.0}) {
    const BpbModulus id = delta_star(Operator::on(LpSpace(3, p), Matrix::Identity(3, 3)), 0.3);
    CHECK(id.delta_star == 1.0);
    CHECK_FALSE(id.witness);
    CHECK(id.entire_sphere);
  }
  const BpbModulus far = delta_star(diag(l2, {1, 0.5}), 2.1);
  CHECK(far.delta_star == 1.0);
  CHECK_FALSE(far.witness);

  CHECK(kind_of([] { delta_star(diag(l2, {0, 0}), 0.5); }) == ErrorKind::ZeroOperator);
  CHECK(kind_of([] { delta_star(diag(l2, {1, 0.5}), 0.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("delta star is nondecreasing in eps") {
  for (const LpSpace& s : {l3, LpSpace(3, 1.5)}) {
    const Operator op = gen_random_operator(s, s, 77);
    double previous = -1.0;
    for (double eps : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
      const BpbModulus m = delta_star(op, eps);
      CHECK(m.delta_star >= previous - 1e-12);
      CHECK(m.delta_star >= 0.0);
      CHECK(m.delta_star <= m.norm_value);
      previous = m.delta_star;
    }
  }
}

TEST_CASE("uniform eps-BPB approximation verdicts") {
  const ApproximationVerdict self = is_uniform_eps_bpb_approx(diag(l3, {1, 0.5}), diag(l3, {1, 0.5}), 0.3);
  CHECK(self.is_approx);
  REQUIRE(self.delta_found);
  CHECK(*self.delta_found > 0.0);

  // The identity is normed at e2 but diag(1, 3/4) attains only at +-e1.
  const ApproximationVerdict v = is_uniform_eps_bpb_approx(diag(l3, {1, 1}), diag(l3, {1, 0.75}), 0.3);
  CHECK_FALSE(v.is_approx);
  CHECK(v.verdict == Verdict::NotApprox);
  CHECK(v.distance == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(v.distance_ok);
  REQUIRE(v.failure_witness);
  CHECK(norm_of(l3, *v.failure_witness) == doctest::Approx(1.0));
  CHECK(pair_distance(l3, *v.failure_witness, vec({1, 0})) >= 0.3);
  CHECK(std::abs(pair_distance(l3, vec({0, 1}), vec({1, 0})) - std::cbrt(2.0)) < 1e-15);

  const ApproximationVerdict w = is_uniform_eps_bpb_approx(diag(l3, {1, 0.5}), diag(l3, {1, 7.0 / 16}), 0.3);
  CHECK(w.is_approx);
  CHECK(w.distance == doctest::Approx(1.0 / 16).epsilon(1e-10));
  REQUIRE(w.approximant_pairs.size() == 1);
  CHECK(pair_distance(l3, w.approximant_pairs[0], vec({1, 0})) < 1e-8);

  // Too far away.
  const ApproximationVerdict x = is_uniform_eps_bpb_approx(diag(l3, {1, 0.5}), diag(l3, {1, -0.5}), 0.3);
  CHECK(x.verdict == Verdict::NotApprox);
  CHECK_FALSE(x.distance_ok);

  // Distance within tol_val of eps is undecided.
  const ApproximationVerdict y = is_uniform_eps_bpb_approx(diag(l3, {1, 0.5}), diag(l3, {1, 0.25}), 0.25);
  CHECK(y.verdict == Verdict::Inconclusive);
  CHECK_FALSE(y.is_approx);

  CHECK(kind_of([] { is_uniform_eps_bpb_approx(diag(l3, {2, 0.5}), diag(l3, {1, 0.5}), 0.3); }) ==
        ErrorKind::NotNormOne);
  CHECK(kind_of([] { is_uniform_eps_bpb_approx(diag(l3, {1, 0.5}), diag(l3, {1, 0.5}), -1.0); }) ==
        ErrorKind::OutOfRange);
}

TEST_CASE("verdict invariants on random operators") {
  for (int k = 0; k < 6; ++k) {
    const Operator t = gen_random_operator(l3, l3, 100 + k);
    const Operator a = gen_random_operator(l3, l3, 200 + k, OperatorConstraint::near(t, 0.2));
    for (double eps : {0.1, 0.3}) {
      const ApproximationVerdict v = is_uniform_eps_bpb_approx(t, a, eps);
      if (v.is_approx) {
        CHECK(v.distance < eps);
        REQUIRE(v.delta_found);
        CHECK(*v.delta_found > 0.0);
      } else if (v.verdict == Verdict::NotApprox) {
        CHECK((v.distance >= eps || v.failure_witness.has_value()));
      }
    }
  }
}

TEST_CASE("perturbation A_n") {
  const Operator id = Operator::on(l3, Matrix::Identity(2, 2));
  const Operator a4 = construct_bpb_perturbation(id, vec({1, 0}), 4);
  CHECK((a4.matrix - diag(l3, {1, 0.75}).matrix).cwiseAbs().maxCoeff() <= 1e-15);
  const Operator a8 = construct_bpb_perturbation(diag(l3, {1, 0.5}), vec({1, 0}), 8);
  CHECK((a8.matrix - diag(l3, {1, 7.0 / 16}).matrix).cwiseAbs().maxCoeff() <= 1e-15);

  const Operator big = construct_bpb_perturbation(diag(l3, {1, 0.5}), vec({1, 0}), 1000000);
  CHECK(operator_norm(difference(big, diag(l3, {1, 0.5}))).value <= 2e-6 + 1e-8);

  // General smooth T: A_n agrees with T((1 - 1/n) I + (1/n) x0 f^T) and fixes x0.
  for (const LpSpace& s : {l3, LpSpace(3, 1.5), LpSpace(3, 4.0)}) {
    const Operator t = gen_random_operator(s, s, 5, OperatorConstraint::smooth());
    const Vector x0 = *smoothness_certificate(t).x0;
    const Vector f = norming_functional(s, x0);
    for (int n : {1, 2, 7, 40}) {
      const Operator a = construct_bpb_perturbation(t, x0, n);
      const Matrix closed = t.matrix * ((1.0 - 1.0 / n) * Matrix::Identity(s.dim, s.dim) + (1.0 / n) * x0 * f.transpose());
      CHECK((a.matrix - closed).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((a.matrix * x0 - t.matrix * x0).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK(operator_norm(difference(t, a)).value <= 2.0 / n + 1e-8);
      CHECK(operator_norm(a).value == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  CHECK(kind_of([&] { construct_bpb_perturbation(id, vec({1, 0}), 0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { construct_bpb_perturbation(diag(LpSpace(2, 1.0), {1, 0.5}), vec({1, 0}), 3); }) ==
        ErrorKind::NonSmoothExponent);
  CHECK(kind_of([] { construct_bpb_perturbation(diag(l3, {1, 0.5}), vec({0, 1}), 3); }) == ErrorKind::NotMaximizer);
  CHECK(kind_of([] { construct_bpb_perturbation(diag(l3, {2, 0.5}), vec({1, 0}), 3); }) == ErrorKind::NotNormOne);
}

TEST_CASE("family modulus") {
  const FamilyReport one = uniform_family_modulus({Operator::on(l3, Matrix::Identity(2, 2))}, 0.5);
  CHECK(one.uniform_modulus == 1.0);

  std::vector<Operator> fam;
  for (int n = 2; n <= 10; ++n) fam.push_back(diag(l3, {1, 1.0 - 1.0 / n}));
  const FamilyReport r = uniform_family_modulus(fam, 0.5);
  CHECK(r.uniform_modulus <= 0.1 + 1e-12);
  CHECK(r.worst_member_index == 8);
  for (const BpbModulus& m : r.moduli) CHECK(r.uniform_modulus <= m.delta_star);
  CHECK(std::abs(r.uniform_modulus - r.joint_modulus) <= 1e-8);
  CHECK(r.sup_below_one);

  const FamilyReport d = uniform_family_modulus({diag(l2, {1, 0.5})}, 0.5);
  CHECK(std::abs(d.uniform_modulus - kDiagDeltaL2) <= 1e-10);

  CHECK(kind_of([] { uniform_family_modulus({}, 0.5); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { uniform_family_modulus({diag(l3, {3, 1})}, 0.5); }) == ErrorKind::NotNormOne);
}

TEST_CASE("decay table of the A_n family") {
  const DecayTable t = sbpbp_counterexample_demo(l3, vec({1, 0}), 0.5, 10);
  REQUIRE(t.rows.size() == 9);
  CHECK(t.rows.front().image_of_y0 == doctest::Approx(0.5).epsilon(1e-14));
  const DecayRow& last = t.rows.back();
  CHECK(last.n == 10);
  CHECK(last.image_of_y0 == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(last.delta_star <= 0.1 + 1e-12);
  for (const DecayRow& row : t.rows) {
    CHECK(row.smooth);
    CHECK(row.pairs.size() == 1);
    CHECK(row.y0_distance >= 1.0 - 1e-12);
    CHECK(row.norm_value == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(kind_of([] { sbpbp_counterexample_demo(LpSpace(2, kInf), vec({1, 0}), 0.5, 10); }) ==
        ErrorKind::NonSmoothExponent);
  CHECK(kind_of([] { sbpbp_counterexample_demo(l3, vec({1, 0}), 1.5, 10); }) == ErrorKind::OutOfRange);
}

TEST_CASE("isometries") {
  const auto i2 = enumerate_isometries(l3);
  CHECK(i2.size() == 8);
  for (const Operator& v : i2) {
    const AttainmentReport a = attainment_set(v);
    CHECK(a.is_isometry);
    CHECK(a.min_norm == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(enumerate_isometries(LpSpace(3, 5.0)).size() == 48);
  CHECK(kind_of([] { enumerate_isometries(l2); }) == ErrorKind::OutOfRange);

  double eps1 = kInf;
  for (std::size_t i = 0; i < i2.size(); ++i)
    for (std::size_t j = i + 1; j < i2.size(); ++j)
      eps1 = std::min(eps1, brute_force_norm(difference(i2[i], i2[j]), 20000).value);
  CHECK(std::abs(eps1 - kEps1L3) <= 1e-9);
}

TEST_CASE("isometry rigidity on l_3^2") {
  const RigidityReport r = isometry_rigidity_check(l3, Operator::on(l3, Matrix::Identity(2, 2)), 10, 3);
  CHECK(std::abs(r.eps1 - kEps1L3) <= 1e-9);
  CHECK(r.count_bound == 38);
  CHECK(std::abs(r.epsilon - kRigidityEpsL3) <= 1e-12);
  CHECK(r.self_check.is_approx);
  CHECK(r.other_isometry_distances.size() == 7);
  CHECK(r.trials.size() == 10);
  CHECK(r.all_passed);

  CHECK(kind_of([] { isometry_rigidity_check(l2, Operator::on(l2, Matrix::Identity(2, 2)), 1, 0); }) ==
        ErrorKind::OutOfRange);
  CHECK(kind_of([] { isometry_rigidity_check(LpSpace(2, 3.5), Operator::on(LpSpace(2, 3.5), Matrix::Identity(2, 2)), 1, 0); }) ==
        ErrorKind::OutOfRange);
  CHECK(kind_of([] { isometry_rigidity_check(l3, diag(l3, {1, 0.5}), 1, 0); }) == ErrorKind::OutOfRange);
}

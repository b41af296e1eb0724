#include <doctest.h>

#include <cmath>
#include <random>

#include "bpb/operator_analysis.hpp"

using namespace bpb;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Matrix mat(int r, int c, std::initializer_list<double> xs) {
  Matrix m(r, c);
  auto it = xs.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

Operator diag_half(double p) { return Operator::on(LpSpace(2, p), mat(2, 2, {1, 0, 0, 0.5})); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::OutOfRange;
}

// Independent values computed offline.
constexpr double kRankOneNormL3 = 1.5874010519681994;  // 2^{2/3}
constexpr double kRankOneArgL3 = 0.7937005259840998;   // 2^{-1/3}
constexpr double kDiagSupL2 = 0.9078649403958718;      // eps = 0.5 around +-e1
constexpr double kMemberValue = 0.9097325786738389;    // |diag(1,1/2) (cos .5, sin .5)|_2

}  // namespace

TEST_CASE("apply and shapes") {
  const Operator id = Operator::on(LpSpace(2, 3.0), Matrix::Identity(2, 2));
  CHECK((apply(id, vec({0.3, -2})) - vec({0.3, -2})).norm() == 0.0);
  CHECK((apply(diag_half(2.0), vec({0, 1})) - vec({0, 0.5})).norm() == 0.0);
  CHECK(apply(Operator::on(LpSpace(2, 2.0), Matrix::Zero(2, 2)), vec({1, 1})).norm() == 0.0);
  CHECK(kind_of([] { Operator(Matrix::Zero(3, 2), LpSpace(2, 2.0), LpSpace(2, 2.0)); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { apply(id, vec({1, 2, 3})); }) == ErrorKind::DimensionMismatch);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK(kind_of([&] { Operator::on(LpSpace(2, 2.0), bad); }) == ErrorKind::OutOfRange);
}

TEST_CASE("operator norm examples") {
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.3, kInf}) {
    const NormResult r = operator_norm(diag_half(p));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    if (p < kInf) CHECK(pair_distance(LpSpace(2, p), r.argmax, vec({1, 0})) < 1e-6);
  }
  const NormResult swap = operator_norm(Operator::on(LpSpace(2, 3.0), mat(2, 2, {0, 1, 1, 0})));
  CHECK(swap.value == doctest::Approx(1.0).epsilon(1e-12));

  const NormResult r = operator_norm(Operator::on(LpSpace(2, 3.0), mat(2, 2, {1, 1, 0, 0})));
  CHECK(std::abs(r.value - kRankOneNormL3) <= 1e-12);
  CHECK(std::abs(std::abs(r.argmax[0]) - kRankOneArgL3) <= 1e-6);
  CHECK(std::abs(std::abs(r.argmax[1]) - kRankOneArgL3) <= 1e-6);

  const NormResult zero = operator_norm(Operator::on(LpSpace(2, 2.0), Matrix::Zero(2, 2)));
  CHECK(zero.value == 0.0);
  CHECK(zero.zero_operator);
}

TEST_CASE("operator norm: Euclidean cross-check and exact polyhedral cases") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Matrix m(3, 3);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    const NormResult r = operator_norm(Operator::on(LpSpace(3, 2.0), m));
    REQUIRE(r.power_check);
    CHECK(r.value == doctest::Approx(*r.power_check).epsilon(1e-10));
    const double sigma = Eigen::JacobiSVD<Matrix>(m).singularValues()[0];
    CHECK(r.value == doctest::Approx(sigma).epsilon(1e-10));

    // l_1 -> l_1: max column sum; l_inf -> l_inf: max row sum.
    const NormResult c1 = operator_norm(Operator::on(LpSpace(3, 1.0), m));
    CHECK(c1.exact);
    CHECK(c1.value == doctest::Approx(m.cwiseAbs().colwise().sum().maxCoeff()).epsilon(1e-14));
    const NormResult ci = operator_norm(Operator::on(LpSpace(3, kInf), m));
    CHECK(ci.value == doctest::Approx(m.cwiseAbs().rowwise().sum().maxCoeff()).epsilon(1e-14));
  }
}

TEST_CASE("oracle equivalence on small samples") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (double p : {1.5, 2.0, 3.0, 7.3}) {
    for (int k = 0; k < 10; ++k) {
      Matrix m(2, 2);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
      const Operator op = Operator::on(LpSpace(2, p), m);
      const double a = operator_norm(op).value;
      const double b = brute_force_norm(op, 10000).value;
      CHECK(std::abs(a - b) <= 1e-6 * a);
      CHECK(a >= b - 1e-12 * a);
    }
  }
  CHECK(brute_force_norm(diag_half(2.0), 720).value == doctest::Approx(1.0).epsilon(1e-5));
  const double rank_one = brute_force_norm(Operator::on(LpSpace(2, 3.0), mat(2, 2, {1, 1, 0, 0})), 100000).value;
  CHECK(std::abs(rank_one - kRankOneNormL3) <= 1e-4);
  for (double p : {1.5, 3.0, 5.0})
    CHECK(std::abs(brute_force_norm(Operator::on(LpSpace(2, p), mat(2, 2, {0, -1, 1, 0})), 720).value - 1.0) <= 1e-9);
  CHECK(kind_of([] { brute_force_norm(Operator::on(LpSpace(5, 2.0), Matrix::Identity(5, 5)), 100); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("minimum norm") {
  for (double p : {1.5, 2.0, 3.0}) {
    const MinNormResult r = min_norm_on_sphere(diag_half(p));
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pair_distance(LpSpace(2, p), r.argmin, vec({0, 1})) < 1e-5);
  }
  const MinNormResult k = min_norm_on_sphere(Operator::on(LpSpace(2, 2.0), mat(2, 2, {1, 1, 0, 0})));
  CHECK(k.value <= 1e-12);
  CHECK(pair_distance(LpSpace(2, 2.0), k.argmin, vec({1, -1}) / std::sqrt(2.0)) < 1e-8);
  const MinNormResult k3 = min_norm_on_sphere(Operator::on(LpSpace(3, 2.0), mat(3, 3, {1, 0, 0, 0, 0.5, 0, 0, 0, 1.0 / 3})));
  CHECK(k3.value == doctest::Approx(1.0 / 3).epsilon(1e-10));
}

TEST_CASE("attainment sets") {
  const AttainmentReport a = attainment_set(diag_half(3.0));
  CHECK_FALSE(a.entire_sphere);
  REQUIRE(a.pairs.size() == 1);
  CHECK(pair_distance(LpSpace(2, 3.0), a.pairs[0], vec({1, 0})) < 1e-8);
  CHECK(a.min_norm == doctest::Approx(0.5));

  const AttainmentReport b = attainment_set(Operator::on(LpSpace(2, 2.0), mat(2, 2, {1, 1, 0, 0})));
  REQUIRE(b.pairs.size() == 1);
  CHECK(pair_distance(LpSpace(2, 2.0), b.pairs[0], vec({1, 1}) / std::sqrt(2.0)) < 1e-8);

  const AttainmentReport c = attainment_set(Operator::on(LpSpace(2, 2.0), Matrix::Identity(2, 2)));
  CHECK(c.is_isometry);
  CHECK(c.entire_sphere);

  // Signed permutations are isometries for every p; their multiples attain everywhere.
  const AttainmentReport d = attainment_set(Operator::on(LpSpace(2, 3.0), mat(2, 2, {0, -2, 2, 0})));
  CHECK(d.entire_sphere);
  CHECK_FALSE(d.is_isometry);

  // I: l_2 -> l_4 attains at +-e1 and +-e2 only.
  const AttainmentReport e = attainment_set(Operator(Matrix::Identity(2, 2), LpSpace(2, 2.0), LpSpace(2, 4.0)));
  CHECK_FALSE(e.entire_sphere);
  CHECK(e.pairs.size() == 2);

  CHECK(kind_of([] { attainment_set(Operator::on(LpSpace(2, 2.0), Matrix::Zero(2, 2))); }) == ErrorKind::ZeroOperator);
}

TEST_CASE("attainment invariants on random operators") {
  const ToleranceConfig cfg;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (double p : {1.5, 3.0}) {
    for (int dim : {2, 3}) {
      const LpSpace s(dim, p);
      for (int k = 0; k < 8; ++k) {
        Matrix m(dim, dim);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
        const Operator op = Operator::on(s, m);
        const AttainmentReport r = attainment_set(op, cfg);
        CHECK(r.min_norm <= r.norm_value);
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
          CHECK(is_unit(s, r.pairs[i], cfg.tol_unit));
          CHECK(norm_of(s, op.matrix * r.pairs[i]) >= r.norm_value - cfg.tol_val);
          for (std::size_t j = i + 1; j < r.pairs.size(); ++j)
            CHECK(pair_distance(s, r.pairs[i], r.pairs[j]) > cfg.tol_merge);
        }
        if (r.is_isometry) CHECK(std::abs(r.min_norm - r.norm_value) <= cfg.tol_val);
      }
    }
  }
}

TEST_CASE("approximate attainment membership") {
  const Operator t = diag_half(2.0);
  const Vector z = vec({std::cos(0.5), std::sin(0.5)});
  CHECK(std::abs(norm_of(LpSpace(2, 2.0), apply(t, z)) - kMemberValue) < 1e-15);
  CHECK(approx_attainment_member(t, 0.1, z));
  CHECK_FALSE(approx_attainment_member(t, 0.1, vec({0, 1})));
  CHECK(approx_attainment_member(t, 1e-6, vec({1, 0})));
  CHECK(approx_attainment_member(t, 0.3, vec({-1, 0})));
  CHECK(kind_of([&] { approx_attainment_member(t, 0.0, z); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { approx_attainment_member(t, 1.0, z); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { approx_attainment_member(t, 0.1, vec({1, 1})); }) == ErrorKind::NonUnitPoint);
}

TEST_CASE("constrained supremum") {
  const Operator t = diag_half(2.0);
  const ConstrainedSup s = constrained_sup(t, {vec({1, 0})}, 0.5, true);
  CHECK_FALSE(s.empty);
  CHECK(s.exact);
  CHECK(std::abs(s.sup_value - kDiagSupL2) <= 1e-10);
  CHECK(pair_distance(LpSpace(2, 2.0), s.witness, vec({1, 0})) >= 0.5 - 1e-12);

  const Operator id = Operator::on(LpSpace(2, 2.0), Matrix::Identity(2, 2));
  CHECK(constrained_sup(id, {vec({1, 0})}, 2.1, true).empty);
  CHECK(constrained_sup(id, {vec({1, 0})}, 0.5, true).sup_value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kind_of([&] { constrained_sup(id, {vec({1, 0})}, 0.0, true); }) == ErrorKind::OutOfRange);

  // Monotone in eps, in dimension 2 and 3.
  for (int dim : {2, 3}) {
    Matrix m = Matrix::Identity(dim, dim) * 0.6;
    m(0, 0) = 1.0;
    m(dim - 1, 0) = 0.2;
    const Operator op = Operator::on(LpSpace(dim, 3.0), m);
    const AttainmentReport a = attainment_set(op);
    double previous = kInf;
    for (double eps : {0.05, 0.1, 0.3, 0.6, 1.0, 1.5}) {
      const ConstrainedSup c = constrained_sup(op, a.pairs, eps, true);
      const double v = c.empty ? -kInf : c.sup_value;
      CHECK(v <= previous + 1e-9);
      previous = v;
    }
  }

  // A cap around every point of a dense set of centers empties the sphere.
  std::vector<Vector> centers;
  for (int k = 0; k < 8; ++k) centers.push_back(angle_point(LpSpace(2, 2.0), k * 0.4));
  CHECK(constrained_sup(id, centers, 0.5, true).empty);
}

TEST_CASE("smoothness certificate") {
  const SmoothnessCertificate a = smoothness_certificate(diag_half(3.0));
  CHECK(a.smooth);
  REQUIRE(a.x0);
  CHECK(pair_distance(LpSpace(2, 3.0), *a.x0, vec({1, 0})) < 1e-8);
  CHECK(a.margin > 0.0);

  CHECK_FALSE(smoothness_certificate(Operator::on(LpSpace(2, 3.0), Matrix::Identity(2, 2))).smooth);
  const SmoothnessCertificate c = smoothness_certificate(Operator::on(LpSpace(2, 2.0), mat(2, 2, {1, 0, 0, 0})));
  CHECK(c.smooth);
  CHECK(pair_distance(LpSpace(2, 2.0), *c.x0, vec({1, 0})) < 1e-8);

  // Two maximizing pairs: not smooth.
  CHECK_FALSE(smoothness_certificate(Operator(Matrix::Identity(2, 2), LpSpace(2, 2.0), LpSpace(2, 4.0))).smooth);

  // Codomain l_inf: T x0 = (1, 1) has a tied maximum coordinate.
  const Operator flat(mat(2, 2, {1, 0, 1, 0}), LpSpace(2, 2.0), LpSpace(2, kInf));
  CHECK(kind_of([&] { smoothness_certificate(flat); }) == ErrorKind::NonSmoothExponent);
  // T x0 = (1, 0.5) is a smooth point of l_inf.
  const Operator ok(mat(2, 2, {1, 0, 0.5, 0}), LpSpace(2, 2.0), LpSpace(2, kInf));
  CHECK(smoothness_certificate(ok).smooth);
  CHECK(kind_of([] { smoothness_certificate(Operator::on(LpSpace(2, 2.0), Matrix::Zero(2, 2))); }) ==
        ErrorKind::ZeroOperator);
}

TEST_CASE("signed permutation detection and distances") {
  CHECK(is_signed_permutation(mat(2, 2, {0, -1, 1, 0}), 1e-12));
  CHECK_FALSE(is_signed_permutation(mat(2, 2, {0, -1, 1, 0.1}), 1e-12));
  CHECK_FALSE(is_signed_permutation(mat(2, 2, {0, 0.9, 1, 0}), 1e-12));
  const LpSpace s(2, 3.0);
  CHECK(pair_distance(s, vec({1, 0}), vec({-1, 0})) == 0.0);
  CHECK(std::abs(pair_distance(s, vec({0, 1}), vec({1, 0})) - std::cbrt(2.0)) < 1e-15);
  // |I - diag(1, -1)| = 2 on every l_p^2.
  for (double p : {1.5, 3.0, 7.0}) {
    const Operator d = Operator::on(LpSpace(2, p), mat(2, 2, {0, 0, 0, 2}));
    CHECK(operator_norm(d).value == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix m(3, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  const Operator op = Operator::on(LpSpace(3, 1.5), m);
  const AttainmentReport a = attainment_set(op);
  const AttainmentReport b = attainment_set(op);
  CHECK(a.norm_value == b.norm_value);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK((a.pairs[i] - b.pairs[i]).norm() == 0.0);
}

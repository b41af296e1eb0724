#include "bpb/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "bpb/random_operator.hpp"

namespace bpb {

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = {"P2.1", "T2.3",  "T2.5",  "T2.6", "T2.8",
                                               "T2.9", "T2.10", "T2.11", "T2.12"};
  return ids;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

Status SuiteReport::overall() const {
  bool unclear = false;
  for (const Assertion& a : assertions) {
    if (a.status == Status::Fail) return Status::Fail;
    if (a.status == Status::Inconclusive) unclear = true;
  }
  return unclear ? Status::Inconclusive : Status::Pass;
}

namespace {

void check_grid(const std::vector<double>& grid, const char* name) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw Error(ErrorKind::InvalidConfig, std::string(name) + " entries must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorKind::InvalidConfig, std::string(name) + " must be strictly increasing");
  }
}

}  // namespace

void SuiteConfig::validate() const {
  const auto& ids = suite_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw Error(ErrorKind::InvalidConfig, "unknown suite '" + id + "'");
  check_grid(eps_grid, "eps grid");
  check_grid(delta_grid, "delta grid");
  for (double d : delta_grid)
    if (!(d < 1.0)) throw Error(ErrorKind::InvalidConfig, "delta grid holds fractions of |T| below 1");
  if (trials < 0) throw Error(ErrorKind::InvalidConfig, "trials must be >= 0");
  if (n_max < 0) throw Error(ErrorKind::InvalidConfig, "n_max must be >= 0");
  if (spaces.empty()) throw Error(ErrorKind::InvalidConfig, "at least one space is required");
  tol.validate();
}

SuiteConfig default_suite_config(const std::string& id) {
  SuiteConfig c;
  c.id = id;
  c.seed = 2024;
  if (id == "P2.1") {
    c.spaces = {LpSpace(2, 1.5), LpSpace(3, 1.5), LpSpace(2, 3.0), LpSpace(3, 3.0)};
    c.delta_grid = {0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.9};
    c.trials = 50;
  } else if (id == "T2.3") {
    c.spaces = {LpSpace(2, 1.5), LpSpace(2, 3.0), LpSpace(3, 1.5), LpSpace(3, 3.0), LpSpace(2, 4.0)};
    c.eps_grid = {0.1, 0.2, 0.5};
    c.trials = 20;
  } else if (id == "T2.5") {
    c.spaces = {LpSpace(2, 3.0), LpSpace(3, 2.0)};
    c.eps_grid = {0.1, 0.5};
    c.trials = 50;
  } else if (id == "T2.6") {
    c.spaces = {LpSpace(2, 3.0)};
    c.eps_grid = {0.1, 0.3};
    c.trials = 5;
  } else if (id == "T2.8") {
    c.spaces = {LpSpace(2, 3.0), LpSpace(2, 1.5), LpSpace(3, 3.0)};
    c.eps_grid = {0.3};
    c.trials = 10;
  } else if (id == "T2.9") {
    c.spaces = {LpSpace(2, 3.0)};
    c.trials = 200;
  } else if (id == "T2.10") {
    c.spaces = {LpSpace(2, 3.0)};
    c.eps_grid = {0.5};
    c.n_max = 50;
  } else if (id == "T2.11") {
    c.spaces = {LpSpace(2, 3.0)};
    c.eps_grid = {0.1, 0.3, 0.5};
    c.trials = 5;
    c.n_max = 50;
  } else if (id == "T2.12") {
    c.spaces = {LpSpace(2, 3.0), LpSpace(3, 2.0), LpSpace(2, 1.5)};
    c.eps_grid = {0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
    c.trials = 10;
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown suite '" + id + "'");
  }
  return c;
}

namespace {

// Tally of one assertion over many cases; keeps the first offending case.
class Check {
 public:
  explicit Check(std::string name) { a_.name = std::move(name); }

  void record(bool ok, const std::function<Json()>& witness) {
    ++a_.checked;
    if (ok) return;
    ++a_.failed;
    if (a_.witness.is_null()) a_.witness = witness();
  }

  void unclear(const std::function<Json()>& witness) {
    ++a_.checked;
    ++a_.inconclusive;
    if (a_.witness.is_null()) a_.witness = witness();
  }

  Assertion finish(std::string detail = {}) {
    if (a_.failed > 0)
      a_.status = Status::Fail;
    else if (a_.inconclusive > 0 || a_.checked == 0)
      a_.status = Status::Inconclusive;
    else
      a_.status = Status::Pass;
    a_.detail = std::to_string(a_.checked) + " checked, " + std::to_string(a_.failed) + " failed";
    if (a_.inconclusive > 0) a_.detail += ", " + std::to_string(a_.inconclusive) + " inconclusive";
    if (!detail.empty()) a_.detail += "; " + detail;
    return std::move(a_);
  }

 private:
  Assertion a_;
};

void require_smooth_spaces(const SuiteConfig& cfg) {
  for (const LpSpace& s : cfg.spaces)
    if (!s.is_smooth()) throw Error(ErrorKind::InvalidConfig, cfg.id + " needs 1 < p < inf, got " + s.label());
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, msg);
}

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
  return g;
}

/// diag(1, 1/2, ..., 1/2) on the space.
Operator half_diagonal(const LpSpace& space) {
  Matrix d = Matrix::Identity(space.dim, space.dim) * 0.5;
  d(0, 0) = 1.0;
  return Operator::on(space, d);
}

Vector smooth_point(const Operator& op, const AttainmentReport& attain, const ToleranceConfig& tol) {
  const SmoothnessCertificate cert = smoothness_certificate(op, attain, tol);
  if (!cert.smooth || !cert.x0) throw Error(ErrorKind::NotMaximizer, "operator is not certified smooth");
  return *cert.x0;
}

Json case_json(const Operator& op) { return to_json(op); }

// ----------------------------------------------------------------------------
// Approximate attainment sets: nesting, symmetry, scaling, intersection,
// strict nesting and injectivity.

void suite_attainment_sets(const SuiteConfig& cfg, SuiteReport& rep) {
  require(!cfg.delta_grid.empty(), "P2.1 needs a delta grid");
  const ToleranceConfig& tol = cfg.tol;
  Check nesting("nesting"), symmetry("symmetry"), scaling("scaling"), intersection("intersection"),
      strict("strict_nesting_witness"), injectivity("injectivity_vs_rank");
  int index = 0;
  int rank_deficient = 0;
  int skipped_strict = 0;
  for (const LpSpace& space : cfg.spaces) {
    for (int t = 0; t < cfg.trials; ++t, ++index) {
      std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
      Matrix m = gaussian(space.dim, space.dim, rng);
      if (t % 5 == 4) {
        // Drop the smallest singular value to exercise the non-injective branch.
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vector s = svd.singularValues();
        s[s.size() - 1] = 0.0;
        m = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
        ++rank_deficient;
      }
      const Operator op = Operator::on(space, m);
      const AttainmentReport attain = attainment_set(op, tol);
      const double norm = attain.norm_value;
      const double kmin = attain.min_norm;

      std::vector<Vector> probes = sphere_sample(space, 24, derive_seed(cfg.seed ^ 0xA11CE, index));
      for (const Vector& x : attain.pairs) probes.push_back(x);
      probes.push_back(attain.min_argmin);
      if (!attain.pairs.empty())
        for (int k = 1; k < 8; ++k) {
          const Vector w = attain.pairs.front() * (1.0 - k / 8.0) + attain.min_argmin * (k / 8.0);
          if (lp_norm(w, space.p) > 1e-12) probes.push_back(normalize(space, w));
        }
      std::vector<double> deltas;
      for (double f : cfg.delta_grid) deltas.push_back(f * norm);
      auto member = [&](const Vector& z, double d) { return approx_attainment_member(op, norm, d, z, tol); };

      for (const Vector& z : probes) {
        const double value = lp_norm(op.matrix * z, space.p);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
          const bool in = member(z, deltas[i]);
          symmetry.record(in == member(-z, deltas[i]), [&] {
            return Json{{"operator", case_json(op)}, {"z", to_json(z)}, {"delta", deltas[i]}};
          });
          if (i + 1 < deltas.size())
            nesting.record(!in || member(z, deltas[i + 1]), [&] {
              return Json{{"operator", case_json(op)}, {"z", to_json(z)}, {"delta1", deltas[i]}, {"delta2", deltas[i + 1]}};
            });
          if (!in)
            intersection.record(value < norm - tol.tol_val, [&] {
              return Json{{"operator", case_json(op)}, {"z", to_json(z)}, {"delta", deltas[i]}, {"value", value}};
            });
        }
      }
      for (const Vector& x : attain.pairs)
        for (double d : deltas)
          intersection.record(member(x, d) && member(-x, d), [&] {
            return Json{{"operator", case_json(op)}, {"x", to_json(x)}, {"delta", d}, {"reason", "M_T point outside M_T(delta)"}};
          });

      // Scaling by c > 0 keeps M_T and maps M_T(delta) to M_cT(c delta).
      const double c = 2.5;
      const Operator scaled = op.scaled(c);
      const AttainmentReport attain_c = attainment_set(scaled, tol);
      bool same = attain_c.entire_sphere == attain.entire_sphere && attain_c.pairs.size() == attain.pairs.size();
      for (const Vector& x : attain.pairs) {
        bool found = false;
        for (const Vector& y : attain_c.pairs) found = found || pair_distance(space, x, y) <= tol.tol_merge;
        same = same && found;
      }
      for (const Vector& z : probes)
        for (double d : deltas)
          same = same && approx_attainment_member(scaled, attain_c.norm_value, c * d, z, tol) == member(z, d);
      scaling.record(same, [&] { return Json{{"operator", case_json(op)}, {"scale", c}}; });

      // Strict nesting: on a log grid pick delta_small < delta_big with
      // delta_big <= |T| - k_T, then walk from M_T towards the minimizer to a
      // point whose value sits between the two thresholds.
      if (attain.entire_sphere || attain.pairs.empty()) {
        ++skipped_strict;
      } else {
        const double gap = norm - kmin;
        std::optional<std::pair<double, double>> grid_pair;
        for (int k = 1; k < 60 && !grid_pair; ++k) {
          const double big = norm * std::pow(10.0, -k / 4.0);
          const double small = norm * std::pow(10.0, -(k + 1) / 4.0);
          if (big <= gap) grid_pair = std::make_pair(small, big);
        }
        bool ok = false;
        Json w;
        if (grid_pair) {
          const auto [small, big] = *grid_pair;
          const double target = norm - 0.5 * (small + big);
          const Vector& x = attain.pairs.front();
          Vector y = attain.min_argmin;
          if (lp_norm(x + y, space.p) < 1e-9) y = -y;
          auto point = [&](double s) { return normalize(space, Vector((1.0 - s) * x + s * y)); };
          double lo = 0.0, hi = 1.0;
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (lp_norm(op.matrix * point(mid), space.p) > target)
              lo = mid;
            else
              hi = mid;
          }
          const Vector z = point(lo);
          ok = member(z, big) && !member(z, small);
          w = Json{{"operator", case_json(op)}, {"delta1", small}, {"delta2", big}, {"z", to_json(z)},
                   {"value", lp_norm(op.matrix * z, space.p)}};
        } else {
          w = Json{{"operator", case_json(op)}, {"reason", "no grid pair below |T| - k_T"}};
        }
        strict.record(ok, [&] { return w; });
      }

      // Injectivity: k_T > 0 iff full rank, and then M_T(delta) is the whole
      // sphere once |T| - delta < k_T.
      const Eigen::JacobiSVD<Matrix> svd(op.matrix);
      const Vector sv = svd.singularValues();
      const bool full_rank = sv[sv.size() - 1] > 1e-8 * sv[0];
      const bool positive_k = kmin > tol.tol_val * norm;
      bool inj_ok = full_rank == positive_k;
      if (positive_k) {
        const double d = norm - 0.5 * kmin;
        for (const Vector& z : probes) inj_ok = inj_ok && member(z, d);
      } else {
        for (double d : deltas) inj_ok = inj_ok && !member(attain.min_argmin, d);
      }
      injectivity.record(inj_ok, [&] {
        return Json{{"operator", case_json(op)}, {"k_T", kmin}, {"sigma_min", sv[sv.size() - 1]}, {"sigma_max", sv[0]}};
      });
    }
  }
  rep.assertions.push_back(nesting.finish());
  rep.assertions.push_back(symmetry.finish());
  rep.assertions.push_back(intersection.finish());
  rep.assertions.push_back(scaling.finish());
  rep.assertions.push_back(strict.finish(std::to_string(skipped_strict) + " isometry multiples skipped"));
  rep.assertions.push_back(injectivity.finish(std::to_string(rank_deficient) + " rank-deficient samples"));
  rep.data = Json{{"operators", index}, {"rank_deficient", rank_deficient}};
}

// ----------------------------------------------------------------------------
// Localization of near-maximizers around M_T for smooth diagonal operators.

void suite_localization(const SuiteConfig& cfg, SuiteReport& rep) {
  require_smooth_spaces(cfg);
  require(!cfg.eps_grid.empty(), "T2.3 needs an eps grid");
  const ToleranceConfig& tol = cfg.tol;
  Check smooth("smooth_single_pair"), positive("delta_star_positive"), bound("cover_sup_bound"),
      monotone("delta_star_monotone"), cover("cover_sampled");
  Json cases = Json::array();
  for (int i = 0; i < cfg.trials; ++i) {
    const LpSpace& space = cfg.spaces[static_cast<std::size_t>(i) % cfg.spaces.size()];
    std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<int> pick(0, space.dim - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    const int k = pick(rng);
    const double c = scale(rng);
    Vector d(space.dim);
    for (int j = 0; j < space.dim; ++j) d[j] = 0.8 * c * unit(rng);
    d[k] = unit(rng) < 0.0 ? -c : c;
    const Operator op = Operator::on(space, d.asDiagonal().toDenseMatrix());
    const AttainmentReport attain = attainment_set(op, tol);
    const SmoothnessCertificate cert = smoothness_certificate(op, attain, tol);
    const Vector ek = Vector::Unit(space.dim, k);
    const bool ok = cert.smooth && cert.x0 && pair_distance(space, *cert.x0, ek) <= tol.tol_merge;
    smooth.record(ok, [&] { return Json{{"operator", case_json(op)}, {"certificate", to_json(cert)}}; });
    if (!ok) continue;
    const Vector& x0 = *cert.x0;
    const auto samples = sphere_sample(space, 2000, derive_seed(cfg.seed ^ 0xC0FE, i));

    double previous = -1.0;
    Json row = Json::array();
    for (double eps : cfg.eps_grid) {
      const BpbModulus m = delta_star(op, attain, eps, tol);
      row.push_back(Json{{"epsilon", eps}, {"delta_star", m.delta_star}});
      positive.record(m.delta_star > 1e-8, [&] { return Json{{"operator", case_json(op)}, {"modulus", to_json(m)}}; });
      const ConstrainedSup cs = constrained_sup(op, {x0}, eps, true, tol);
      bound.record(cs.empty || cs.sup_value <= attain.norm_value - m.delta_star + 1e-8, [&] {
        return Json{{"operator", case_json(op)}, {"epsilon", eps}, {"sup", to_json(cs)}, {"delta_star", m.delta_star}};
      });
      monotone.record(m.delta_star >= previous - 1e-12, [&] {
        return Json{{"operator", case_json(op)}, {"epsilon", eps}, {"delta_star", m.delta_star}, {"previous", previous}};
      });
      previous = m.delta_star;
      // Every sampled z in M_T(delta_star / 2) must lie within eps of +-x0.
      const double threshold = attain.norm_value - 0.5 * m.delta_star;
      for (const Vector& z : samples) {
        if (lp_norm(op.matrix * z, space.p) <= threshold) continue;
        cover.record(pair_distance(space, z, x0) < eps, [&] {
          return Json{{"operator", case_json(op)}, {"epsilon", eps}, {"z", to_json(z)}};
        });
      }
    }
    cases.push_back(Json{{"space", to_json(space)}, {"diagonal", to_json(d)}, {"moduli", row}});
  }
  rep.assertions.push_back(smooth.finish());
  rep.assertions.push_back(positive.finish());
  rep.assertions.push_back(bound.finish());
  rep.assertions.push_back(monotone.finish());
  rep.assertions.push_back(cover.finish());
  rep.data = Json{{"cases", cases}};
}

// ----------------------------------------------------------------------------
// Every norm-one operator is a uniform eps-BPB approximation of itself.

void suite_self_approximation(const SuiteConfig& cfg, SuiteReport& rep) {
  require(!cfg.eps_grid.empty(), "T2.5 needs an eps grid");
  const ToleranceConfig& tol = cfg.tol;
  Check self("self_approximation"), matches("delta_found_matches_modulus");
  double min_delta = kInf;
  int index = 0;
  for (const LpSpace& space : cfg.spaces) {
    for (int t = 0; t < cfg.trials; ++t, ++index) {
      const Operator op = gen_random_operator(space, space, derive_seed(cfg.seed, static_cast<std::uint64_t>(index)),
                                              OperatorConstraint::norm_one(), tol);
      const AttainmentReport attain = attainment_set(op, tol);
      for (double eps : cfg.eps_grid) {
        const ApproximationVerdict v = is_uniform_eps_bpb_approx(op, op, eps, tol);
        const bool ok = v.is_approx && v.delta_found && *v.delta_found >= 1e-8;
        self.record(ok, [&] { return Json{{"operator", case_json(op)}, {"verdict", to_json(v)}}; });
        if (!v.delta_found) continue;
        min_delta = std::min(min_delta, *v.delta_found);
        const BpbModulus m = delta_star(op, attain, eps, tol);
        matches.record(std::abs(*v.delta_found - m.delta_star) <= 1e-8, [&] {
          return Json{{"operator", case_json(op)}, {"delta_found", *v.delta_found}, {"delta_star", m.delta_star}};
        });
      }
    }
  }
  rep.assertions.push_back(self.finish());
  rep.assertions.push_back(matches.finish());
  rep.data = Json{{"operators", index}, {"min_delta_found", number(min_delta)}};
}

// ----------------------------------------------------------------------------
// A_n built from a smooth T is a norm-one smooth uniform eps-BPB
// approximation of T.

void suite_perturbation(const SuiteConfig& cfg, SuiteReport& rep) {
  require_smooth_spaces(cfg);
  require(!cfg.eps_grid.empty(), "T2.6 needs an eps grid");
  const ToleranceConfig& tol = cfg.tol;
  Check norm_one("norm_one"), distance("distance_bound"), fixes("fixes_x0"), single("single_pair"),
      verdict("verdict_approx"), differs("differs_from_T");
  Json rows = Json::array();
  int index = 0;
  for (const LpSpace& space : cfg.spaces) {
    std::vector<Operator> family{half_diagonal(space)};
    for (int t = 0; t < cfg.trials; ++t)
      family.push_back(gen_random_operator(space, space, derive_seed(cfg.seed, static_cast<std::uint64_t>(index++)),
                                           OperatorConstraint::smooth(), tol));
    for (const Operator& op : family) {
      const AttainmentReport attain = attainment_set(op, tol);
      const Vector x0 = smooth_point(op, attain, tol);
      for (double eps : cfg.eps_grid) {
        const int n = static_cast<int>(std::ceil(4.0 / eps - 1e-12));
        const Operator a = construct_bpb_perturbation(op, x0, n, tol);
        const AttainmentReport attain_a = attainment_set(a, tol);
        const double dist = operator_norm(difference(a, op), tol).value;
        auto w = [&] { return Json{{"operator", case_json(op)}, {"x0", to_json(x0)}, {"n", n}, {"approximant", case_json(a)}}; };
        norm_one.record(std::abs(attain_a.norm_value - 1.0) <= 1e-8, w);
        distance.record(dist <= 2.0 / n + 1e-8, w);
        fixes.record((a.matrix * x0 - op.matrix * x0).cwiseAbs().maxCoeff() <= 1e-12, w);
        single.record(!attain_a.entire_sphere && attain_a.pairs.size() == 1 &&
                          pair_distance(space, attain_a.pairs.front(), x0) <= tol.tol_merge,
                      w);
        const ApproximationVerdict v = is_uniform_eps_bpb_approx(op, a, eps, tol);
        verdict.record(v.is_approx, [&] { return Json{{"case", w()}, {"verdict", to_json(v)}}; });
        differs.record(dist > tol.tol_val, w);
        rows.push_back(Json{{"space", to_json(space)}, {"epsilon", eps}, {"n", n}, {"distance", dist},
                            {"pairs", attain_a.pairs.size()}, {"delta_found", v.delta_found ? number(*v.delta_found) : Json(nullptr)}});
      }
    }
  }
  for (auto* c : {&norm_one, &distance, &fixes, &single, &verdict, &differs}) rep.assertions.push_back(c->finish());
  rep.data = Json{{"rows", rows}};
}

// ----------------------------------------------------------------------------
// Smoothness of A_n, and the contrapositive: an operator with two far-apart
// maximizing pairs has no smooth uniform eps-BPB approximation.

void suite_smooth_approximants(const SuiteConfig& cfg, SuiteReport& rep) {
  require_smooth_spaces(cfg);
  require(!cfg.eps_grid.empty(), "T2.8 needs an eps grid");
  const ToleranceConfig& tol = cfg.tol;
  Check smooth("perturbation_smooth"), premise("two_pair_premise"), rejected("smooth_approximants_rejected");
  int index = 0;
  for (const LpSpace& space : cfg.spaces) {
    for (int t = 0; t < cfg.trials; ++t) {
      const Operator op = gen_random_operator(space, space, derive_seed(cfg.seed, static_cast<std::uint64_t>(index++)),
                                              OperatorConstraint::smooth(), tol);
      const Vector x0 = smooth_point(op, attainment_set(op, tol), tol);
      std::vector<int> ns{2};
      for (double eps : cfg.eps_grid) ns.push_back(static_cast<int>(std::ceil(4.0 / eps - 1e-12)));
      for (int n : ns) {
        const Operator a = construct_bpb_perturbation(op, x0, n, tol);
        const SmoothnessCertificate cert = smoothness_certificate(a, tol);
        smooth.record(cert.smooth && cert.x0 && pair_distance(space, *cert.x0, x0) <= tol.tol_merge, [&] {
          return Json{{"operator", case_json(op)}, {"n", n}, {"certificate", to_json(cert)}};
        });
      }
    }
  }

  // I from l_2^2 to l_4^2 attains its norm exactly at +-e1 and +-e2.
  const LpSpace from(2, 2.0), to(2, 4.0);
  const Operator t(Matrix::Identity(2, 2), from, to);
  const AttainmentReport attain = attainment_set(t, tol);
  Json data;
  data["operator"] = case_json(t);
  data["pairs"] = to_json(attain).at("pairs");
  Json verdicts = Json::array();
  for (double eps0 : cfg.eps_grid) {
    double separation = 0.0;
    for (std::size_t i = 0; i < attain.pairs.size(); ++i)
      for (std::size_t j = i + 1; j < attain.pairs.size(); ++j)
        separation = std::max(separation, pair_distance(from, attain.pairs[i], attain.pairs[j]));
    const bool holds = !attain.entire_sphere && attain.pairs.size() >= 2 && separation > 2.0 * eps0;
    premise.record(holds, [&] { return Json{{"epsilon", eps0}, {"attainment", to_json(attain)}}; });
    if (!holds) continue;

    std::vector<Operator> candidates;
    for (int n : {2, 5, 20, 100}) candidates.push_back(construct_bpb_perturbation(t, Vector::Unit(2, 0), n, tol));
    for (int k = 0; k < cfg.trials; ++k) {
      candidates.push_back(gen_random_operator(from, to, derive_seed(cfg.seed ^ 0x27, static_cast<std::uint64_t>(k)),
                                               OperatorConstraint::smooth(), tol));
      // Smooth operators inside the eps0-ball around T.
      for (int attempt = 0; attempt < 20; ++attempt) {
        auto a = sample_near(t, eps0, derive_seed(cfg.seed ^ 0x2701, static_cast<std::uint64_t>(k * 20 + attempt)), 50, tol);
        if (a && smoothness_certificate(*a, tol).smooth) {
          candidates.push_back(std::move(*a));
          break;
        }
      }
    }
    for (const Operator& a : candidates) {
      const ApproximationVerdict v = is_uniform_eps_bpb_approx(t, a, eps0, tol);
      rejected.record(v.verdict == Verdict::NotApprox, [&] {
        return Json{{"epsilon", eps0}, {"approximant", case_json(a)}, {"verdict", to_json(v)}};
      });
      verdicts.push_back(Json{{"epsilon", eps0}, {"distance", v.distance}, {"verdict", to_string(v.verdict)}});
    }
  }
  data["verdicts"] = verdicts;
  rep.assertions.push_back(smooth.finish());
  rep.assertions.push_back(premise.finish());
  rep.assertions.push_back(rejected.finish());
  rep.data = data;
}

// ----------------------------------------------------------------------------
// Isometries of l_p^2, integer p > 2, have no nontrivial approximations.

void suite_rigidity(const SuiteConfig& cfg, SuiteReport& rep) {
  const LpSpace& space = cfg.spaces.front();
  const Operator t = Operator::on(space, Matrix::Identity(space.dim, space.dim));
  const RigidityReport r = isometry_rigidity_check(space, t, cfg.trials, cfg.seed, cfg.tol);
  Check self("self_check"), others("other_isometries_rejected"), trials("non_isometries_rejected"),
      witness("failure_witness_far"), count("attainment_count_bound"), sampled("samples_drawn");
  self.record(r.self_check.is_approx, [&] { return to_json(r.self_check); });
  for (std::size_t i = 0; i < r.other_isometry_verdicts.size(); ++i) {
    const double d = r.other_isometry_distances[i];
    others.record(r.other_isometry_verdicts[i].verdict == Verdict::NotApprox && d >= r.eps1 - cfg.tol.tol_val &&
                      d > r.epsilon,
                  [&] { return to_json(r.other_isometry_verdicts[i]); });
  }
  int max_points = 0;
  double min_witness = kInf;
  double max_distance = 0.0;
  for (const RigidityTrial& tr : r.trials) {
    auto w = [&] {
      return Json{{"index", tr.index}, {"approximant", case_json(tr.approximant)}, {"verdict", to_json(tr.verdict)}};
    };
    trials.record(tr.verdict.verdict == Verdict::NotApprox && tr.distance < r.epsilon, w);
    witness.record(tr.verdict.failure_witness.has_value() && tr.witness_distance >= r.epsilon - 1e-8, w);
    count.record(tr.attainment_points > 0 && tr.attainment_points <= r.count_bound, w);
    max_points = std::max(max_points, tr.attainment_points);
    min_witness = std::min(min_witness, tr.witness_distance);
    max_distance = std::max(max_distance, tr.distance);
  }
  sampled.record(static_cast<int>(r.trials.size()) == cfg.trials, [&] { return Json(r.failures); });
  for (auto* c : {&self, &others, &trials, &witness, &count, &sampled}) rep.assertions.push_back(c->finish());
  rep.data = Json{{"eps1", r.eps1},
                  {"count_bound", r.count_bound},
                  {"epsilon", r.epsilon},
                  {"trials", r.trials.size()},
                  {"rejected_samples", r.rejected_samples},
                  {"max_attainment_points", max_points},
                  {"min_witness_distance", number(min_witness)},
                  {"max_distance", max_distance},
                  {"failures", r.failures}};
}

// ----------------------------------------------------------------------------
// delta_star(A_n) -> 0 along the A_n family of the identity.

void suite_decay(const SuiteConfig& cfg, SuiteReport& rep) {
  require_smooth_spaces(cfg);
  require(!cfg.eps_grid.empty(), "T2.10 needs an eps grid");
  require(cfg.n_max >= 2, "T2.10 needs n_max >= 2");
  const ToleranceConfig& tol = cfg.tol;
  const LpSpace& space = cfg.spaces.front();
  const double eps = cfg.eps_grid.front();
  const Vector x0 = Vector::Unit(space.dim, 0);
  const DecayTable table = sbpbp_counterexample_demo(space, x0, eps, cfg.n_max, tol);
  Check norm_one("norm_one"), smooth("smooth"), decay("delta_star_at_most_1_over_n"), image("image_of_y0"),
      far("y0_far_from_x0"), uniform("no_uniform_modulus");
  for (const DecayRow& row : table.rows) {
    auto w = [&] { return to_json(table).at("rows").at(static_cast<std::size_t>(row.n - 2)); };
    norm_one.record(std::abs(row.norm_value - 1.0) <= 1e-8, w);
    smooth.record(row.smooth && row.pairs.size() == 1 && pair_distance(space, row.pairs.front(), x0) <= tol.tol_merge, w);
    decay.record(row.delta_star <= 1.0 / row.n + 1e-6, w);
    image.record(std::abs(row.image_of_y0 - (1.0 - 1.0 / row.n)) <= 1e-9, w);
    far.record(row.y0_distance >= 1.0 - 1e-12, w);
  }
  const FamilyReport fam = uniform_family_modulus(table.family, eps, tol);
  uniform.record(fam.uniform_modulus <= 1.0 / cfg.n_max + 1e-6, [&] {
    return Json{{"uniform_modulus", fam.uniform_modulus}, {"worst_member_index", fam.worst_member_index}};
  });
  for (auto* c : {&norm_one, &smooth, &decay, &image, &far, &uniform}) rep.assertions.push_back(c->finish());
  Json rows = Json::array();
  for (const DecayRow& row : table.rows)
    rows.push_back(Json{{"n", row.n}, {"norm", row.norm_value}, {"image_of_y0", row.image_of_y0},
                        {"delta_star", row.delta_star}, {"smooth", row.smooth}, {"margin", row.smooth_margin}});
  rep.data = Json{{"space", to_json(space)}, {"epsilon", eps}, {"x0", to_json(x0)}, {"y0", to_json(table.y0)},
                  {"rows", rows}, {"uniform_modulus", fam.uniform_modulus},
                  {"worst_member_n", fam.worst_member_index + 2}};
}

// ----------------------------------------------------------------------------
// Family moduli: the infimum of the member moduli against 1 minus the joint
// supremum, computed independently here from the attainment sets.

void suite_family(const SuiteConfig& cfg, SuiteReport& rep) {
  require_smooth_spaces(cfg);
  require(!cfg.eps_grid.empty(), "T2.11 needs an eps grid");
  require(cfg.n_max >= 2, "T2.11 needs n_max >= 2");
  const ToleranceConfig& tol = cfg.tol;
  const LpSpace& space = cfg.spaces.front();
  Check agree("paths_agree"), positivity("positivity_matches_sup_below_one"), bound("modulus_below_members");

  std::vector<Operator> smooth_ops{half_diagonal(space)};
  for (int t = 0; t < cfg.trials; ++t)
    smooth_ops.push_back(gen_random_operator(space, space, derive_seed(cfg.seed, static_cast<std::uint64_t>(t)),
                                             OperatorConstraint::smooth(), tol));
  std::vector<Vector> x0s;
  for (const Operator& op : smooth_ops) x0s.push_back(smooth_point(op, attainment_set(op, tol), tol));
  const Operator identity = Operator::on(space, Matrix::Identity(space.dim, space.dim));
  std::vector<Operator> decay;
  for (int n = 2; n <= cfg.n_max; ++n)
    decay.push_back(construct_bpb_perturbation(identity, Vector::Unit(space.dim, 0), n, tol));

  Json rows = Json::array();
  for (double eps : cfg.eps_grid) {
    std::vector<Operator> perturbed = smooth_ops;
    const int n = static_cast<int>(std::ceil(4.0 / eps - 1e-12));
    for (std::size_t i = 0; i < smooth_ops.size(); ++i)
      perturbed.push_back(construct_bpb_perturbation(smooth_ops[i], x0s[i], n, tol));
    const std::vector<std::pair<std::string, const std::vector<Operator>*>> families = {
        {"perturbation", &perturbed}, {"decay", &decay}};
    for (const auto& [name, members] : families) {
      const FamilyReport fam = uniform_family_modulus(*members, eps, tol);
      double joint = 0.0;
      for (const Operator& op : *members) {
        const AttainmentReport attain = attainment_set(op, tol);
        if (attain.entire_sphere) continue;
        const ConstrainedSup cs = constrained_sup(op, attain.pairs, eps, true, tol);
        if (!cs.empty) joint = std::max(joint, cs.sup_value);
      }
      const double joint_modulus = 1.0 - joint;
      auto w = [&] {
        return Json{{"family", name}, {"epsilon", eps}, {"uniform_modulus", fam.uniform_modulus},
                    {"joint_modulus", joint_modulus}, {"report_joint_modulus", fam.joint_modulus}};
      };
      agree.record(std::abs(fam.uniform_modulus - joint_modulus) <= 1e-8 &&
                       std::abs(fam.joint_modulus - joint_modulus) <= 1e-12,
                   w);
      const bool positive = fam.uniform_modulus > tol.tol_val;
      const bool below = joint < 1.0 - tol.tol_val;
      positivity.record(positive == below && below == fam.sup_below_one, w);
      bool below_members = true;
      for (const BpbModulus& m : fam.moduli) below_members = below_members && fam.uniform_modulus <= m.delta_star;
      bound.record(below_members, w);
      rows.push_back(w());
    }
  }
  for (auto* c : {&agree, &positivity, &bound}) rep.assertions.push_back(c->finish());
  rep.data = Json{{"families", rows}};
}

// ----------------------------------------------------------------------------
// delta_star is positive and nondecreasing in eps; the constrained supremum
// is nonincreasing.

void suite_modulus_profile(const SuiteConfig& cfg, SuiteReport& rep) {
  require(!cfg.eps_grid.empty(), "T2.12 needs an eps grid");
  const ToleranceConfig& tol = cfg.tol;
  Check positive("delta_star_positive"), monotone("delta_star_monotone"), sup_monotone("sup_monotone");
  Json profiles = Json::array();
  int index = 0;
  for (const LpSpace& space : cfg.spaces) {
    for (int t = 0; t < cfg.trials; ++t, ++index) {
      const Operator op = gen_random_operator(space, space, derive_seed(cfg.seed, static_cast<std::uint64_t>(index)),
                                              OperatorConstraint::norm_one(), tol);
      const AttainmentReport attain = attainment_set(op, tol);
      double previous = -1.0;
      double previous_sup = kInf;
      Json profile = Json::array();
      for (double eps : cfg.eps_grid) {
        const BpbModulus m = delta_star(op, attain, eps, tol);
        const double sup = m.witness ? m.sup_value : -kInf;
        auto w = [&] {
          return Json{{"operator", case_json(op)}, {"epsilon", eps}, {"modulus", to_json(m)}, {"previous", number(previous)}};
        };
        positive.record(m.delta_star > 1e-8, w);
        monotone.record(m.delta_star >= previous - 1e-12, w);
        sup_monotone.record(sup <= previous_sup + 1e-12, w);
        previous = m.delta_star;
        previous_sup = sup;
        profile.push_back(m.delta_star);
      }
      profiles.push_back(Json{{"space", to_json(space)}, {"delta_star", profile}});
    }
  }
  for (auto* c : {&positive, &monotone, &sup_monotone}) rep.assertions.push_back(c->finish());
  rep.data = Json{{"eps_grid", cfg.eps_grid}, {"profiles", profiles}};
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = cfg.id;
  rep.config = cfg;
  rep.data = Json::object();
  if (cfg.id == "P2.1")
    suite_attainment_sets(cfg, rep);
  else if (cfg.id == "T2.3")
    suite_localization(cfg, rep);
  else if (cfg.id == "T2.5")
    suite_self_approximation(cfg, rep);
  else if (cfg.id == "T2.6")
    suite_perturbation(cfg, rep);
  else if (cfg.id == "T2.8")
    suite_smooth_approximants(cfg, rep);
  else if (cfg.id == "T2.9")
    suite_rigidity(cfg, rep);
  else if (cfg.id == "T2.10")
    suite_decay(cfg, rep);
  else if (cfg.id == "T2.11")
    suite_family(cfg, rep);
  else
    suite_modulus_profile(cfg, rep);
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace bpb

// Command-line front end for norms, attainment sets, BPB moduli and the
// verification suites.
//
// Exit codes: 0 true / pass, 1 false / fail, 2 inconclusive, 3 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bpb/suites.hpp"

namespace {

constexpr int kUsage = 3;

struct Common {
  std::string space = "2:2";
  std::string codomain;
  std::string matrix;
  std::string matrix_file;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bpb::ToleranceConfig tol;
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("BANACH_BPB_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw bpb::Error(bpb::ErrorKind::InvalidConfig, "BANACH_BPB_SEED must be an unsigned integer");
  return v;
}

std::optional<std::uint64_t> resolve_seed(const Common& c) { return c.seed ? c.seed : env_seed(); }

bpb::ToleranceConfig tolerances(const Common& c) {
  bpb::ToleranceConfig cfg = c.tol;
  if (auto s = resolve_seed(c)) cfg.seed = *s;
  return cfg;
}

bpb::Operator load_operator(const std::string& text, const std::string& file, const bpb::LpSpace& domain,
                            const std::optional<bpb::LpSpace>& codomain) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw bpb::Error(bpb::ErrorKind::InvalidConfig, "cannot open " + file);
    bpb::Json j;
    try {
      j = bpb::Json::parse(in);
    } catch (const std::exception& e) {
      throw bpb::Error(bpb::ErrorKind::InvalidConfig, std::string("bad JSON in ") + file + ": " + e.what());
    }
    if (j.is_array()) return bpb::Operator(bpb::matrix_from_json(j), domain, codomain.value_or(domain));
    return bpb::operator_from_json(j);
  }
  if (text.empty()) throw bpb::Error(bpb::ErrorKind::InvalidConfig, "give --matrix or --matrix-file");
  return bpb::Operator(bpb::parse_matrix(text), domain, codomain.value_or(domain));
}

bpb::Operator load_operator(const Common& c) {
  const bpb::LpSpace domain = bpb::parse_space(c.space);
  std::optional<bpb::LpSpace> codomain;
  if (!c.codomain.empty()) codomain = bpb::parse_space(c.codomain);
  return load_operator(c.matrix, c.matrix_file, domain, codomain);
}

void add_tolerances(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol-val", c.tol.tol_val, "value tolerance")->capture_default_str();
  cmd->add_option("--tol-merge", c.tol.tol_merge, "cluster merge radius")->capture_default_str();
  cmd->add_option("--n-starts", c.tol.n_starts, "random starts per search")->capture_default_str();
  cmd->add_option("--grid-points", c.tol.grid_points, "2-d angle grid size")->capture_default_str();
}

void add_common(CLI::App* cmd, Common& c, bool with_matrix = true) {
  add_tolerances(cmd, c);
  cmd->add_option("--space", c.space, "domain as p:dim, p a number or inf")->capture_default_str();
  if (with_matrix) {
    cmd->add_option("--codomain", c.codomain, "codomain as p:dim (defaults to the domain)");
    cmd->add_option("--matrix", c.matrix, "operator rows, e.g. \"1,0;0,0.5\"");
    cmd->add_option("--matrix-file", c.matrix_file, "operator as JSON");
  }
  cmd->add_option("--seed", c.seed, "seed (falls back to BANACH_BPB_SEED)");
  cmd->add_flag("--json", c.json, "machine-readable output");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(const bpb::Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

void emit(const Common& c, const bpb::Json& j, const std::string& text) {
  if (c.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<double> parse_grid(const std::string& s) {
  const bpb::Vector v = bpb::parse_vector(s);
  return {v.data(), v.data() + v.size()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm attainment and Bishop-Phelps-Bollobas moduli of operators between l_p spaces"};
  app.require_subcommand(1);

  Common c;
  double eps = 0.0;
  double delta = 0.0;
  int n = 0;
  std::string point, other, approx, approx_file, x0_text;

  auto* norm = app.add_subcommand("norm", "operator norm and a maximizer");
  add_common(norm, c);
  auto* attain = app.add_subcommand("attain", "norm attainment set, minimum norm, isometry flag");
  add_common(attain, c);
  auto* member = app.add_subcommand("member", "is z in M_T(delta)? exit 0 yes, 1 no");
  add_common(member, c);
  member->add_option("--delta", delta, "delta in (0, |T|)")->required();
  member->add_option("--point", point, "unit point, e.g. \"0.6,0.8\"")->required();
  auto* bj = app.add_subcommand("bj", "is x Birkhoff-James orthogonal to y? exit 0 yes, 1 no");
  add_common(bj, c, false);
  bj->add_option("--x", point, "x")->required();
  bj->add_option("--y", other, "y")->required();
  auto* ds = app.add_subcommand("delta-star", "BPB modulus delta*(eps, T)");
  add_common(ds, c);
  ds->add_option("--eps", eps, "eps > 0")->required();
  auto* check = app.add_subcommand("bpb-check", "is A a uniform eps-BPB approximation of T? exit 0/1/2");
  add_common(check, c);
  check->add_option("--approx", approx, "A as rows");
  check->add_option("--approx-file", approx_file, "A as JSON");
  check->add_option("--eps", eps, "eps > 0")->required();
  auto* perturb = app.add_subcommand("perturb", "A_n fixing x0 and shrinking its orthogonal hyperplane");
  add_common(perturb, c);
  perturb->add_option("--x0", x0_text, "unit maximizer x0")->required();
  perturb->add_option("--n", n, "n >= 1")->required();
  auto* isos = app.add_subcommand("isometries", "signed permutation isometries of l_p^dim");
  add_common(isos, c, false);

  std::string suite_id, eps_grid, delta_grid, spaces;
  std::optional<int> trials, n_max;
  bool timing = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite; exit 0 pass, 1 fail, 2 inconclusive");
  verify->add_option("suite", suite_id, "suite id")->required()->check(CLI::IsMember(bpb::suite_ids()));
  verify->add_option("--spaces", spaces, "override spaces, e.g. \"3:2,1.5:3\"");
  verify->add_option("--eps", eps_grid, "override eps grid, e.g. \"0.1,0.5\"");
  verify->add_option("--delta", delta_grid, "override delta grid (fractions of |T|)");
  verify->add_option("--trials", trials, "override trial count");
  verify->add_option("--n-max", n_max, "override n_max");
  verify->add_option("--seed", c.seed, "seed (falls back to BANACH_BPB_SEED)");
  verify->add_flag("--json", c.json, "JSON report");
  verify->add_flag("--timing", timing, "include wall-clock time");
  add_tolerances(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const bpb::ToleranceConfig cfg = tolerances(c);
    if (*norm) {
      const bpb::Operator op = load_operator(c);
      const bpb::NormResult r = bpb::operator_norm(op, cfg);
      emit(c, bpb::to_json(r), "norm: " + fmt(r.value) + "\nargmax: " + fmt(r.argmax) + "\n");
      return 0;
    }
    if (*attain) {
      const bpb::Operator op = load_operator(c);
      const bpb::AttainmentReport r = bpb::attainment_set(op, cfg);
      std::string text = "norm: " + fmt(r.norm_value) + "\nmin norm: " + fmt(r.min_norm) + "\n";
      if (r.entire_sphere)
        text += "attained on the entire sphere\n";
      else
        for (const bpb::Vector& x : r.pairs) text += "pair: +-" + fmt(x) + "\n";
      text += std::string("isometry: ") + (r.is_isometry ? "yes" : "no") + "\n";
      bpb::Json j = bpb::to_json(r);
      j["config"] = bpb::to_json(cfg);
      emit(c, j, text);
      return 0;
    }
    if (*member) {
      const bpb::Operator op = load_operator(c);
      const bpb::Vector z = bpb::parse_vector(point);
      const bool in = bpb::approx_attainment_member(op, delta, z, cfg);
      emit(c, bpb::Json{{"member", in}}, std::string(in ? "member" : "not a member") + "\n");
      return in ? 0 : 1;
    }
    if (*bj) {
      const bpb::LpSpace space = bpb::parse_space(c.space);
      const bpb::BjDetail d = bpb::bj_analysis(space, bpb::parse_vector(point), bpb::parse_vector(other), cfg);
      emit(c, bpb::to_json(d), std::string(d.orthogonal ? "orthogonal" : "not orthogonal") + "\n");
      return d.orthogonal ? 0 : 1;
    }
    if (*ds) {
      const bpb::Operator op = load_operator(c);
      const bpb::BpbModulus m = bpb::delta_star(op, eps, cfg);
      std::string text = "delta*: " + fmt(m.delta_star) + "\n";
      text += m.witness ? "sup: " + fmt(m.sup_value) + " at " + fmt(*m.witness) + "\n" : "feasible set empty\n";
      bpb::Json j = bpb::to_json(m);
      j["config"] = bpb::to_json(cfg);
      emit(c, j, text);
      return 0;
    }
    if (*check) {
      const bpb::Operator t = load_operator(c);
      const bpb::Operator a = load_operator(approx, approx_file, t.domain, t.codomain);
      const bpb::ApproximationVerdict v = bpb::is_uniform_eps_bpb_approx(t, a, eps, cfg);
      std::string text = std::string("verdict: ") + bpb::to_string(v.verdict) + "\ndistance: " + fmt(v.distance) + "\n";
      if (v.delta_found) text += "delta: " + fmt(*v.delta_found) + "\n";
      if (v.failure_witness) text += "failure witness: " + fmt(*v.failure_witness) + "\n";
      bpb::Json j = bpb::to_json(v);
      j["config"] = bpb::to_json(cfg);
      emit(c, j, text);
      return v.verdict == bpb::Verdict::Approx ? 0 : v.verdict == bpb::Verdict::NotApprox ? 1 : 2;
    }
    if (*perturb) {
      const bpb::Operator op = load_operator(c);
      const bpb::Operator a = bpb::construct_bpb_perturbation(op, bpb::parse_vector(x0_text), n, cfg);
      std::string text;
      for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) text += fmt(bpb::Vector(a.matrix.row(i).transpose())) + "\n";
      emit(c, bpb::to_json(a), text);
      return 0;
    }
    if (*isos) {
      const auto list = bpb::enumerate_isometries(bpb::parse_space(c.space), cfg);
      bpb::Json j = bpb::Json::array();
      std::string text = std::to_string(list.size()) + " isometries\n";
      for (const auto& v : list) {
        j.push_back(bpb::to_json(v.matrix));
        for (Eigen::Index i = 0; i < v.matrix.rows(); ++i)
          text += (i ? "  " : "- ") + fmt(bpb::Vector(v.matrix.row(i).transpose())) + "\n";
      }
      emit(c, j, text);
      return 0;
    }
    if (*verify) {
      bpb::SuiteConfig sc = bpb::default_suite_config(suite_id);
      if (auto s = resolve_seed(c)) sc.seed = *s;
      sc.tol = c.tol;
      if (!spaces.empty()) {
        sc.spaces.clear();
        std::stringstream in(spaces);
        std::string item;
        while (std::getline(in, item, ',')) sc.spaces.push_back(bpb::parse_space(item));
      }
      if (!eps_grid.empty()) sc.eps_grid = parse_grid(eps_grid);
      if (!delta_grid.empty()) sc.delta_grid = parse_grid(delta_grid);
      if (trials) sc.trials = *trials;
      if (n_max) sc.n_max = *n_max;
      const bpb::SuiteReport rep = bpb::run_suite(sc);
      std::cout << bpb::emit_report(rep, c.json ? bpb::ReportFormat::Json : bpb::ReportFormat::Text, timing);
      switch (rep.overall()) {
        case bpb::Status::Pass: return 0;
        case bpb::Status::Fail: return 1;
        case bpb::Status::Inconclusive: return 2;
      }
    }
  } catch (const bpb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

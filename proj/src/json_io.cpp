#include "bpb/json_io.hpp"

#include <cmath>
#include <sstream>

namespace bpb {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

namespace {

Json points(const std::vector<Vector>& pts) {
  Json out = Json::array();
  for (const Vector& v : pts) out.push_back(to_json(v));
  return out;
}

Json optional_point(const std::optional<Vector>& v) { return v ? to_json(*v) : Json(nullptr); }

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

}  // namespace

Json to_json(const LpSpace& s) {
  Json out;
  out["dim"] = s.dim;
  out["p"] = s.is_inf() ? Json("inf") : Json(s.p);
  return out;
}

Json to_json(const ToleranceConfig& cfg) {
  Json out;
  out["tol_unit"] = cfg.tol_unit;
  out["tol_val"] = cfg.tol_val;
  out["tol_merge"] = cfg.tol_merge;
  out["tol_opt"] = cfg.tol_opt;
  out["n_starts"] = cfg.n_starts;
  out["grid_points"] = cfg.grid_points;
  out["seed"] = cfg.seed;
  return out;
}

Json to_json(const Operator& op) {
  Json out;
  out["matrix"] = to_json(op.matrix);
  out["domain"] = to_json(op.domain);
  out["codomain"] = to_json(op.codomain);
  return out;
}

Json to_json(const NormResult& r) {
  Json out;
  out["value"] = number(r.value);
  out["argmax"] = to_json(r.argmax);
  out["zero_operator"] = r.zero_operator;
  out["exact"] = r.exact;
  out["power_check"] = optional_number(r.power_check);
  return out;
}

Json to_json(const MinNormResult& r) {
  Json out;
  out["value"] = number(r.value);
  out["argmin"] = to_json(r.argmin);
  return out;
}

Json to_json(const AttainmentReport& r) {
  Json out;
  out["norm_value"] = number(r.norm_value);
  out["entire_sphere"] = r.entire_sphere;
  out["pairs"] = points(r.pairs);
  Json res = Json::array();
  for (double x : r.residuals) res.push_back(number(x));
  out["residuals"] = res;
  out["min_norm"] = number(r.min_norm);
  out["min_argmin"] = to_json(r.min_argmin);
  out["is_isometry"] = r.is_isometry;
  out["structural_check"] = r.structural_check;
  return out;
}

Json to_json(const ConstrainedSup& r) {
  Json out;
  out["empty"] = r.empty;
  out["sup_value"] = r.empty ? Json(nullptr) : number(r.sup_value);
  out["witness"] = r.empty ? Json(nullptr) : to_json(r.witness);
  out["exact"] = r.exact;
  if (!r.exact) {
    out["samples"] = r.samples;
    out["feasible_samples"] = r.feasible_samples;
    out["empty_confidence_fraction"] = number(r.empty_confidence_fraction);
  }
  return out;
}

Json to_json(const SmoothnessCertificate& c) {
  Json out;
  out["smooth"] = c.smooth;
  out["x0"] = optional_point(c.x0);
  out["margin"] = number(c.margin);
  out["pair_count"] = c.pair_count;
  return out;
}

Json to_json(const BjDetail& d) {
  Json out;
  out["orthogonal"] = d.orthogonal;
  out["min_norm"] = number(d.min_norm);
  out["argmin_lambda"] = number(d.argmin_lambda);
  out["functional_pairing"] = number(d.functional_pairing);
  out["used_functional"] = d.used_functional;
  return out;
}

Json to_json(const BpbModulus& m) {
  Json out;
  out["epsilon"] = number(m.epsilon);
  out["norm_value"] = number(m.norm_value);
  out["delta_star"] = number(m.delta_star);
  out["empty"] = !m.witness.has_value();
  out["sup_value"] = m.witness ? number(m.sup_value) : Json(nullptr);
  out["witness"] = optional_point(m.witness);
  out["centers"] = points(m.centers);
  out["entire_sphere"] = m.entire_sphere;
  out["exact"] = m.exact;
  return out;
}

Json to_json(const ApproximationVerdict& v) {
  Json out;
  out["verdict"] = to_string(v.verdict);
  out["is_approx"] = v.is_approx;
  out["epsilon"] = number(v.epsilon);
  out["distance"] = number(v.distance);
  out["distance_ok"] = v.distance_ok;
  out["delta_found"] = optional_number(v.delta_found);
  out["sup_value"] = optional_number(v.sup_value);
  out["failure_witness"] = optional_point(v.failure_witness);
  out["approximant_pairs"] = points(v.approximant_pairs);
  out["approximant_entire_sphere"] = v.approximant_entire_sphere;
  return out;
}

Json to_json(const FamilyReport& r) {
  Json out;
  out["epsilon"] = number(r.epsilon);
  out["uniform_modulus"] = number(r.uniform_modulus);
  out["worst_member_index"] = r.worst_member_index;
  out["joint_sup"] = number(r.joint_sup);
  out["joint_sup_member_index"] = r.joint_sup_member_index;
  out["joint_modulus"] = number(r.joint_modulus);
  out["sup_below_one"] = r.sup_below_one;
  Json moduli = Json::array();
  for (const BpbModulus& m : r.moduli) moduli.push_back(to_json(m));
  out["moduli"] = moduli;
  return out;
}

Json to_json(const DecayTable& t) {
  Json out;
  out["space"] = to_json(t.space);
  out["x0"] = to_json(t.x0);
  out["y0"] = to_json(t.y0);
  out["epsilon"] = number(t.epsilon);
  Json rows = Json::array();
  for (const DecayRow& r : t.rows) {
    Json row;
    row["n"] = r.n;
    row["norm_value"] = number(r.norm_value);
    row["pairs"] = points(r.pairs);
    row["smooth"] = r.smooth;
    row["smooth_margin"] = number(r.smooth_margin);
    row["image_of_y0"] = number(r.image_of_y0);
    row["y0_distance"] = number(r.y0_distance);
    row["delta_star"] = number(r.delta_star);
    rows.push_back(row);
  }
  out["rows"] = rows;
  return out;
}

Json to_json(const RigidityReport& r) {
  Json out;
  out["space"] = to_json(r.space);
  out["isometry"] = to_json(r.isometry);
  out["eps1"] = number(r.eps1);
  out["count_bound"] = r.count_bound;
  out["epsilon"] = number(r.epsilon);
  out["self_check"] = to_json(r.self_check);
  Json others = Json::array();
  for (std::size_t i = 0; i < r.other_isometry_distances.size(); ++i) {
    Json o;
    o["distance"] = number(r.other_isometry_distances[i]);
    o["verdict"] = to_string(r.other_isometry_verdicts[i].verdict);
    others.push_back(o);
  }
  out["other_isometries"] = others;
  Json trials = Json::array();
  for (const RigidityTrial& t : r.trials) {
    Json j;
    j["index"] = t.index;
    j["matrix"] = to_json(t.approximant.matrix);
    j["distance"] = number(t.distance);
    j["verdict"] = to_string(t.verdict.verdict);
    j["attainment_points"] = t.attainment_points;
    j["failure_witness"] = optional_point(t.verdict.failure_witness);
    j["witness_distance"] = number(t.witness_distance);
    trials.push_back(j);
  }
  out["trials"] = trials;
  out["rejected_samples"] = r.rejected_samples;
  out["all_passed"] = r.all_passed;
  out["failures"] = r.failures;
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidConfig, "vector must be a JSON array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::InvalidConfig, "vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::InvalidConfig, "matrix must be a non-empty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw Error(ErrorKind::InvalidConfig, "matrix rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i]);
    if (static_cast<std::size_t>(row.size()) != cols) throw Error(ErrorKind::InvalidConfig, "ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

LpSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("p"))
    throw Error(ErrorKind::InvalidConfig, "space needs \"dim\" and \"p\"");
  const Json& p = j.at("p");
  double pv = 0.0;
  if (p.is_string()) {
    if (p.get<std::string>() != "inf") throw Error(ErrorKind::InvalidConfig, "p must be a number or \"inf\"");
    pv = kInf;
  } else if (p.is_number()) {
    pv = p.get<double>();
  } else {
    throw Error(ErrorKind::InvalidConfig, "p must be a number or \"inf\"");
  }
  return LpSpace(j.at("dim").get<int>(), pv);
}

Operator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("matrix")) throw Error(ErrorKind::InvalidConfig, "operator needs \"matrix\"");
  Matrix m = matrix_from_json(j.at("matrix"));
  const LpSpace domain = j.contains("domain") ? space_from_json(j.at("domain")) : LpSpace(static_cast<int>(m.cols()), 2.0);
  const LpSpace codomain = j.contains("codomain") ? space_from_json(j.at("codomain")) : domain;
  return Operator(std::move(m), domain, codomain);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidConfig, "not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw Error(ErrorKind::InvalidConfig, "not a number: '" + s + "'");
  return x;
}

}  // namespace

Vector parse_vector(const std::string& text) {
  const auto items = split(text, ',');
  if (items.empty()) throw Error(ErrorKind::InvalidConfig, "empty vector");
  Vector v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(items[i]);
  return v;
}

Matrix parse_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.empty()) throw Error(ErrorKind::InvalidConfig, "empty matrix");
  std::vector<Vector> parsed;
  for (const auto& r : rows) parsed.push_back(parse_vector(r));
  Matrix m(static_cast<Eigen::Index>(parsed.size()), parsed.front().size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != m.cols()) throw Error(ErrorKind::InvalidConfig, "ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return m;
}

}  // namespace bpb

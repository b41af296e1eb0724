#pragma once

#include <string>

#include <json.hpp>

#include "bpb/bpb_analysis.hpp"

namespace bpb {

using Json = nlohmann::ordered_json;

/// Non-finite values become null.
Json number(double x);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const LpSpace& s);
Json to_json(const ToleranceConfig& cfg);
Json to_json(const Operator& op);
Json to_json(const NormResult& r);
Json to_json(const MinNormResult& r);
Json to_json(const AttainmentReport& r);
Json to_json(const ConstrainedSup& r);
Json to_json(const SmoothnessCertificate& c);
Json to_json(const BjDetail& d);
Json to_json(const BpbModulus& m);
Json to_json(const ApproximationVerdict& v);
Json to_json(const FamilyReport& r);
Json to_json(const DecayTable& t);
Json to_json(const RigidityReport& r);

Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
LpSpace space_from_json(const Json& j);
Operator operator_from_json(const Json& j);

/// "a,b;c,d" (rows separated by ';').
Matrix parse_matrix(const std::string& text);
/// "a,b,c".
Vector parse_vector(const std::string& text);

}  // namespace bpb

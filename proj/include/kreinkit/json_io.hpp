#pragma once

// JSON wire formats.
//
//   matrix:   {"rows": m, "cols": n, "data": [[re, im], ...]}   row-major
//   space:    {"n_minus": k, "n_plus": m}
//   operator: {"space": space, "matrix": matrix}
//   group:    {"order": m, "elements": [...], "table": [[...]], "identity": i}
//   rep:      {"group": group, "space": space, "matrices": [matrix, ...]}
//   function: {"group": group, "values": [[re, im], ...]}

#include <string>

#include <json.hpp>

#include "kreinkit/fixpoint.hpp"
#include "kreinkit/mnps.hpp"
#include "kreinkit/qpd.hpp"

namespace kreinkit::io {

using json = nlohmann::json;

/// Malformed or inconsistent input document.
class FormatError : public Error {
public:
    using Error::Error;
};

json to_json(const MatrixXcd& m);
MatrixXcd matrix_from_json(const json& j);
json to_json(const VectorXcd& v);  // [[re, im], ...]
VectorXcd vector_from_json(const json& j);

json to_json(const IndefiniteSpace& s);
IndefiniteSpace space_from_json(const json& j);

json to_json(const BlockOperator<double>& a);
BlockOperator<double> operator_from_json(const json& j);

json to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

json to_json(const GroupRep<double>& rep);
/// Reads a rep; `group` overrides (or supplies) the embedded group.
GroupRep<double> rep_from_json(const json& j, const FiniteGroup* group = nullptr);

json to_json(const GroupFunction<double>& f);
GroupFunction<double> function_from_json(const json& j, const FiniteGroup* group = nullptr);

json to_json(const Inertia& i);
json to_json(const MnpsReport<double>& r);
json to_json(const LadderReport<double>& r);
json to_json(const FixedPointReport<double>& r);
json to_json(const UnitarizationReport<double>& r);
json to_json(const GnsResult<double>& r);
json to_json(const DecompositionCertificate<double>& c);

json read_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const json& j);

}  // namespace kreinkit::io

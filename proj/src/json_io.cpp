#include "kreinkit/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kreinkit::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) throw FormatError(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::complex<double> complex_from_json(const json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw FormatError("complex entries must be [re, im]");
    return {e[0].get<double>(), e[1].get<double>()};
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json to_json(const MatrixXcd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

MatrixXcd matrix_from_json(const json& j) {
    const int rows = as_int(field(j, "rows"), "rows");
    const int cols = as_int(field(j, "cols"), "cols");
    if (rows < 0 || cols < 0) throw FormatError("matrix dimensions must be nonnegative");
    const json& data = field(j, "data");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw FormatError("matrix data length does not match rows*cols");
    MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(data[static_cast<std::size_t>(i) * cols + c]);
    return m;
}

json to_json(const VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

VectorXcd vector_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("values must be an array");
    VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json to_json(const IndefiniteSpace& s) { return {{"n_minus", s.n_minus()}, {"n_plus", s.n_plus()}}; }

IndefiniteSpace space_from_json(const json& j) {
    try {
        return IndefiniteSpace(as_int(field(j, "n_minus"), "n_minus"), as_int(field(j, "n_plus"), "n_plus"));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

json to_json(const BlockOperator<double>& a) { return {{"space", to_json(a.space())}, {"matrix", to_json(a.matrix())}}; }

BlockOperator<double> operator_from_json(const json& j) {
    try {
        return BlockOperator<double>(space_from_json(field(j, "space")), matrix_from_json(field(j, "matrix")));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

json to_json(const FiniteGroup& g) {
    return {{"order", g.order()}, {"elements", g.labels()}, {"table", g.table()}, {"identity", g.identity()}};
}

FiniteGroup group_from_json(const json& j) {
    const int order = as_int(field(j, "order"), "order");
    const json& table = field(j, "table");
    if (!table.is_array() || static_cast<int>(table.size()) != order) throw FormatError("table must have order rows");
    std::vector<std::vector<int>> t;
    for (const auto& row : table) {
        if (!row.is_array()) throw FormatError("table rows must be arrays");
        std::vector<int> r;
        for (const auto& v : row) r.push_back(as_int(v, "table entry"));
        t.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("elements")) {
        for (const auto& e : j.at("elements")) labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    } else {
        for (int i = 0; i < order; ++i) labels.push_back(std::to_string(i));
    }
    try {
        return FiniteGroup(std::move(labels), std::move(t), as_int(field(j, "identity"), "identity"));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

json to_json(const GroupRep<double>& rep) {
    json mats = json::array();
    for (const auto& m : rep.matrices()) mats.push_back(to_json(m));
    return {{"group", to_json(rep.group())}, {"space", to_json(rep.space())}, {"matrices", std::move(mats)}};
}

GroupRep<double> rep_from_json(const json& j, const FiniteGroup* group) {
    const FiniteGroup g = group ? *group : group_from_json(field(j, "group"));
    std::vector<MatrixXcd> mats;
    const json& arr = field(j, "matrices");
    if (!arr.is_array()) throw FormatError("matrices must be an array");
    for (const auto& m : arr) mats.push_back(matrix_from_json(m));
    try {
        return GroupRep<double>(g, space_from_json(field(j, "space")), std::move(mats));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

json to_json(const GroupFunction<double>& f) { return {{"group", to_json(f.group())}, {"values", to_json(f.values())}}; }

GroupFunction<double> function_from_json(const json& j, const FiniteGroup* group) {
    const FiniteGroup g = group ? *group : group_from_json(field(j, "group"));
    try {
        return GroupFunction<double>(g, vector_from_json(field(j, "values")), 1e-9);
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

json to_json(const Inertia& i) { return {{"n_pos", i.n_pos}, {"n_neg", i.n_neg}, {"n_null", i.n_null}}; }

json to_json(const MnpsReport<double>& r) {
    json j = {{"W", to_json(r.w.matrix())},
              {"space", to_json(r.w.space())},
              {"residual", r.residual},
              {"w_norm", r.w_norm},
              {"subspace_inertia", to_json(r.subspace_inertia)},
              {"regularization_t", r.regularization_t},
              {"iterations", r.iterations},
              {"certified", r.certified}};
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

json to_json(const LadderReport<double>& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        json st = {{"k_minus", s.level.k_minus},       {"k_plus", s.level.k_plus},
                   {"W", to_json(s.w)},                {"residual", s.residual},
                   {"delta_to_previous", s.delta_to_previous}, {"certified", s.certified}};
        if (!s.message.empty()) st["message"] = s.message;
        steps.push_back(std::move(st));
    }
    return {{"levels", std::move(steps)}, {"W", to_json(r.w.matrix())}, {"certified", r.all_certified}};
}

json to_json(const FixedPointReport<double>& r) {
    json j = {{"K", to_json(r.k.matrix())},
              {"max_map_residual", r.max_map_residual},
              {"max_invariance_residual", r.max_invariance_residual},
              {"orbit_radius", r.orbit_radius},
              {"radius_bound", r.radius_bound},
              {"k_norm", r.k_norm},
              {"rep_bound", r.rep_bound},
              {"metric_defect", r.metric_defect},
              {"exact", r.exact},
              {"certified", r.certified}};
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

json to_json(const UnitarizationReport<double>& r) {
    json us = json::array();
    for (const auto& u : r.unitary) us.push_back(to_json(u));
    json j = {{"V", to_json(r.v)},
              {"V_inv", to_json(r.v_inv)},
              {"U", std::move(us)},
              {"max_unitarity_defect", r.max_unitarity_defect},
              {"cond", r.cond},
              {"bound", r.bound},
              {"sharp_bound", r.sharp_bound},
              {"fixed_point", to_json(r.fixed_point)},
              {"certified", r.certified}};
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

json to_json(const GnsResult<double>& r) {
    std::vector<int> signs;
    for (Eigen::Index i = 0; i < r.signs.size(); ++i) signs.push_back(r.signs(i) < 0 ? -1 : 1);
    return {{"rank", r.rank},
            {"negative_squares", r.negative},
            {"signs", signs},
            {"homomorphism_defect", r.homomorphism_defect},
            {"unitarity_defect", r.unitarity_defect},
            {"reproduction_defect", r.reproduction_defect}};
}

json to_json(const DecompositionCertificate<double>& c) {
    return {{"reconstruction_error", c.reconstruction_error},
            {"relative_error", c.relative_error},
            {"negative_squares", c.negative_squares},
            {"phi1_negative_squares", c.phi1_negative_squares},
            {"phi2_negative_squares", c.phi2_negative_squares},
            {"phi2_rank", c.phi2_rank},
            {"reconstructs", c.reconstructs},
            {"phi1_pd", c.phi1_pd},
            {"phi2_pd", c.phi2_pd},
            {"rank_consistent", c.rank_consistent},
            {"passed", c.passed()}};
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_file_atomic(const std::string& path, const json& j) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw FormatError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace kreinkit::io

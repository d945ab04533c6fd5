// kreinkit: batch front end for the indefinite-metric solvers.
//
// Exit codes: 0 certified, 1 uncertified or failed certificate, 2 input error.

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kreinkit/fixtures.hpp"
#include "kreinkit/json_io.hpp"

using namespace kreinkit;
using io::json;

namespace {

constexpr int kCertified = 0;
constexpr int kUncertified = 1;
constexpr int kInputError = 2;

struct RunConfig {
    std::string input;
    std::string point;
    std::string group;
    std::string signature;
    std::string levels;
    std::string out;
    std::uint64_t seed = 0;
    double tol = 1.0;
    bool no_timestamp = false;

    // per-solver overrides
    std::optional<double> tol_res;
    std::optional<double> t0;
    double shrink = 0.5;
    int max_iter = 40;
    std::optional<int> words;

    // gen
    std::string kind;
    std::string group_name = "Z4";
    int k = 1;
    int n = 0;
    int copies = 1;
    double a_norm = 0.5;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void emit(const RunConfig& cfg, json doc) {
    if (!cfg.no_timestamp) doc["timestamp"] = timestamp();
    if (cfg.out.empty())
        std::cout << doc.dump(2) << '\n';
    else
        io::write_file_atomic(cfg.out, doc);
}

std::pair<int, int> parse_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw io::FormatError("expected \"k,m\", got \"" + s + "\"");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw io::FormatError("expected integers in \"" + s + "\"");
    }
}

std::vector<LadderLevel> parse_levels(const std::string& s) {
    std::vector<LadderLevel> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto [km, kp] = parse_pair(item);
        out.push_back({km, kp});
    }
    if (out.empty()) throw io::FormatError("--levels needs at least one \"k,m\" pair");
    return out;
}

BlockOperator<double> load_operator(const RunConfig& cfg) {
    const json j = io::read_file(cfg.input);
    if (j.contains("space")) return io::operator_from_json(j);
    if (cfg.signature.empty()) throw io::FormatError("bare matrix input needs --signature k,m");
    const auto [k, m] = parse_pair(cfg.signature);
    try {
        return BlockOperator<double>(IndefiniteSpace(k, m), io::matrix_from_json(j));
    } catch (const DomainError& e) {
        throw io::FormatError(e.what());
    }
}

BallPoint<double> load_point(const std::string& path, const std::string& signature) {
    const json j = io::read_file(path);
    IndefiniteSpace s;
    MatrixXcd m;
    if (j.contains("space")) {
        s = io::space_from_json(j.at("space"));
        m = io::matrix_from_json(j.at("matrix"));
    } else {
        if (signature.empty()) throw io::FormatError("bare matrix point needs --signature k,m");
        const auto [k, mm] = parse_pair(signature);
        s = IndefiniteSpace(k, mm);
        m = io::matrix_from_json(j);
    }
    try {
        return BallPoint<double>(s, m);
    } catch (const DomainError& e) {
        throw io::FormatError(e.what());
    }
}

std::optional<FiniteGroup> load_group(const RunConfig& cfg) {
    if (cfg.group.empty()) return std::nullopt;
    return io::group_from_json(io::read_file(cfg.group));
}

MnpsOptions<double> mnps_options(const RunConfig& cfg) {
    MnpsOptions<double> o;
    o.tol_res = cfg.tol_res.value_or(o.tol_res * cfg.tol);
    o.norm_tol *= cfg.tol;
    o.dissipativity_tol *= cfg.tol;
    o.t0 = cfg.t0;
    o.shrink = cfg.shrink;
    o.max_iter = cfg.max_iter;
    return o;
}

FixedPointOptions<double> fixpoint_options(const RunConfig& cfg) {
    FixedPointOptions<double> o;
    o.map_tol *= cfg.tol;
    o.radius_slack *= cfg.tol;
    o.invariance_tol *= cfg.tol;
    return o;
}

int cmd_mnps(const RunConfig& cfg) {
    const BlockOperator<double> a = load_operator(cfg);
    try {
        const MnpsReport<double> r = mnps(a, mnps_options(cfg));
        json doc = io::to_json(r);
        const VerifyResult<double> v = verify_mnps(a, r.w, 1e-8 * cfg.tol);
        doc["verify"] = {{"maximal_nonpositive", v.maximal_nonpositive}, {"invariant", v.invariant}};
        emit(cfg, doc);
        return r.certified ? kCertified : kUncertified;
    } catch (const NotDissipativeError& e) {
        emit(cfg, {{"certified", false}, {"reason", "not J-dissipative"}, {"detail", e.what()},
                   {"dissipativity_margin", dissipativity_margin(a)}});
        return kUncertified;
    } catch (const NumericalError& e) {
        emit(cfg, {{"certified", false}, {"reason", e.what()}});
        return kUncertified;
    }
}

int cmd_ladder(const RunConfig& cfg) {
    const BlockOperator<double> a = load_operator(cfg);
    std::vector<LadderLevel> levels;
    if (cfg.levels.empty())
        levels = {{a.space().n_minus(), a.space().n_plus()}};
    else
        levels = parse_levels(cfg.levels);
    try {
        const LadderReport<double> r = approximation_ladder(a, levels, mnps_options(cfg));
        json doc = io::to_json(r);
        const VerifyResult<double> v = verify_mnps(a, r.w, 1e-8 * cfg.tol);
        doc["full_residual"] = v.residual;
        doc["full_certified"] = v.invariant && v.maximal_nonpositive;
        emit(cfg, doc);
        return r.all_certified && v.invariant && v.maximal_nonpositive ? kCertified : kUncertified;
    } catch (const NotDissipativeError& e) {
        emit(cfg, {{"certified", false}, {"reason", "not J-dissipative"}, {"detail", e.what()}});
        return kUncertified;
    }
}

int cmd_ball(const RunConfig& cfg, const std::string& action) {
    const BallPoint<double> a = load_point(cfg.input, cfg.signature);
    try {
        if (action == "matrix") {
            const BlockOperator<double> m = mobius_matrix(a);
            const MobiusNorm<double> nrm = mobius_norm(a);
            emit(cfg, {{"M", io::to_json(m.matrix())},
                       {"space", io::to_json(a.space())},
                       {"norm", nrm.norm},
                       {"upper_bound", nrm.upper_bound},
                       {"lower_bound", nrm.lower_bound},
                       {"unitarity_defect", classify_operator(m).unitarity_defect}});
            return kCertified;
        }
        if (cfg.point.empty()) throw io::FormatError("ball " + action + " needs --point");
        const BallPoint<double> x = load_point(cfg.point, cfg.signature);
        if (action == "apply") {
            const BallPoint<double> y = mobius_apply(a, x);
            emit(cfg, {{"result", io::to_json(y.matrix())}, {"space", io::to_json(y.space())}, {"norm", y.norm()}});
            return kCertified;
        }
        if (action == "distance") {
            emit(cfg, {{"distance", hyperbolic_distance(a, x)}});
            return kCertified;
        }
    } catch (const DomainError& e) {
        emit(cfg, {{"error", e.what()}});
        return kUncertified;
    }
    throw io::FormatError("unknown ball action " + action);
}

GroupRep<double> load_rep(const RunConfig& cfg) {
    const auto g = load_group(cfg);
    return io::rep_from_json(io::read_file(cfg.input), g ? &*g : nullptr);
}

int cmd_fixpoint(const RunConfig& cfg) {
    const GroupRep<double> rep = load_rep(cfg);
    const RepDiagnostics<double> diag = rep_validate(rep, 1e-9 * cfg.tol, cfg.seed);
    json diag_json = {{"homomorphism_defect", diag.homomorphism_defect},
                      {"identity_defect", diag.identity_defect},
                      {"unitarity_defect", diag.unitarity_defect},
                      {"table_ok", diag.table_ok},
                      {"valid", diag.valid()}};
    if (!diag.valid()) {
        emit(cfg, {{"certified", false}, {"reason", "representation failed validation"}, {"diagnostics", diag_json}});
        return kUncertified;
    }
    try {
        FixedPointReport<double> r;
        if (cfg.words) {
            r = common_fixed_point_generated(rep.space(), rep.matrices(), *cfg.words, fixpoint_options(cfg));
        } else {
            r = common_fixed_point(rep, fixpoint_options(cfg));
        }
        json doc = io::to_json(r);
        doc["diagnostics"] = diag_json;
        emit(cfg, doc);
        return r.certified ? kCertified : kUncertified;
    } catch (const NumericalError& e) {
        emit(cfg, {{"certified", false}, {"reason", e.what()}, {"diagnostics", diag_json}});
        return kUncertified;
    }
}

int cmd_unitarize(const RunConfig& cfg) {
    const GroupRep<double> rep = load_rep(cfg);
    const RepDiagnostics<double> diag = rep_validate(rep, 1e-9 * cfg.tol, cfg.seed);
    if (!diag.valid()) {
        emit(cfg, {{"certified", false}, {"reason", "representation failed validation"}});
        return kUncertified;
    }
    try {
        const UnitarizationReport<double> r = unitarize(rep, fixpoint_options(cfg), 1e-8 * cfg.tol);
        emit(cfg, io::to_json(r));
        return r.certified ? kCertified : kUncertified;
    } catch (const NumericalError& e) {
        emit(cfg, {{"certified", false}, {"reason", e.what()}});
        return kUncertified;
    }
}

int cmd_qpd(const RunConfig& cfg, const std::string& action) {
    const auto g = load_group(cfg);
    const GroupFunction<double> phi = io::function_from_json(io::read_file(cfg.input), g ? &*g : nullptr);
    if (action == "classify") {
        const int k = negative_squares(phi);
        const GnsResult<double> gns = gns_construct(phi);
        json doc = {{"negative_squares", k}, {"gram_rank", gns.rank}, {"positive_definite", k == 0}, {"gns", io::to_json(gns)}};
        if (k == 0) doc["finite_type_rank"] = finite_type_rank(phi);
        emit(cfg, doc);
        return kCertified;
    }
    if (action == "decompose") {
        try {
            const Decomposition<double> d = decompose(phi, fixpoint_options(cfg));
            const bool ok = d.certificate.passed() && d.rank_within_k;
            emit(cfg, {{"phi1", io::to_json(d.phi1.values())},
                       {"phi2", io::to_json(d.phi2.values())},
                       {"certificate", io::to_json(d.certificate)},
                       {"rank_within_k", d.rank_within_k},
                       {"certified", ok}});
            return ok ? kCertified : kUncertified;
        } catch (const NumericalError& e) {
            emit(cfg, {{"certified", false}, {"reason", e.what()}});
            return kUncertified;
        }
    }
    throw io::FormatError("unknown qpd action " + action);
}

int cmd_gen(const RunConfig& cfg) {
    fixtures::Rng rng(cfg.seed);
    const auto [k, m] = cfg.signature.empty() ? std::pair{cfg.k, std::max(cfg.n - cfg.k, 1)} : parse_pair(cfg.signature);
    json doc;
    if (cfg.kind == "dissipative" || cfg.kind == "strongly-dissipative" || cfg.kind == "selfadjoint") {
        const IndefiniteSpace s(k, m);
        BlockOperator<double> a;
        if (cfg.kind == "dissipative")
            a = fixtures::random_dissipative<double>(rng, s, fixtures::DissipationKind::low_rank);
        else if (cfg.kind == "selfadjoint")
            a = fixtures::random_dissipative<double>(rng, s, fixtures::DissipationKind::zero);
        else
            a = fixtures::random_strongly_dissipative<double>(rng, s);
        doc = io::to_json(a);
    } else if (cfg.kind == "ladder") {
        doc = io::to_json(fixtures::ladder_decay_fixture<double>(rng, IndefiniteSpace(k, m)));
    } else if (cfg.kind == "conjugated-rep") {
        const auto ng = fixtures::named_group<double>(cfg.group_name);
        const auto fx = fixtures::conjugated_rep_fixture<double>(rng, ng, cfg.k, cfg.copies, 1, cfg.a_norm);
        doc = io::to_json(fx.rep);
        doc["fixed_point"] = io::to_json(fx.a.matrix());
    } else if (cfg.kind == "qpd") {
        const auto ng = fixtures::named_group<double>(cfg.group_name);
        const auto fx = fixtures::qpd_fixture<double>(rng, ng, cfg.k);
        doc = io::to_json(fx.phi);
        doc["subtracted_rank"] = fx.subtracted_rank;
    } else if (cfg.kind == "group") {
        doc = io::to_json(fixtures::named_group<double>(cfg.group_name).mg.group);
    } else {
        throw io::FormatError("unknown fixture kind \"" + cfg.kind + "\"");
    }
    doc["seed"] = cfg.seed;
    doc["kind"] = cfg.kind;
    // generated corpora are byte-reproducible: no timestamp
    RunConfig quiet = cfg;
    quiet.no_timestamp = true;
    emit(quiet, doc);
    return kCertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kreinkit: invariant subspaces, operator-ball geometry and unitarization in indefinite-metric spaces"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Output path (default: stdout)");
        sub->add_option("--tol", cfg.tol, "Multiplier applied to every tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_flag("--no-timestamp", cfg.no_timestamp, "Omit the timestamp field");
    };
    auto solver = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "Operator JSON")->required();
        sub->add_option("--signature", cfg.signature, "k,m for bare matrix input");
        sub->add_option("--tol-res", cfg.tol_res, "Invariance residual tolerance (relative to max(1,||A||))");
        sub->add_option("--t0", cfg.t0, "Initial regularization");
        sub->add_option("--shrink", cfg.shrink, "Regularization shrink factor");
        sub->add_option("--max-iter", cfg.max_iter, "Maximum regularization steps");
        common(sub);
    };

    auto* mnps_cmd = app.add_subcommand("mnps", "Invariant maximal non-positive subspace of a J-dissipative matrix");
    solver(mnps_cmd);
    auto* ladder_cmd = app.add_subcommand("ladder", "Solve on a ladder of coordinate truncations");
    solver(ladder_cmd);
    ladder_cmd->add_option("--levels", cfg.levels, "Levels \"k1,m1;k2,m2;...\" ending at the full signature");

    auto* ball_cmd = app.add_subcommand("ball", "Operator-ball geometry");
    std::string ball_action;
    ball_cmd->add_option("action", ball_action, "apply | distance | matrix")
        ->required()
        ->check(CLI::IsMember({"apply", "distance", "matrix"}));
    ball_cmd->add_option("--input", cfg.input, "Point A")->required();
    ball_cmd->add_option("--point", cfg.point, "Point X (apply) or B (distance)");
    ball_cmd->add_option("--signature", cfg.signature, "k,m for bare matrix points");
    common(ball_cmd);

    auto* fix_cmd = app.add_subcommand("fixpoint", "Common fixed point of a bounded J-unitary representation");
    fix_cmd->add_option("--input", cfg.input, "Representation JSON")->required();
    fix_cmd->add_option("--group", cfg.group, "Group JSON (overrides the embedded group)");
    fix_cmd->add_option("--words", cfg.words, "Approximate mode: average over words of at most this length");
    common(fix_cmd);

    auto* uni_cmd = app.add_subcommand("unitarize", "Similarity to a unitary representation");
    uni_cmd->add_option("--input", cfg.input, "Representation JSON")->required();
    uni_cmd->add_option("--group", cfg.group, "Group JSON (overrides the embedded group)");
    common(uni_cmd);

    auto* qpd_cmd = app.add_subcommand("qpd", "Quasi-positive-definite functions on finite groups");
    std::string qpd_action;
    qpd_cmd->add_option("action", qpd_action, "classify | decompose")
        ->required()
        ->check(CLI::IsMember({"classify", "decompose"}));
    qpd_cmd->add_option("--input", cfg.input, "Function JSON")->required();
    qpd_cmd->add_option("--group", cfg.group, "Group JSON (overrides the embedded group)");
    common(qpd_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded fixture");
    gen_cmd->add_option("kind", cfg.kind,
                        "dissipative | strongly-dissipative | selfadjoint | ladder | conjugated-rep | qpd | group")
        ->required();
    gen_cmd->add_option("--signature", cfg.signature, "k,m");
    gen_cmd->add_option("--n", cfg.n, "Total dimension (with --k as n_minus)");
    gen_cmd->add_option("--k", cfg.k, "Negative dimension / negative squares");
    gen_cmd->add_option("--group", cfg.group_name, "Z<n> | D<n> | S3 | S4 | Q8");
    gen_cmd->add_option("--copies", cfg.copies, "Copies of the defining rep on H+ (conjugated-rep)");
    gen_cmd->add_option("--a-norm", cfg.a_norm, "Norm of the conjugating ball point (conjugated-rep)");
    common(gen_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*mnps_cmd) return cmd_mnps(cfg);
        if (*ladder_cmd) return cmd_ladder(cfg);
        if (*ball_cmd) return cmd_ball(cfg, ball_action);
        if (*fix_cmd) return cmd_fixpoint(cfg);
        if (*uni_cmd) return cmd_unitarize(cfg);
        if (*qpd_cmd) return cmd_qpd(cfg, qpd_action);
        if (*gen_cmd) return cmd_gen(cfg);
    } catch (const io::FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUncertified;
    }
    return kInputError;
}

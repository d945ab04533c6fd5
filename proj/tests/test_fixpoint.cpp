#include <doctest.h>

#include "kreinkit/fixtures.hpp"
#include "oracles.hpp"

using namespace kreinkit;
using cd = std::complex<double>;

namespace {

FiniteGroup trivial_group() { return FiniteGroup({"e"}, {{0}}, 0); }

GroupRep<double> block_unitary_rep(fixtures::Rng& rng, const fixtures::NamedGroup<double>& ng,
                                   const IndefiniteSpace& s) {
    // H- carries the character, H+ the defining rep plus trivial padding
    const int m = ng.mg.group.order();
    const int dd = ng.defining_dim;
    const MatrixXcd wp = fixtures::random_unitary<double>(rng, s.n_plus());
    std::vector<MatrixXcd> mats;
    for (int g = 0; g < m; ++g) {
        MatrixXcd up = MatrixXcd::Identity(s.n_plus(), s.n_plus());
        up.topLeftCorner(dd, dd) = ng.mg.elements[g];
        mats.push_back(BlockOperator<double>::from_blocks(s, MatrixXcd::Identity(s.n_minus(), s.n_minus()) *
                                                                 ng.character[g],
                                                          MatrixXcd::Zero(s.n_minus(), s.n_plus()),
                                                          MatrixXcd::Zero(s.n_plus(), s.n_minus()),
                                                          wp * up * wp.adjoint())
                           .matrix());
    }
    return GroupRep<double>(ng.mg.group, s, mats);
}

}  // namespace

TEST_CASE("FiniteGroup axioms") {
    for (const char* name : {"Z2", "Z4", "Z6", "S3", "D4", "Q8", "S4"}) {
        const auto ng = fixtures::named_group<double>(name);
        CHECK(ng.mg.group.check().valid());
        for (int g = 0; g < ng.mg.group.order(); ++g)
            CHECK(ng.mg.group.mul(g, ng.mg.group.inverse(g)) == ng.mg.group.identity());
    }
    CHECK(fixtures::named_group<double>("S4").mg.group.order() == 24);
    CHECK(fixtures::named_group<double>("Q8").mg.group.order() == 8);

    SUBCASE("corrupted table is flagged") {
        auto table = fixtures::named_group<double>("Z4").mg.group.table();
        std::swap(table[1][2], table[1][3]);
        const FiniteGroup bad(fixtures::named_group<double>("Z4").mg.group.labels(), table, 0);
        CHECK_FALSE(bad.check().valid());
        CHECK_FALSE(bad.check().associative);
    }
    SUBCASE("non-latin table is flagged") {
        const FiniteGroup bad({"a", "b"}, {{0, 1}, {1, 1}}, 0);
        CHECK_FALSE(bad.check().latin_square);
    }
    CHECK_THROWS_AS(FiniteGroup({"a"}, {{1}}, 0), DomainError);
}

TEST_CASE("rep_validate") {
    fixtures::Rng rng(200);
    const auto ng = fixtures::named_group<double>("D4");
    const IndefiniteSpace s(2, 3);
    const GroupRep<double> u = block_unitary_rep(rng, ng, s);
    const RepDiagnostics<double> d = rep_validate(u);
    CHECK(d.valid());
    CHECK(d.homomorphism_defect <= 1e-12);
    CHECK(d.unitarity_defect <= 1e-12);

    const auto a = fixtures::random_strict_point<double>(rng, s, 0.7);
    std::vector<MatrixXcd> conj;
    for (const auto& m : u.matrices()) conj.push_back(mobius_matrix(a).matrix() * m * mobius_matrix(-a).matrix());
    const RepDiagnostics<double> dc = rep_validate(GroupRep<double>(ng.mg.group, s, conj));
    CHECK(dc.valid());
    CHECK(dc.unitarity_defect <= 1e-10);

    SUBCASE("corrupted table entry") {
        auto table = ng.mg.group.table();
        std::swap(table[1][2], table[1][3]);
        const GroupRep<double> bad(FiniteGroup(ng.mg.group.labels(), table, ng.mg.group.identity()), s,
                                   u.matrices());
        const RepDiagnostics<double> db = rep_validate(bad);
        CHECK_FALSE(db.valid());
        CHECK(db.homomorphism_defect > 1e-3);
    }
}

TEST_CASE("orbit_radius") {
    fixtures::Rng rng(201);
    const auto ng = fixtures::named_group<double>("S3");
    const IndefiniteSpace s(1, 3);
    const GroupRep<double> u = block_unitary_rep(rng, ng, s);
    CHECK(orbit_radius(u) < 1e-14);

    const auto a = fixtures::random_strict_point<double>(rng, s, 0.45);
    const GroupRep<double> triv = fixture_conjugated_rep(ng.mg.group, std::vector<MatrixXcd>(6, MatrixXcd::Identity(3, 3)),
                                                         std::vector<MatrixXcd>(6, MatrixXcd::Identity(1, 1)), a);
    CHECK(orbit_radius(triv) < 1e-14);

    SUBCASE("conjugated rep: A is fixed and the orbit of 0 is bounded") {
        const auto fx = fixtures::conjugated_rep_fixture<double>(rng, ng, 1, 1, 1, 0.45);
        for (int g = 0; g < 6; ++g)
            CHECK(oracle::norm2(fractional_linear(fx.rep.op(g), fx.a).matrix() - fx.a.matrix()) < 1e-12);
        CHECK(orbit_radius(fx.rep) <= radius_from_norm(fx.rep.bound()) + 1e-9);
    }
    SUBCASE("scalar reflection doubles the hyperbolic distance") {
        const IndefiniteSpace t(1, 1);
        const auto z2 = fixtures::named_group<double>("Z2");
        std::vector<MatrixXcd> up, um;
        for (const auto& e : z2.mg.elements) {
            up.push_back(MatrixXcd::Identity(1, 1));
            um.push_back(e);
        }
        for (double r : {0.1, 0.45, 0.8}) {
            MatrixXcd am(1, 1);
            am << r;
            const GroupRep<double> pi = fixture_conjugated_rep(z2.mg.group, up, um, BallPoint<double>(t, am));
            CHECK(std::abs(orbit_radius(pi) - 2 * r / (1 + r * r)) < 1e-12);
        }
    }

    for (int i = 0; i < 20; ++i) {
        const auto v = fixtures::random_j_unitary<double>(rng, s, 0.8);
        const double r = fractional_linear(v, BallPoint<double>::zero(s)).norm();
        CHECK(r <= radius_from_norm(v.norm()) + 1e-9);
    }
}

TEST_CASE("group_average_metric") {
    fixtures::Rng rng(202);
    const auto ng = fixtures::named_group<double>("Q8");
    const IndefiniteSpace s(2, 4);
    CHECK(oracle::norm2(group_average_metric(block_unitary_rep(rng, ng, s)) - MatrixXcd::Identity(6, 6)) < 1e-13);

    const GroupRep<double> single(trivial_group(), s, {MatrixXcd::Identity(6, 6)});
    CHECK(group_average_metric(single) == MatrixXcd::Identity(6, 6));

    const auto fx = fixtures::conjugated_rep_fixture<double>(rng, ng, 2, 1, 2, 0.6);
    const MatrixXcd b = group_average_metric(fx.rep);
    const double pn = fx.rep.bound();
    CHECK(metric_invariance_defect(fx.rep.matrices(), b) <= 1e-10);
    const Eigen::VectorXd ev = oracle::eigenvalues(b);
    CHECK(ev.minCoeff() >= 1.0 / (pn * pn) - 1e-12);
    CHECK(ev.maxCoeff() <= pn * pn + 1e-12);

    SUBCASE("B^-1 J commutes with the representation") {
        const MatrixXcd bj = b.inverse() * s.J();
        for (const auto& m : fx.rep.matrices()) CHECK(oracle::norm2(bj * m - m * bj) <= 1e-9 * pn * pn);
    }
}

TEST_CASE("definite_pencil_split") {
    fixtures::Rng rng(203);
    const IndefiniteSpace s(3, 4);
    const MatrixXcd c = fixtures::random_complex<double>(rng, 7, 7);
    const MatrixXcd b = c * c.adjoint() + MatrixXcd::Identity(7, 7);
    const PencilSplit<double> p = definite_pencil_split(s, b);
    CHECK(p.negative.dim() == 3);
    CHECK(p.positive.dim() == 4);
    CHECK(oracle::count_below(p.eigenvalues, 0.0) == 3);
    // J v = lambda B v for the negative block
    const MatrixXcd z = p.negative.basis();
    const MatrixXcd lhs = s.J() * z;
    const MatrixXcd proj = z * (z.adjoint() * b * z).inverse() * z.adjoint() * b;
    CHECK(oracle::norm2(b.inverse() * lhs - proj * b.inverse() * lhs) < 1e-10);
    CHECK_THROWS_AS(definite_pencil_split(s, MatrixXcd(-b)), NumericalError);
}

TEST_CASE("common_fixed_point") {
    fixtures::Rng rng(204);
    SUBCASE("unitary rep gives K = 0") {
        const GroupRep<double> u = block_unitary_rep(rng, fixtures::named_group<double>("Z4"), IndefiniteSpace(2, 3));
        const FixedPointReport<double> r = common_fixed_point(u);
        CHECK(r.certified);
        CHECK(r.k_norm < 1e-12);
    }
    SUBCASE("conjugated fixtures recover A") {
        for (const char* name : {"Z2", "Z4", "S3", "D4", "Q8"}) {
            for (int k = 1; k <= 3; ++k) {
                const auto ng = fixtures::named_group<double>(name);
                const auto fx = fixtures::conjugated_rep_fixture<double>(rng, ng, k, 1, 1, 0.6);
                const FixedPointReport<double> r = common_fixed_point(fx.rep);
                CHECK(r.certified);
                CHECK(r.max_map_residual <= 1e-8);
                CHECK(r.max_invariance_residual <= 1e-8);
                CHECK(r.k_norm <= radius_from_norm(fx.rep.bound()) + 1e-8);
                CHECK(r.k_norm <= 0.6 + 1e-8);
                CHECK(oracle::norm2(r.k.matrix() - fx.a.matrix()) <= 1e-6);
            }
        }
    }
    SUBCASE("Z4 rotation blocks with |A| = 0.5 validate") {
        const auto ng = fixtures::named_group<double>("Z4");
        const auto fx = fixtures::conjugated_rep_fixture<double>(rng, ng, 1, 2, 0, 0.5);
        CHECK(rep_validate(fx.rep).valid());
        CHECK(fx.rep.bound() <= std::pow(mobius_norm(fx.a).norm, 2) + 1e-10);
    }
    SUBCASE("identity group") {
        const IndefiniteSpace s(1, 2);
        const auto a = fixtures::random_strict_point<double>(rng, s, 0.3);
        const GroupRep<double> pi =
            fixture_conjugated_rep(trivial_group(), {MatrixXcd::Identity(2, 2)}, {MatrixXcd::Identity(1, 1)}, a);
        CHECK(oracle::norm2(pi(0) - MatrixXcd::Identity(3, 3)) < 1e-14);
    }
    SUBCASE("A = 0 fixture is block-diagonal unitary") {
        const auto ng = fixtures::named_group<double>("S3");
        const IndefiniteSpace s(1, 2);
        const auto fx = fixture_conjugated_rep(ng.mg.group, ng.mg.elements,
                                               std::vector<MatrixXcd>(6, MatrixXcd::Identity(1, 1)),
                                               BallPoint<double>::zero(s));
        for (const auto& m : fx.matrices()) CHECK(oracle::norm2(m.adjoint() * m - MatrixXcd::Identity(3, 3)) < 1e-14);
    }
}

TEST_CASE("approximate mode") {
    fixtures::Rng rng(205);
    const IndefiniteSpace s(2, 3);
    const auto a = fixtures::random_strict_point<double>(rng, s, 0.5);
    auto conjugated_generator = [&](double t_minus, double t1, double t2) {
        MatrixXcd up = MatrixXcd::Identity(3, 3);
        up(0, 0) = std::polar(1.0, t1);
        up(1, 1) = std::polar(1.0, t2);
        const MatrixXcd um = MatrixXcd::Identity(2, 2) * std::polar(1.0, t_minus);
        const MatrixXcd d =
            BlockOperator<double>::from_blocks(s, um, MatrixXcd::Zero(2, 3), MatrixXcd::Zero(3, 2), up).matrix();
        return MatrixXcd(mobius_matrix(a).matrix() * d * mobius_matrix(-a).matrix());
    };

    SUBCASE("finite cyclic group reached by short words certifies") {
        const double w = 2 * M_PI / 7;
        const MatrixXcd gen = conjugated_generator(w, 2 * w, 3 * w);
        const auto words = enumerate_words<double>({gen}, 12);
        CHECK(words.size() == 7);
        const FixedPointReport<double> r = common_fixed_point_generated(s, std::vector<MatrixXcd>{gen}, 12);
        CHECK_FALSE(r.exact);
        CHECK(r.certified);
        CHECK(r.max_map_residual <= 1e-8);
        CHECK(oracle::norm2(r.k.matrix() - a.matrix()) <= 1e-6);
    }
    SUBCASE("infinite group with truncated words is reported uncertified") {
        const MatrixXcd gen = conjugated_generator(1.0, std::sqrt(2.0), -std::sqrt(3.0));
        CHECK(enumerate_words<double>({gen}, 3).size() == 7);
        const FixedPointReport<double> r = common_fixed_point_generated(s, std::vector<MatrixXcd>{gen}, 12);
        CHECK_FALSE(r.exact);
        CHECK_FALSE(r.certified);
        CHECK(r.max_map_residual > 1e-8);
        CHECK(r.message == "fixed-point residual above tolerance");
    }
}

TEST_CASE("invariant_dual_pair") {
    fixtures::Rng rng(206);
    SUBCASE("K = 0 gives the coordinate pair") {
        const IndefiniteSpace s(2, 3);
        const GroupRep<double> u = block_unitary_rep(rng, fixtures::named_group<double>("Z4"), s);
        const DualPair<double> dp = invariant_dual_pair(u, BallPoint<double>::zero(s));
        CHECK(subspace_gap<double>(dp.negative.basis(), MatrixXcd::Identity(5, 5).leftCols(2)) < 1e-14);
        CHECK(subspace_gap<double>(dp.positive.basis(), MatrixXcd::Identity(5, 5).rightCols(3)) < 1e-14);
    }
    SUBCASE("conjugated fixture gives M_A applied to the coordinate pair") {
        for (int i = 0; i < 10; ++i) {
            const auto fx = fixtures::conjugated_rep_fixture<double>(rng, fixtures::named_group<double>("D4"), 2, 1, 1,
                                                                     0.6);
            const DualPair<double> dp = invariant_dual_pair(fx.rep);
            const MatrixXcd ma = mobius_matrix(fx.a).matrix();
            CHECK(subspace_gap<double>(dp.negative.basis(), ma.leftCols(2)) <= 1e-8);
            CHECK(subspace_gap<double>(dp.positive.basis(), ma.rightCols(3)) <= 1e-8);
            CHECK(dp.max_invariance_defect <= 1e-8);
            CHECK(dp.negative_inertia.negative());
            CHECK(dp.positive_inertia.positive());
            CHECK(dp.spans_space);
            CHECK(dp.negative.dim() == 2);
            CHECK(dp.positive.dim() == 3);
        }
    }
}

TEST_CASE("unitarize") {
    fixtures::Rng rng(207);
    SUBCASE("unitary rep") {
        const GroupRep<double> u = block_unitary_rep(rng, fixtures::named_group<double>("S3"), IndefiniteSpace(1, 3));
        const UnitarizationReport<double> r = unitarize(u);
        CHECK(r.certified);
        CHECK(r.cond == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.bound == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("conjugated fixture with |A| = 0.6") {
        for (const char* name : {"Z2", "Z4", "S3", "D4", "Q8"}) {
            const auto fx = fixtures::conjugated_rep_fixture<double>(rng, fixtures::named_group<double>(name), 2, 1, 1,
                                                                     0.6);
            const UnitarizationReport<double> r = unitarize(fx.rep);
            CHECK(r.certified);
            CHECK(r.cond <= 4.0 + 1e-8);
            CHECK(r.cond <= r.bound + 1e-8);
            const Eigen::Index n = fx.rep.space().dim();
            for (std::size_t g = 0; g < r.unitary.size(); ++g) {
                const MatrixXcd uu = r.v * fx.rep.matrices()[g] * r.v.inverse();
                CHECK(oracle::norm2(uu.adjoint() * uu - MatrixXcd::Identity(n, n)) <= 1e-8);
            }
            CHECK(oracle::norm2(r.v * r.v_inv - MatrixXcd::Identity(n, n)) <= 1e-10);
        }
    }
}

TEST_CASE("fixture_double_rep") {
    SUBCASE("form matrix is skew-diagonal and the frame diagonalizes it") {
        const MatrixXcd g = doubled_form<double>(2);
        CHECK(g(0, 2) == cd(1));
        CHECK(g(2, 0) == cd(1));
        CHECK(g(0, 0) == cd(0));
        const MatrixXcd q = doubled_frame<double>(2);
        CHECK(oracle::norm2(q.adjoint() * g * q - IndefiniteSpace(2, 2).J()) < 1e-15);
    }
    SUBCASE("unitary pi gives unitary tau") {
        const auto ng = fixtures::named_group<double>("S3");
        const GroupRep<double> tau = fixture_double_rep(ng.mg.group, ng.mg.elements);
        CHECK(rep_validate(tau).valid());
        for (const auto& m : tau.matrices()) CHECK(oracle::norm2(m.adjoint() * m - MatrixXcd::Identity(4, 4)) < 1e-13);
    }
    SUBCASE("diag(2, 1/2) preserves the doubled form") {
        MatrixXcd p = MatrixXcd::Zero(2, 2);
        p(0, 0) = 2.0;
        p(1, 1) = 0.5;
        const MatrixXcd g = doubled_form<double>(2);
        MatrixXcd pk = MatrixXcd::Identity(2, 2);
        for (int k = 1; k <= 6; ++k) {
            pk = pk * p;
            const MatrixXcd tau = double_operator<double>(pk, pk.inverse());
            CHECK(oracle::norm2(tau.adjoint() * g * tau - g) <= 1e-10 * oracle::norm2(tau) * oracle::norm2(tau));
            const MatrixXcd q = doubled_frame<double>(2);
            CHECK(classify_operator(BlockOperator<double>(IndefiniteSpace(2, 2), q.adjoint() * tau * q), 1e-9).j_unitary);
        }
    }
    SUBCASE("truncated cyclic group with a non-unitary generator") {
        MatrixXcd r = MatrixXcd::Zero(2, 2);
        r(0, 1) = 2.0;
        r(1, 0) = 0.5;  // r^2 = I, a Z2 action by a non-unitary operator
        const auto z2 = fixtures::named_group<double>("Z2");
        std::vector<MatrixXcd> pi;
        for (const auto& e : z2.mg.elements) pi.push_back(e(0, 0).real() > 0 ? MatrixXcd::Identity(2, 2) : r);
        const GroupRep<double> tau = fixture_double_rep(z2.mg.group, pi);
        const RepDiagnostics<double> d = rep_validate(tau);
        CHECK(d.valid());
        CHECK(tau.bound() < 10.0);
    }
    CHECK_THROWS_AS(fixture_double_rep(fixtures::named_group<double>("Z2").mg.group,
                                       std::vector<MatrixXcd>(2, MatrixXcd::Zero(2, 2))),
                    DomainError);
}

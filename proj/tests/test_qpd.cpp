#include <doctest.h>

#include <algorithm>

#include "kreinkit/fixtures.hpp"
#include "oracles.hpp"

using namespace kreinkit;
using cd = std::complex<double>;

namespace {

const fixtures::NamedGroup<double>& z2() {
    static const auto g = fixtures::named_group<double>("Z2");
    return g;
}

/// Exponent a with element = r^a for the 1x1 defining rep of Z_n.
std::vector<int> cyclic_exponents(const fixtures::NamedGroup<double>& ng) {
    const int n = ng.mg.group.order();
    std::vector<int> out;
    for (const auto& e : ng.mg.elements) {
        const int a = static_cast<int>(std::lround(std::arg(e(0, 0)) * n / (2 * M_PI)));
        out.push_back(((a % n) + n) % n);
    }
    return out;
}

GroupFunction<double> z2_example() {
    VectorXcd v(2);
    v << 1.0, 2.0;
    return GroupFunction<double>(z2().mg.group, v);
}

}  // namespace

TEST_CASE("GroupFunction symmetry") {
    VectorXcd v(2);
    v << 1.0, cd(2.0, 1.0);
    CHECK_THROWS_AS(GroupFunction<double>(z2().mg.group, v), DomainError);
    CHECK_THROWS_AS(GroupFunction<double>(z2().mg.group, VectorXcd::Ones(3)), DomainError);
}

TEST_CASE("gram_matrix") {
    const auto ng = fixtures::named_group<double>("S3");
    const int m = ng.mg.group.order();
    VectorXcd delta = VectorXcd::Zero(m);
    delta(ng.mg.group.identity()) = 1.0;
    const GroupFunction<double> d(ng.mg.group, delta);
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    CHECK(gram_matrix(d, all) == MatrixXcd::Identity(m, m));

    MatrixXcd expect(2, 2);
    expect << 1, 2, 2, 1;
    CHECK(gram_matrix(z2_example(), {0, 1}) == expect);

    const GroupFunction<double> one(ng.mg.group, VectorXcd::Ones(m));
    CHECK(gram_matrix(one, all) == MatrixXcd::Ones(m, m));

    SUBCASE("Hermitian, permutation-invariant inertia, translation-invariant form") {
        fixtures::Rng rng(300);
        const auto fx = fixtures::qpd_fixture<double>(rng, ng, 2);
        const MatrixXcd g = full_gram(fx.phi);
        CHECK(g == g.adjoint());
        std::vector<int> perm = all;
        std::shuffle(perm.begin(), perm.end(), rng);
        const double thr = 1e-10 * oracle::norm2(g);
        CHECK(oracle::count_below(oracle::eigenvalues(gram_matrix(fx.phi, perm)), thr) ==
              oracle::count_below(oracle::eigenvalues(g), thr));
        for (int h = 0; h < m; ++h) {
            const MatrixXcd p = translation_matrix<double>(ng.mg.group, h);
            CHECK(oracle::norm2(p.adjoint() * g * p - g) == 0.0);
        }
    }
}

TEST_CASE("negative_squares and finite_type_rank") {
    const auto z4 = fixtures::named_group<double>("Z4");
    const GroupFunction<double> one(z4.mg.group, VectorXcd::Ones(4));
    CHECK(negative_squares(one) == 0);
    CHECK(finite_type_rank(one) == 1);
    CHECK(negative_squares(z2_example()) == 1);
    CHECK_THROWS_AS(finite_type_rank(z2_example()), DomainError);

    VectorXcd two(4);
    for (int g = 0; g < 4; ++g) two(g) = 1.0 + z4.mg.elements[g](0, 0);
    CHECK(finite_type_rank(GroupFunction<double>(z4.mg.group, two)) == 2);

    VectorXcd delta = VectorXcd::Zero(4);
    delta(z4.mg.group.identity()) = 1.0;
    CHECK(finite_type_rank(GroupFunction<double>(z4.mg.group, delta)) == 4);

    SUBCASE("matrix elements of unitary reps are positive definite") {
        fixtures::Rng rng(301);
        const auto q8 = fixtures::named_group<double>("Q8");
        for (int i = 0; i < 10; ++i) {
            const VectorXcd x = fixtures::random_vector<double>(rng, 2);
            VectorXcd v(8);
            for (int g = 0; g < 8; ++g) v(g) = x.dot(q8.mg.elements[g] * x);
            CHECK(negative_squares(GroupFunction<double>(q8.mg.group, v, 1e-12)) == 0);
        }
    }
    SUBCASE("Z2 eigenvalues 3 and -1") {
        const Eigen::VectorXd ev = oracle::eigenvalues(full_gram(z2_example()));
        CHECK(ev(0) == doctest::Approx(-1.0));
        CHECK(ev(1) == doctest::Approx(3.0));
    }
}

TEST_CASE("gns_construct") {
    SUBCASE("constant function") {
        const auto z4 = fixtures::named_group<double>("Z4");
        const GnsResult<double> r = gns_construct(GroupFunction<double>(z4.mg.group, VectorXcd::Ones(4)));
        CHECK(r.rank == 1);
        CHECK(r.negative == 0);
        CHECK(std::abs(std::abs(r.cyclic(0)) - 1.0) < 1e-12);
        for (const auto& u : r.u) CHECK(std::abs(u(0, 0) - cd(1)) < 1e-12);
    }
    SUBCASE("Z2 example") {
        const GnsResult<double> r = gns_construct(z2_example());
        CHECK(r.rank == 2);
        CHECK(r.negative == 1);
        CHECK(r.signs(0) == -1.0);
        CHECK(r.signs(1) == 1.0);
        const MatrixXcd& us = r.u[1];
        CHECK(std::abs(us(0, 0) - cd(-1)) < 1e-12);
        CHECK(std::abs(us(1, 1) - cd(1)) < 1e-12);
        CHECK(std::abs(us(0, 1)) < 1e-12);
        CHECK(r.reproduction_defect <= 1e-9);
    }
    SUBCASE("random fixtures reproduce phi") {
        fixtures::Rng rng(302);
        for (const char* name : {"Z6", "S3", "Q8", "D4"}) {
            const auto ng = fixtures::named_group<double>(name);
            for (int k = 0; k <= 2; ++k) {
                const auto fx = fixtures::qpd_fixture<double>(rng, ng, k);
                const GnsResult<double> r = gns_construct(fx.phi);
                CHECK(r.negative == negative_squares(fx.phi));
                CHECK(r.negative == fx.subtracted_rank);
                CHECK(r.homomorphism_defect <= 1e-9);
                CHECK(r.unitarity_defect <= 1e-9);
                CHECK(r.reproduction_defect <= 1e-9);
                const IndefiniteSpace s = r.space();
                for (int g = 0; g < ng.mg.group.order(); ++g) {
                    const VectorXcd uf = r.u[g] * r.cyclic;
                    CHECK(std::abs(indefinite_product(s, uf, r.cyclic) - fx.phi(g)) <= 1e-9);
                }
                if (k == 0)
                    for (const auto& u : r.u)
                        CHECK(oracle::norm2(u.adjoint() * u - MatrixXcd::Identity(r.rank, r.rank)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("decompose") {
    SUBCASE("Z2 worked example") {
        const Decomposition<double> d = decompose(z2_example());
        CHECK(d.certificate.passed());
        CHECK(std::abs(d.phi1(0) - cd(1.5)) <= 1e-12);
        CHECK(std::abs(d.phi1(1) - cd(1.5)) <= 1e-12);
        CHECK(std::abs(d.phi2(0) - cd(0.5)) <= 1e-12);
        CHECK(std::abs(d.phi2(1) - cd(-0.5)) <= 1e-12);
    }
    SUBCASE("PD input") {
        fixtures::Rng rng(303);
        const auto fx = fixtures::qpd_fixture<double>(rng, fixtures::named_group<double>("S3"), 0);
        const Decomposition<double> d = decompose(fx.phi);
        CHECK(d.certificate.passed());
        CHECK((d.phi1.values() - fx.phi.values()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(d.phi2.values().cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("cyclic groups agree with the character expansion") {
        fixtures::Rng rng(304);
        for (const char* name : {"Z4", "Z6"}) {
            const auto ng = fixtures::named_group<double>(name);
            const int n = ng.mg.group.order();
            const std::vector<int> ex = cyclic_exponents(ng);
            for (int i = 0; i < 5; ++i) {
                const auto fx = fixtures::qpd_fixture<double>(rng, ng, 1 + i % 2);
                VectorXcd by_exp(n);
                for (int g = 0; g < n; ++g) by_exp(ex[g]) = fx.phi(g);
                const VectorXcd c = oracle::cyclic_fourier(by_exp);
                VectorXcd p1 = VectorXcd::Zero(n), p2 = VectorXcd::Zero(n);
                for (int g = 0; g < n; ++g)
                    for (int j = 0; j < n; ++j) {
                        const cd chi = std::polar(1.0, 2.0 * M_PI * j * ex[g] / n);
                        if (c(j).real() > 0) p1(g) += c(j) * chi;
                        if (c(j).real() < 0) p2(g) -= c(j) * chi;
                    }
                const Decomposition<double> d = decompose(fx.phi);
                CHECK(d.certificate.passed());
                CHECK((d.phi1.values() - p1).cwiseAbs().maxCoeff() <= 1e-8);
                CHECK((d.phi2.values() - p2).cwiseAbs().maxCoeff() <= 1e-8);
            }
        }
    }
    SUBCASE("random QPD on Z6 minus rank one") {
        fixtures::Rng rng(305);
        const auto ng = fixtures::named_group<double>("Z6");
        for (int i = 0; i < 10; ++i) {
            const auto fx = fixtures::qpd_fixture<double>(rng, ng, 1);
            CHECK(negative_squares(fx.phi) == 1);
            const Decomposition<double> d = decompose(fx.phi);
            CHECK(d.certificate.passed());
            CHECK(d.rank_within_k);
            const double scale = fx.phi.values().cwiseAbs().maxCoeff();
            CHECK((fx.phi.values() - d.phi1.values() + d.phi2.values()).cwiseAbs().maxCoeff() <= 1e-8 * scale);
        }
    }
}

TEST_CASE("verify_decomposition") {
    fixtures::Rng rng(306);
    const auto ng = fixtures::named_group<double>("D4");
    const auto fx = fixtures::qpd_fixture<double>(rng, ng, 2);
    const Decomposition<double> d = decompose(fx.phi);
    CHECK(verify_decomposition(fx.phi, d.phi1, d.phi2).passed());

    const auto pd = fixtures::qpd_fixture<double>(rng, ng, 0).phi;
    const GroupFunction<double> zero(ng.mg.group, VectorXcd::Zero(8));
    CHECK(verify_decomposition(pd, pd, zero).passed());

    const GroupFunction<double> neg(ng.mg.group, -pd.values());
    const DecompositionCertificate<double> bad = verify_decomposition(pd, zero, neg);
    CHECK_FALSE(bad.passed());
    CHECK_FALSE(bad.phi2_pd);

    const DecompositionCertificate<double> off = verify_decomposition(fx.phi, d.phi1, zero);
    CHECK_FALSE(off.reconstructs);
}

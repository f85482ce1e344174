#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zak/elliptic.hpp"
#include "zak/errors.hpp"

using namespace zak::elliptic;
constexpr double kPi = std::numbers::pi;

TEST_CASE("complete K: special values and quadrature oracle") {
    CHECK(complete_K(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(complete_K(0.5) == doctest::Approx(1.85407467730137).epsilon(1e-13));
    CHECK(complete_K(0.5) == doctest::Approx(oracle::quad_complete_K(0.5)).epsilon(1e-12));
    CHECK(complete_K(0.1) < complete_K(0.5));
    CHECK(complete_K(0.5) < complete_K(0.9));

    for (double q : {0.05, 0.3, 0.6, 0.9, 0.99})
        CHECK(complete_K(q) == doctest::Approx(oracle::quad_complete_K(q)).epsilon(1e-11));

    CHECK_THROWS_AS(complete_K(-0.1), zak::DomainError);
    CHECK_THROWS_AS(complete_K(1.0), zak::DomainError);
    CHECK_THROWS_AS(complete_K(1.0 - 1e-14), zak::DomainError);
}

TEST_CASE("jacobi functions: special points") {
    for (double q : {0.0, 0.3, 0.9}) {
        const auto j = jacobi_snd(0.0, q);
        CHECK(j.sn == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(j.cn == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(j.dn == doctest::Approx(1.0).epsilon(1e-15));
    }

    for (double u : {-2.3, 0.4, 1.7}) {
        const auto j = jacobi_snd(u, 0.0);
        CHECK(j.sn == doctest::Approx(std::sin(u)).epsilon(1e-13));
        CHECK(j.cn == doctest::Approx(std::cos(u)).epsilon(1e-13));
        CHECK(j.dn == doctest::Approx(1.0).epsilon(1e-13));
    }

    const double q = 0.7;
    const auto j = jacobi_snd(complete_K(q), q);
    CHECK(j.sn == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(j.cn) <= 1e-12);
    CHECK(j.dn == doctest::Approx(std::sqrt(1.0 - q)).epsilon(1e-12));
}

TEST_CASE("jacobi identities over a (u, q) grid") {
    for (int iq = 0; iq < 100; ++iq) {
        const double q = iq / 100.0;
        for (int iu = 0; iu < 100; ++iu) {
            const double u = -8.0 + 16.0 * iu / 99.0;
            const auto j = jacobi_snd(u, q);
            CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) <= 1e-12);
            CHECK(std::abs(j.dn * j.dn + q * j.sn * j.sn - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("jacobi derivative identities at second order") {
    // centered differences of sn, cn, dn against cn*dn, -sn*dn, -q*sn*cn
    const double q = 0.6, u = 0.83;
    auto fd_err = [&](double h) {
        const auto jm = jacobi_snd(u - h, q);
        const auto jp = jacobi_snd(u + h, q);
        const auto j = jacobi_snd(u, q);
        const double dsn = (jp.sn - jm.sn) / (2.0 * h);
        const double dcn = (jp.cn - jm.cn) / (2.0 * h);
        const double ddn = (jp.dn - jm.dn) / (2.0 * h);
        return std::max({std::abs(dsn - j.cn * j.dn), std::abs(dcn + j.sn * j.dn),
                         std::abs(ddn + q * j.sn * j.cn)});
    };
    const double e1 = fd_err(1e-3), e2 = fd_err(5e-4);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("dn is 2K periodic") {
    oracle::Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const double q = 0.999 * std::abs(rng.uniform());
        const double u = 12.0 * rng.uniform();
        const double Kq = complete_K(q);
        CHECK(std::abs(jacobi_snd(u + 2.0 * Kq, q).dn - jacobi_snd(u, q).dn) <= 1e-11);
    }
}

TEST_CASE("incomplete E2: special values and quadrature oracle") {
    for (double q : {0.0, 0.4, 0.9}) CHECK(incomplete_E2(0.0, q) == 0.0);
    for (double phi : {-1.2, 0.3, 2.9}) CHECK(incomplete_E2(phi, 0.0) == doctest::Approx(phi).epsilon(1e-14));

    CHECK(incomplete_E2(kPi / 2.0, 0.5) ==
          doctest::Approx(oracle::quad_incomplete_E2(kPi / 2.0, 0.5)).epsilon(1e-12));

    for (double q : {0.1, 0.5, 0.95})
        for (double phi : {0.3, 1.0, 1.5, 2.5, 4.0})
            CHECK(incomplete_E2(phi, q) ==
                  doctest::Approx(oracle::quad_incomplete_E2(phi, q)).epsilon(1e-11));
}

TEST_CASE("E2 additivity across pi shifts") {
    oracle::Rng rng(37);
    for (int rep = 0; rep < 200; ++rep) {
        const double q = 0.999 * std::abs(rng.uniform());
        const double phi = 6.0 * rng.uniform();
        const double lhs = incomplete_E2(phi + kPi, q) - incomplete_E2(phi, q) -
                           2.0 * incomplete_E2(kPi / 2.0, q);
        CHECK(std::abs(lhs) <= 1e-11);
    }
}

TEST_CASE("complement-parameterized entry points agree") {
    for (double q : {0.0, 0.5, 0.999}) {
        CHECK(complete_K(q) == complete_K_comp(1.0 - q));
        CHECK(complete_E2(q) == complete_E2_comp(1.0 - q));
        const auto a = jacobi_snd(1.3, q);
        const auto b = jacobi_snd_comp(1.3, 1.0 - q);
        CHECK(a.sn == b.sn);
        CHECK(a.dn == b.dn);
    }
    CHECK_THROWS_AS(complete_K_comp(1e-13), zak::DomainError);
}

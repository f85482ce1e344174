#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zak/grid.hpp"

using namespace zak;
constexpr double kPi = std::numbers::pi;

TEST_CASE("difference operators annihilate constants") {
    const Grid g(16, 4.0);
    const RealField c(16, 3.7);
    for (const auto& r : {forward_diff(c, g), backward_diff(c, g), second_diff(c, g)})
        for (double x : r) CHECK(x == doctest::Approx(0.0).epsilon(1e-15));
    const auto a = forward_avg(c, g);
    for (double x : a) CHECK(x == doctest::Approx(3.7));
}

TEST_CASE("forward difference, direct stencil evaluation") {
    const Grid g(4, 2.0);  // dx = 0.5
    const RealField v{0.0, 1.0, 0.0, 0.0};
    const auto r = forward_diff(v, g);
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(r[1] == doctest::Approx(-2.0));
    CHECK(r[2] == doctest::Approx(0.0));
    CHECK(r[3] == doctest::Approx(0.0));
}

TEST_CASE("forward difference converges to the derivative at first order") {
    const double L = 20.0;
    auto max_err = [&](int K) {
        const Grid g(K, L);
        RealField v(K);
        for (int k = 0; k < K; ++k) v[k] = std::sin(2.0 * kPi * g.x(k) / L);
        const auto d = forward_diff(v, g);
        double err = 0.0;
        for (int k = 0; k < K; ++k) {
            const double exact = 2.0 * kPi / L * std::cos(2.0 * kPi * g.x(k) / L);
            err = std::max(err, std::abs(d[k] - exact));
        }
        return err;
    };
    const double e1 = max_err(64), e2 = max_err(128);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("backward difference identities and dense oracle") {
    const Grid g(8, 4.0);
    oracle::Rng rng(101);
    const auto v = rng.real_field(8);

    const auto bd = backward_diff(v, g);
    const auto fd = forward_diff(v, g);
    for (int k = 0; k < 8; ++k) CHECK(bd[k] == doctest::Approx(fd[(k + 7) % 8]).epsilon(1e-14));

    // dense circulant backward-difference matrix
    CyclicTridiagonal<double> B;
    B.lower.assign(8, -1.0 / g.dx());
    B.diag.assign(8, 1.0 / g.dx());
    B.upper.assign(8, 0.0);
    const auto M = oracle::dense_from_cyclic(B);
    for (int k = 0; k < 8; ++k) {
        double s = 0.0;
        for (int j = 0; j < 8; ++j) s += M[k][j] * v[j];
        CHECK(bd[k] == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("second difference: direct value and operator composition") {
    const Grid g(4, 4.0);  // dx = 1
    const RealField v{1.0, 0.0, 0.0, 0.0};
    const auto d2 = second_diff(v, g);
    CHECK(d2[0] == doctest::Approx(-2.0));
    CHECK(d2[1] == doctest::Approx(1.0));
    CHECK(d2[2] == doctest::Approx(0.0));
    CHECK(d2[3] == doctest::Approx(1.0));

    const Grid g64(64, 2.0);
    oracle::Rng rng(7);
    const auto w = rng.real_field(64);
    const auto a = second_diff(w, g64);
    const auto b = forward_diff(backward_diff(w, g64), g64);
    const auto c = backward_diff(forward_diff(w, g64), g64);
    for (int k = 0; k < 64; ++k) {
        CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
        CHECK(a[k] == doctest::Approx(c[k]).epsilon(1e-14));
    }
}

TEST_CASE("second difference conserves the mean") {
    const Grid g(50, 10.0);
    oracle::Rng rng(11);
    const auto v = rng.real_field(50, 5.0);
    const auto d2 = second_diff(v, g);
    double s = 0.0;
    for (double x : d2) s += x;
    CHECK(std::abs(s) <= 1e-12 * norm_2(v, g) / (g.dx() * g.dx()));
}

TEST_CASE("inner product basics") {
    const Grid g(40, 20.0);
    oracle::Rng rng(13);
    const auto v = rng.complex_field(40);
    const cplx vv = inner_product(v, v, g);
    CHECK(vv.imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(vv.real() >= 0.0);
    CHECK(vv.real() == doctest::Approx(sq_norm(v, g)).epsilon(1e-13));

    const ComplexField ones(40, cplx(1.0, 0.0));
    CHECK(inner_product(ones, ones, g).real() == doctest::Approx(20.0));
}

TEST_CASE("summation by parts: <d+ v, w> = -<v, d- w>") {
    const Grid g(33, 7.0);
    oracle::Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const auto v = rng.complex_field(33);
        const auto w = rng.complex_field(33);
        const cplx lhs = inner_product(forward_diff(v, g), w, g);
        const cplx rhs = inner_product(v, backward_diff(w, g), g);
        CHECK(std::abs(lhs + rhs) <= 1e-12 * (norm_2(v, g) * norm_2(w, g) + 1.0) / g.dx());
    }
}

TEST_CASE("norms") {
    const Grid g(40, 20.0);
    const RealField zero(40, 0.0);
    for (double p : {1.0, 2.0, 3.5}) CHECK(norm_p(zero, p, g) == 0.0);
    CHECK(norm_p(zero, std::numeric_limits<double>::infinity(), g) == 0.0);

    const RealField ones(40, 1.0);
    CHECK(norm_p(ones, 2.0, g) == doctest::Approx(std::sqrt(20.0)));
    CHECK_THROWS_AS(norm_p(ones, 0.5, g), DomainError);
}

TEST_CASE("discrete Sobolev inequality on random fields") {
    oracle::Rng rng(19);
    for (int rep = 0; rep < 1000; ++rep) {
        const int K = 8 + (rep % 5) * 8;
        const double L = 0.25 + 5.0 * (rep % 7);
        const Grid g(K, L);
        const auto v = rng.complex_field(K, 2.0);
        const double lhs = norm_inf(v);
        const double rhs = sobolev_Lhat(L) *
                           std::sqrt(sq_norm(v, g) + sq_norm(forward_diff(v, g), g));
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("temporal averages and differences") {
    const Grid g(24, 6.0);
    oracle::Rng rng(23);
    const auto v = rng.complex_field(24);
    const auto a = avg2(v, v);
    const auto d = diff2(v, v, 0.1);
    for (int k = 0; k < 24; ++k) {
        CHECK(std::abs(a[k] - v[k]) == 0.0);
        CHECK(std::abs(d[k]) == 0.0);
    }

    // dt+ ||z||^2 = 2 Re <dt+ z, mu+ z>
    for (int rep = 0; rep < 50; ++rep) {
        const double dt = 0.05;
        const auto z0 = rng.complex_field(24);
        const auto z1 = rng.complex_field(24);
        const double lhs = (sq_norm(z1, g) - sq_norm(z0, g)) / dt;
        const double rhs = 2.0 * inner_product(diff2(z0, z1, dt), avg2(z0, z1), g).real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("operators commute with cyclic index rotation") {
    const Grid g(30, 3.0);
    oracle::Rng rng(29);
    const auto v = rng.real_field(30);
    auto rotate = [](const RealField& f, int s) {
        RealField r(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) r[k] = f[(k + s) % f.size()];
        return r;
    };
    for (int s : {1, 7, 29}) {
        const auto a = rotate(forward_diff(v, g), s);
        const auto b = forward_diff(rotate(v, s), g);
        const auto c = rotate(second_diff(v, g), s);
        const auto d = second_diff(rotate(v, s), g);
        const auto e = rotate(forward_avg(v, g), s);
        const auto f = forward_avg(rotate(v, s), g);
        for (int k = 0; k < 30; ++k) {
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
            CHECK(c[k] == doctest::Approx(d[k]).epsilon(1e-14));
            CHECK(e[k] == doctest::Approx(f[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("shape and domain errors") {
    const Grid g(8, 2.0);
    const RealField bad(7, 0.0);
    CHECK_THROWS_AS(forward_diff(bad, g), ShapeError);
    CHECK_THROWS_AS(second_diff(bad, g), ShapeError);
    CHECK_THROWS_AS(Grid(2, 1.0), DomainError);
    CHECK_THROWS_AS(Grid(8, -1.0), DomainError);
}

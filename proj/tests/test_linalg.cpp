#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "zak/linalg.hpp"

using namespace zak;

namespace {

template <class T>
double rel_diff(const std::vector<T>& a, const std::vector<T>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += std::norm(a[k] - b[k]);
        den += std::norm(b[k]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

CyclicTridiagonal<double> random_dominant(oracle::Rng& rng, int K) {
    CyclicTridiagonal<double> A;
    A.lower.resize(K);
    A.diag.resize(K);
    A.upper.resize(K);
    for (int k = 0; k < K; ++k) {
        A.lower[k] = rng.uniform();
        A.upper[k] = rng.uniform();
        A.diag[k] = (rng.uniform() > 0 ? 1.0 : -1.0) *
                    (std::abs(A.lower[k]) + std::abs(A.upper[k]) + 0.5 + std::abs(rng.uniform()));
    }
    return A;
}

}  // namespace

TEST_CASE("identity factorization returns its input") {
    oracle::Rng rng(1);
    const auto I = CyclicTridiagonal<double>::identity(12);
    const RealCyclicFactor F(I);
    const auto b = rng.real_field(12);
    const auto x = F.solve(b);
    for (int k = 0; k < 12; ++k) CHECK(x[k] == doctest::Approx(b[k]).epsilon(1e-15));
}

TEST_CASE("Glassey N-matrix solve matches dense elimination") {
    const Grid g(8, 4.0);  // dx = 0.5
    const double dt = 0.1;
    const double c = 0.5 * dt * dt / (g.dx() * g.dx());
    CyclicTridiagonal<double> A;
    A.lower.assign(8, -c);
    A.diag.assign(8, 1.0 + 2.0 * c);
    A.upper.assign(8, -c);

    oracle::Rng rng(2);
    const auto b = rng.real_field(8);
    const auto x = RealCyclicFactor(A).solve(b);
    const auto xd = oracle::dense_solve(oracle::dense_from_cyclic(A), b);
    CHECK(rel_diff(x, xd) <= 1e-12);
}

TEST_CASE("complex Schrodinger-type matrix solve matches dense oracle") {
    const Grid g(8, 4.0);
    const double dt = 0.1, w = dt / (g.dx() * g.dx());
    oracle::Rng rng(3);
    const auto n = rng.real_field(8, 2.0);

    CyclicTridiagonal<cplx> A;
    A.lower.assign(8, cplx(w, 0.0));
    A.upper.assign(8, cplx(w, 0.0));
    A.diag.resize(8);
    for (int k = 0; k < 8; ++k) A.diag[k] = cplx(-2.0 * w - dt * n[k], 2.0);

    const auto b = rng.complex_field(8);
    const auto x = ComplexCyclicFactor(A).solve(b);
    const auto xd = oracle::dense_solve(oracle::dense_from_cyclic(A), b);
    CHECK(rel_diff(x, xd) <= 1e-11);
}

TEST_CASE("solve basics: zero rhs, construct-and-recover, determinism") {
    oracle::Rng rng(4);
    const auto A = random_dominant(rng, 16);
    const RealCyclicFactor F(A);

    const auto zero = F.solve(RealField(16, 0.0));
    for (double v : zero) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

    const auto x_true = rng.real_field(16);
    const auto x = F.solve(A.apply(x_true));
    CHECK(rel_diff(x, x_true) <= 1e-11);

    const auto b = rng.real_field(16);
    const auto x1 = F.solve(b);
    const auto x2 = RealCyclicFactor(A).solve(b);
    for (int k = 0; k < 16; ++k) CHECK(x1[k] == x2[k]);  // bitwise
}

TEST_CASE("cyclic solves agree with dense LU over random systems") {
    oracle::Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const int K = (rep % 3 == 0) ? 4 : (rep % 3 == 1) ? 8 : 16;
        const auto A = random_dominant(rng, K);
        const auto b = rng.real_field(K);
        const auto x = RealCyclicFactor(A).solve(b);
        const auto xd = oracle::dense_solve(oracle::dense_from_cyclic(A), b);
        CHECK(rel_diff(x, xd) <= 1e-11);
    }
}

TEST_CASE("singular pivot raises with an index") {
    CyclicTridiagonal<double> A = CyclicTridiagonal<double>::identity(6);
    A.diag.assign(6, 0.0);
    A.lower.assign(6, 0.0);
    A.upper.assign(6, 0.0);
    CHECK_THROWS_AS(RealCyclicFactor{A}, SingularMatrixError);
}

TEST_CASE("poisson_meanzero basics") {
    const Grid g(24, 12.0);
    const auto z = poisson_meanzero(RealField(24, 0.0), g);
    for (double v : z) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

    // constant rhs is orthogonal to the range of D2
    const auto c = poisson_meanzero(RealField(24, 3.1), g);
    for (double v : c) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("poisson_meanzero recovers mean-zero potentials") {
    oracle::Rng rng(6);
    const Grid g(32, 8.0);
    auto W = rng.real_field(32);
    const double mu = mean(W);
    for (auto& v : W) v -= mu;

    const auto rhs = second_diff(W, g);
    const auto V = poisson_meanzero(rhs, g);
    CHECK(rel_diff(V, W) <= 1e-10);
}

TEST_CASE("poisson_meanzero matches the dense pseudo-inverse at small K") {
    oracle::Rng rng(7);
    for (int K : {4, 8, 16}) {
        const Grid g(K, 2.5);
        const auto rhs = rng.real_field(K, 3.0);
        const auto V = poisson_meanzero(rhs, g);
        const auto Vd = oracle::dense_poisson_meanzero(rhs, g);
        CHECK(rel_diff(V, Vd) <= 1e-10);

        double s = 0.0;
        for (double v : V) s += v;
        CHECK(std::abs(s / K) <= 1e-13 * (norm_2(rhs, g) * g.L + 1e-30));

        // D2 V equals the mean-zero projection of rhs
        const auto DV = second_diff(V, g);
        RealField proj(rhs);
        const double mu = mean(rhs);
        for (auto& v : proj) v -= mu;
        CHECK(rel_diff(DV, proj) <= 1e-10);
    }
}

TEST_CASE("block cyclic solver matches dense elimination") {
    oracle::Rng rng(8);
    for (int K : {4, 8, 16}) {
        SparseBlockSystem J;
        J.lower.assign(K, Mat3{});
        J.diag.assign(K, Mat3{});
        J.upper.assign(K, Mat3{});
        for (int k = 0; k < K; ++k) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    J.lower[k](i, j) = 0.3 * rng.uniform();
                    J.upper[k](i, j) = 0.3 * rng.uniform();
                    J.diag[k](i, j) = 0.3 * rng.uniform();
                }
            for (int i = 0; i < 3; ++i) J.diag[k](i, i) += 4.0;  // keep it well conditioned
        }

        // dense assembly
        const int n = 3 * K;
        oracle::DenseMatrix<double> M(n, std::vector<double>(n, 0.0));
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    M[3 * k + i][3 * ((k + K - 1) % K) + j] += J.lower[k](i, j);
                    M[3 * k + i][3 * k + j] += J.diag[k](i, j);
                    M[3 * k + i][3 * ((k + 1) % K) + j] += J.upper[k](i, j);
                }

        std::vector<double> b(n);
        for (auto& v : b) v = rng.uniform();
        const auto x = BlockCyclicFactor(J).solve(b);
        const auto xd = oracle::dense_solve(M, b);
        CHECK(rel_diff(x, xd) <= 1e-11);
    }
}

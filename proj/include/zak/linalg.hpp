/// @file linalg.hpp
/// @brief Cyclic (periodic) tridiagonal solvers, the mean-zero Poisson solve
///        used to recover V, and the block solver behind the Newton step.
///
/// Cyclic systems are handled by the Thomas algorithm plus a Sherman-Morrison
/// rank-1 correction for the periodic corners; the 3x3-block variant uses a
/// rank-6 Woodbury correction.  Everything is O(K) per solve and
/// factorizations are immutable after construction.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "zak/errors.hpp"
#include "zak/grid.hpp"

namespace zak {

/// Periodic tridiagonal matrix: A[k][k] = diag[k], A[k][(k-1) mod K] = lower[k],
/// A[k][(k+1) mod K] = upper[k].  lower[0] and upper[K-1] are the corners.
template <class T>
struct CyclicTridiagonal {
    std::vector<T> lower, diag, upper;

    int size() const { return static_cast<int>(diag.size()); }

    static CyclicTridiagonal identity(int K) {
        CyclicTridiagonal A;
        A.lower.assign(K, T(0));
        A.diag.assign(K, T(1));
        A.upper.assign(K, T(0));
        return A;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        const int K = size();
        if (static_cast<int>(x.size()) != K) throw ShapeError("CyclicTridiagonal::apply");
        std::vector<T> y(K);
        for (int k = 0; k < K; ++k) {
            const int km = (k == 0) ? K - 1 : k - 1;
            const int kp = (k + 1 == K) ? 0 : k + 1;
            y[k] = lower[k] * x[km] + diag[k] * x[k] + upper[k] * x[kp];
        }
        return y;
    }
};

/// Representation matrix of the second difference operator, scaled 1/dx^2.
CyclicTridiagonal<double> second_diff_matrix(const Grid& g);

/// LU-style factorization of a cyclic tridiagonal matrix for repeated solves.
template <class T>
class CyclicTridiagFactor {
public:
    explicit CyclicTridiagFactor(const CyclicTridiagonal<T>& A);

    std::vector<T> solve(const std::vector<T>& b) const;

    int size() const { return K_; }

private:
    int K_;
    std::vector<T> mult_;     // forward-elimination multipliers
    std::vector<T> inv_piv_;  // reciprocal pivots
    std::vector<T> upper_;    // upper diagonal of the Thomas core
    std::vector<T> z_;        // core^{-1} u  (Sherman-Morrison)
    T v_last_;                // v = (1, 0, ..., 0, v_last)
    T denom_;                 // 1 + v^T z

    std::vector<T> core_solve(const std::vector<T>& b) const;
};

using RealCyclicFactor = CyclicTridiagFactor<double>;
using ComplexCyclicFactor = CyclicTridiagFactor<cplx>;

/// Minimum-norm least-squares solve of  D2 V = rhs  on the periodic grid:
/// rhs is projected onto mean-zero fields and the unique mean-zero solution
/// is returned (the action of the Moore-Penrose pseudo-inverse of D2).
RealField poisson_meanzero(const RealField& rhs, const Grid& g);

/// Same solve with the factorization cached across calls.
class PoissonMeanZero {
public:
    explicit PoissonMeanZero(const Grid& g);
    RealField solve(const RealField& rhs) const;

private:
    Grid g_;
    CyclicTridiagonal<double> D_;
    RealCyclicFactor factor_;
};

/// Dense 3x3 block; row-major.
struct Mat3 {
    std::array<double, 9> a{};
    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
};

/// Assembled Jacobian of the DVDM Newton map in 3x3-block cyclic tridiagonal
/// form (unknowns interleaved per node as Re E, Im E, N), together with its
/// structural nonzero count.
struct SparseBlockSystem {
    std::vector<Mat3> lower, diag, upper;
    int nnz = 0;

    int blocks() const { return static_cast<int>(diag.size()); }
};

/// Block Thomas factorization with a rank-6 Woodbury correction for the
/// periodic corner blocks.
class BlockCyclicFactor {
public:
    explicit BlockCyclicFactor(const SparseBlockSystem& J);

    /// Solves J x = b with b node-interleaved, length 3K.
    std::vector<double> solve(const std::vector<double>& b) const;

private:
    int K_;
    std::vector<Mat3> mult_;       // L_k Delta_{k-1}^{-1}
    std::vector<Mat3> piv_lu_;     // LU factors of pivot blocks
    std::vector<std::array<int, 3>> piv_perm_;
    std::vector<Mat3> upper_;
    std::vector<std::array<double, 6>> zcols_;  // core^{-1} U, row blocks
    std::array<double, 36> cap_lu_{};           // 6x6 capacitance LU
    std::array<int, 6> cap_perm_{};
    bool has_corners_ = false;
    Mat3 corner_top_, corner_bot_;

    void core_solve_inplace(std::vector<double>& b) const;
};

}  // namespace zak

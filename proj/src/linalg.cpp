/// @file linalg.cpp

#include "zak/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace zak {

namespace {

template <class T>
double abs_of(const T& x) {
    return std::abs(x);
}

template <class T>
double scale_of(const CyclicTridiagonal<T>& A) {
    double s = 0.0;
    for (int k = 0; k < A.size(); ++k)
        s = std::max(s, abs_of(A.diag[k]) + abs_of(A.lower[k]) + abs_of(A.upper[k]));
    return s;
}

}  // namespace

CyclicTridiagonal<double> second_diff_matrix(const Grid& g) {
    const double w = 1.0 / (g.dx() * g.dx());
    CyclicTridiagonal<double> D;
    D.lower.assign(g.K, w);
    D.diag.assign(g.K, -2.0 * w);
    D.upper.assign(g.K, w);
    return D;
}

template <class T>
CyclicTridiagFactor<T>::CyclicTridiagFactor(const CyclicTridiagonal<T>& A) : K_(A.size()) {
    if (K_ < 3) throw ShapeError("cyclic factor needs K >= 3");
    const double tol = 1e-14 * std::max(scale_of(A), 1e-300);

    const T c01 = A.lower[0];       // corner (0, K-1)
    const T cK0 = A.upper[K_ - 1];  // corner (K-1, 0)
    const T gamma = (abs_of(A.diag[0]) > 0.0) ? -A.diag[0] : T(1);
    v_last_ = c01 / gamma;

    // Sherman-Morrison core: corners removed, first/last diagonal adjusted.
    std::vector<T> d(A.diag);
    d[0] -= gamma;
    d[K_ - 1] -= cK0 * v_last_;

    mult_.assign(K_, T(0));
    inv_piv_.assign(K_, T(0));
    upper_ = A.upper;

    T piv = d[0];
    if (abs_of(piv) < tol) throw SingularMatrixError(0);
    inv_piv_[0] = T(1) / piv;
    for (int i = 1; i < K_; ++i) {
        mult_[i] = A.lower[i] * inv_piv_[i - 1];
        piv = d[i] - mult_[i] * upper_[i - 1];
        if (abs_of(piv) < tol) throw SingularMatrixError(i);
        inv_piv_[i] = T(1) / piv;
    }

    std::vector<T> u(K_, T(0));
    u[0] = gamma;
    u[K_ - 1] = cK0;
    z_ = core_solve(u);
    denom_ = T(1) + z_[0] + v_last_ * z_[K_ - 1];
    if (abs_of(denom_) < 1e-14) throw SingularMatrixError(K_ - 1);
}

template <class T>
std::vector<T> CyclicTridiagFactor<T>::core_solve(const std::vector<T>& b) const {
    std::vector<T> x(b);
    for (int i = 1; i < K_; ++i) x[i] -= mult_[i] * x[i - 1];
    x[K_ - 1] *= inv_piv_[K_ - 1];
    for (int i = K_ - 2; i >= 0; --i) x[i] = (x[i] - upper_[i] * x[i + 1]) * inv_piv_[i];
    return x;
}

template <class T>
std::vector<T> CyclicTridiagFactor<T>::solve(const std::vector<T>& b) const {
    if (static_cast<int>(b.size()) != K_) throw ShapeError("cyclic solve: length mismatch");
    std::vector<T> x = core_solve(b);
    const T fac = (x[0] + v_last_ * x[K_ - 1]) / denom_;
    for (int i = 0; i < K_; ++i) x[i] -= fac * z_[i];
    return x;
}

template class CyclicTridiagFactor<double>;
template class CyclicTridiagFactor<cplx>;

PoissonMeanZero::PoissonMeanZero(const Grid& g) : g_(g), D_(second_diff_matrix(g)), factor_([&] {
    // Pin V[K-1] = 0 by replacing the last row; the dropped equation is the
    // sum of the others, so nothing is lost for mean-zero right-hand sides.
    CyclicTridiagonal<double> M = second_diff_matrix(g);
    M.lower[g.K - 1] = 0.0;
    M.diag[g.K - 1] = 1.0;
    M.upper[g.K - 1] = 0.0;  // also removes the (K-1, 0) corner
    return CyclicTridiagFactor<double>(M);
}()) {}

RealField PoissonMeanZero::solve(const RealField& rhs) const {
    detail::check_len(rhs.size(), g_, "poisson_meanzero");
    const int K = g_.K;
    const double mu = mean(rhs);

    RealField b(K);
    for (int k = 0; k < K; ++k) b[k] = rhs[k] - mu;
    RealField proj = b;
    b[K - 1] = 0.0;

    RealField V = factor_.solve(b);

    // One pass of iterative refinement keeps D2*V - proj at roundoff even for
    // large K, which the energy bookkeeping of the Glassey runs relies on.
    RealField DV = D_.apply(V);
    RealField r(K);
    for (int k = 0; k < K - 1; ++k) r[k] = proj[k] - DV[k];
    r[K - 1] = -V[K - 1];
    RealField dV = factor_.solve(r);
    for (int k = 0; k < K; ++k) V[k] += dV[k];

    const double vbar = mean(V);
    for (int k = 0; k < K; ++k) V[k] -= vbar;
    return V;
}

RealField poisson_meanzero(const RealField& rhs, const Grid& g) {
    return PoissonMeanZero(g).solve(rhs);
}

// ---------------------------------------------------------------------------
// 3x3 block machinery
// ---------------------------------------------------------------------------

namespace {

Mat3 mat3_mul(const Mat3& A, const Mat3& B) {
    Mat3 C;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) s += A(i, l) * B(l, j);
            C(i, j) = s;
        }
    return C;
}

Mat3 mat3_sub(const Mat3& A, const Mat3& B) {
    Mat3 C;
    for (int i = 0; i < 9; ++i) C.a[i] = A.a[i] - B.a[i];
    return C;
}

void mat3_vec(const Mat3& A, const double* x, double* y) {
    for (int i = 0; i < 3; ++i)
        y[i] = A(i, 0) * x[0] + A(i, 1) * x[1] + A(i, 2) * x[2];
}

/// Partial-pivot inverse of a 3x3 block; throws with the global pivot index.
Mat3 mat3_inv(const Mat3& A, int node) {
    Mat3 lu = A;
    int perm[3] = {0, 1, 2};
    double scale = 0.0;
    for (double v : A.a) scale = std::max(scale, std::abs(v));
    const double tol = 1e-14 * std::max(scale, 1e-300);

    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(lu(r, c)) > std::abs(lu(p, c))) p = r;
        if (p != c) {
            for (int j = 0; j < 3; ++j) std::swap(lu.a[3 * c + j], lu.a[3 * p + j]);
            std::swap(perm[c], perm[p]);
        }
        if (std::abs(lu(c, c)) < tol) throw SingularMatrixError(3 * node + c);
        for (int r = c + 1; r < 3; ++r) {
            lu(r, c) /= lu(c, c);
            for (int j = c + 1; j < 3; ++j) lu(r, j) -= lu(r, c) * lu(c, j);
        }
    }

    Mat3 inv;
    for (int col = 0; col < 3; ++col) {
        double b[3] = {0.0, 0.0, 0.0};
        b[0] = (perm[0] == col) ? 1.0 : 0.0;
        b[1] = (perm[1] == col) ? 1.0 : 0.0;
        b[2] = (perm[2] == col) ? 1.0 : 0.0;
        b[1] -= lu(1, 0) * b[0];
        b[2] -= lu(2, 0) * b[0] + lu(2, 1) * b[1];
        b[2] /= lu(2, 2);
        b[1] = (b[1] - lu(1, 2) * b[2]) / lu(1, 1);
        b[0] = (b[0] - lu(0, 1) * b[1] - lu(0, 2) * b[2]) / lu(0, 0);
        inv(0, col) = b[0];
        inv(1, col) = b[1];
        inv(2, col) = b[2];
    }
    return inv;
}

/// Dense 6x6 LU with partial pivoting for the Woodbury capacitance matrix.
void lu6(std::array<double, 36>& a, std::array<int, 6>& perm) {
    for (int i = 0; i < 6; ++i) perm[i] = i;
    for (int c = 0; c < 6; ++c) {
        int p = c;
        for (int r = c + 1; r < 6; ++r)
            if (std::abs(a[6 * r + c]) > std::abs(a[6 * p + c])) p = r;
        if (p != c) {
            for (int j = 0; j < 6; ++j) std::swap(a[6 * c + j], a[6 * p + j]);
            std::swap(perm[c], perm[p]);
        }
        if (std::abs(a[6 * c + c]) < 1e-300) throw SingularMatrixError(c);
        for (int r = c + 1; r < 6; ++r) {
            a[6 * r + c] /= a[6 * c + c];
            for (int j = c + 1; j < 6; ++j) a[6 * r + j] -= a[6 * r + c] * a[6 * c + j];
        }
    }
}

void lu6_solve(const std::array<double, 36>& a, const std::array<int, 6>& perm,
               const double* b, double* x) {
    double y[6];
    for (int i = 0; i < 6; ++i) y[i] = b[perm[i]];
    for (int i = 1; i < 6; ++i)
        for (int j = 0; j < i; ++j) y[i] -= a[6 * i + j] * y[j];
    for (int i = 5; i >= 0; --i) {
        for (int j = i + 1; j < 6; ++j) y[i] -= a[6 * i + j] * y[j];
        y[i] /= a[6 * i + i];
    }
    for (int i = 0; i < 6; ++i) x[i] = y[i];
}

}  // namespace

BlockCyclicFactor::BlockCyclicFactor(const SparseBlockSystem& J) : K_(J.blocks()) {
    if (K_ < 3) throw ShapeError("block cyclic factor needs K >= 3");
    corner_top_ = J.lower[0];
    corner_bot_ = J.upper[K_ - 1];
    has_corners_ = true;

    mult_.assign(K_, Mat3{});
    piv_lu_.assign(K_, Mat3{});  // stores inverses of the pivot blocks
    upper_ = J.upper;

    Mat3 delta = J.diag[0];
    piv_lu_[0] = mat3_inv(delta, 0);
    for (int k = 1; k < K_; ++k) {
        mult_[k] = mat3_mul(J.lower[k], piv_lu_[k - 1]);
        delta = mat3_sub(J.diag[k], mat3_mul(mult_[k], J.upper[k - 1]));
        piv_lu_[k] = mat3_inv(delta, k);
    }

    // Woodbury data: U carries the two corner blocks, V^T picks out the
    // first and last nodes.  Z = core^{-1} U.
    zcols_.assign(3 * K_, std::array<double, 6>{});
    std::vector<double> col(3 * K_);
    for (int j = 0; j < 6; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        if (j < 3) {
            for (int i = 0; i < 3; ++i) col[i] = corner_top_(i, j);
        } else {
            for (int i = 0; i < 3; ++i) col[3 * (K_ - 1) + i] = corner_bot_(i, j - 3);
        }
        core_solve_inplace(col);
        for (int r = 0; r < 3 * K_; ++r) zcols_[r][j] = col[r];
    }

    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const int row = (i < 3) ? 3 * (K_ - 1) + i : i - 3;
            cap_lu_[6 * i + j] = ((i == j) ? 1.0 : 0.0) + zcols_[row][j];
        }
    lu6(cap_lu_, cap_perm_);
}

void BlockCyclicFactor::core_solve_inplace(std::vector<double>& b) const {
    double t[3];
    for (int k = 1; k < K_; ++k) {
        mat3_vec(mult_[k], &b[3 * (k - 1)], t);
        b[3 * k] -= t[0];
        b[3 * k + 1] -= t[1];
        b[3 * k + 2] -= t[2];
    }
    double x[3];
    mat3_vec(piv_lu_[K_ - 1], &b[3 * (K_ - 1)], x);
    b[3 * (K_ - 1)] = x[0];
    b[3 * (K_ - 1) + 1] = x[1];
    b[3 * (K_ - 1) + 2] = x[2];
    for (int k = K_ - 2; k >= 0; --k) {
        mat3_vec(upper_[k], &b[3 * (k + 1)], t);
        double y[3] = {b[3 * k] - t[0], b[3 * k + 1] - t[1], b[3 * k + 2] - t[2]};
        mat3_vec(piv_lu_[k], y, x);
        b[3 * k] = x[0];
        b[3 * k + 1] = x[1];
        b[3 * k + 2] = x[2];
    }
}

std::vector<double> BlockCyclicFactor::solve(const std::vector<double>& b) const {
    if (static_cast<int>(b.size()) != 3 * K_) throw ShapeError("block solve: length mismatch");
    std::vector<double> x(b);
    core_solve_inplace(x);

    double w[6], s[6];
    for (int i = 0; i < 3; ++i) {
        w[i] = x[3 * (K_ - 1) + i];
        w[3 + i] = x[i];
    }
    lu6_solve(cap_lu_, cap_perm_, w, s);
    for (int r = 0; r < 3 * K_; ++r) {
        double acc = 0.0;
        for (int j = 0; j < 6; ++j) acc += zcols_[r][j] * s[j];
        x[r] -= acc;
    }
    return x;
}

}  // namespace zak

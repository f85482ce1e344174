/// @file grid.hpp
/// @brief Periodic 1-D grid, finite-difference/average operators, and the
///        discrete inner products and norms every scheme is built from.
///
/// All fields are stored 0-based; index k+K is identified with index k
/// (discrete periodic boundary condition).  Operators always wrap.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "zak/errors.hpp"

namespace zak {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

/// Uniform periodic mesh with K cells over one period of length L.
/// dx is always derived from L and K so that dx*K == L cannot drift.
struct Grid {
    int K = 0;
    double L = 0.0;

    Grid() = default;
    Grid(int K_, double L_) : K(K_), L(L_) {
        if (K < 3) throw DomainError("grid needs K >= 3");
        if (!(L > 0.0)) throw DomainError("grid needs L > 0");
    }

    double dx() const { return L / K; }
    double x(int k) const { return k * dx(); }
};

namespace detail {
inline void check_len(std::size_t n, const Grid& g, const char* who) {
    if (static_cast<int>(n) != g.K)
        throw ShapeError(std::string(who) + ": field length does not match grid");
}
inline int wrap_up(int k, int K) { return (k + 1 == K) ? 0 : k + 1; }
inline int wrap_dn(int k, int K) { return (k == 0) ? K - 1 : k - 1; }
}  // namespace detail

/// Forward difference  (v[k+1] - v[k]) / dx, cyclic.
template <class T>
std::vector<T> forward_diff(const std::vector<T>& v, const Grid& g) {
    detail::check_len(v.size(), g, "forward_diff");
    const double inv = 1.0 / g.dx();
    std::vector<T> r(v.size());
    for (int k = 0; k < g.K; ++k) r[k] = (v[detail::wrap_up(k, g.K)] - v[k]) * inv;
    return r;
}

/// Backward difference  (v[k] - v[k-1]) / dx, cyclic.
template <class T>
std::vector<T> backward_diff(const std::vector<T>& v, const Grid& g) {
    detail::check_len(v.size(), g, "backward_diff");
    const double inv = 1.0 / g.dx();
    std::vector<T> r(v.size());
    for (int k = 0; k < g.K; ++k) r[k] = (v[k] - v[detail::wrap_dn(k, g.K)]) * inv;
    return r;
}

/// Second central difference  (v[k+1] - 2 v[k] + v[k-1]) / dx^2, cyclic.
/// Equals forward_diff(backward_diff(v)) up to roundoff.
template <class T>
std::vector<T> second_diff(const std::vector<T>& v, const Grid& g) {
    detail::check_len(v.size(), g, "second_diff");
    const double inv = 1.0 / (g.dx() * g.dx());
    std::vector<T> r(v.size());
    for (int k = 0; k < g.K; ++k)
        r[k] = (v[detail::wrap_up(k, g.K)] - 2.0 * v[k] + v[detail::wrap_dn(k, g.K)]) * inv;
    return r;
}

/// Spatial forward average  (v[k+1] + v[k]) / 2, cyclic.  Defined for
/// completeness; neither scheme uses it in its stepping path.
template <class T>
std::vector<T> forward_avg(const std::vector<T>& v, const Grid& g) {
    detail::check_len(v.size(), g, "forward_avg");
    std::vector<T> r(v.size());
    for (int k = 0; k < g.K; ++k) r[k] = 0.5 * (v[detail::wrap_up(k, g.K)] + v[k]);
    return r;
}

/// Two-level average (a + b) / 2 (temporal mu operators act on level pairs).
template <class T>
std::vector<T> avg2(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) throw ShapeError("avg2: length mismatch");
    std::vector<T> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = 0.5 * (a[k] + b[k]);
    return r;
}

/// Two-level difference (b - a) / dt.
template <class T>
std::vector<T> diff2(const std::vector<T>& a, const std::vector<T>& b, double dt) {
    if (a.size() != b.size()) throw ShapeError("diff2: length mismatch");
    const double inv = 1.0 / dt;
    std::vector<T> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = (b[k] - a[k]) * inv;
    return r;
}

/// dx-weighted L2 inner product  sum_k v_k conj(w_k) dx.
inline cplx inner_product(const ComplexField& v, const ComplexField& w, const Grid& g) {
    detail::check_len(v.size(), g, "inner_product");
    detail::check_len(w.size(), g, "inner_product");
    cplx s = 0.0;
    for (int k = 0; k < g.K; ++k) s += v[k] * std::conj(w[k]);
    return s * g.dx();
}

inline double inner_product(const RealField& v, const RealField& w, const Grid& g) {
    detail::check_len(v.size(), g, "inner_product");
    detail::check_len(w.size(), g, "inner_product");
    double s = 0.0;
    for (int k = 0; k < g.K; ++k) s += v[k] * w[k];
    return s * g.dx();
}

/// Squared dx-weighted 2-norm.
template <class T>
double sq_norm(const std::vector<T>& v, const Grid& g) {
    detail::check_len(v.size(), g, "sq_norm");
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s * g.dx();
}

inline double sq_norm(const RealField& v, const Grid& g) {
    detail::check_len(v.size(), g, "sq_norm");
    double s = 0.0;
    for (double x : v) s += x * x;
    return s * g.dx();
}

/// Discrete Lebesgue norm: (sum |v_k|^p dx)^(1/p), or max |v_k| for p = inf.
template <class T>
double norm_p(const std::vector<T>& v, double p, const Grid& g) {
    detail::check_len(v.size(), g, "norm_p");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& x : v) m = std::max(m, std::abs(x));
        return m;
    }
    if (p < 1.0) throw DomainError("norm_p: p must be >= 1");
    if (p == 2.0) return std::sqrt(sq_norm(v, g));
    double s = 0.0;
    for (const auto& x : v) s += std::pow(std::abs(x), p);
    return std::pow(s * g.dx(), 1.0 / p);
}

template <class T>
double norm_2(const std::vector<T>& v, const Grid& g) {
    return std::sqrt(sq_norm(v, g));
}

template <class T>
double norm_inf(const std::vector<T>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Plain arithmetic mean of a real field.
inline double mean(const RealField& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// |E|^2 pointwise.
inline RealField abs2(const ComplexField& e) {
    RealField r(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) r[k] = std::norm(e[k]);
    return r;
}

/// Discrete-Sobolev constant Lhat = sqrt(2) max(sqrt(L), 1/sqrt(L)).
inline double sobolev_Lhat(double L) {
    const double s = std::sqrt(L);
    return std::sqrt(2.0) * std::max(s, 1.0 / s);
}

}  // namespace zak

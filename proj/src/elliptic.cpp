/// @file elliptic.cpp

#include "zak/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zak/errors.hpp"

namespace zak::elliptic {

namespace {

constexpr double kPi = std::numbers::pi;

void check_parameter(double q) {
    if (!(q >= 0.0) || q > kMaxParameter)
        throw DomainError("elliptic parameter q must lie in [0, 1 - 1e-12]");
}

void check_complement(double qc) {
    if (!(qc <= 1.0) || qc < 1e-12)
        throw DomainError("complementary parameter qc must lie in [1e-12, 1]");
}

}  // namespace

double complete_K_comp(double qc) {
    check_complement(qc);
    double a = 1.0;
    double b = std::sqrt(qc);
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (2.0 * a);
}

double complete_K(double q) {
    check_parameter(q);
    return complete_K_comp(1.0 - q);
}

SnCnDn jacobi_snd_comp(double u, double qc) {
    check_complement(qc);
    const double q = 1.0 - qc;

    // Reduce modulo the half period 2K; sn and cn flip sign on odd shifts.
    const double Kq = complete_K_comp(qc);
    double sign = 1.0;
    if (std::abs(u) > Kq) {
        const double n = std::nearbyint(u / (2.0 * Kq));
        u -= 2.0 * Kq * n;
        if (std::fmod(std::abs(n), 2.0) == 1.0) sign = -1.0;
    }

    // Descending AGM: a_n, b_n, c_n, then the amplitude phi via the phase
    // recurrence sin(2 phi_{n-1} - phi_n) = (c_n / a_n) sin(phi_n).
    double a[32], c[32];
    double an = 1.0, bn = std::sqrt(qc);
    int n = 0;
    a[0] = an;
    c[0] = 0.0;
    while (n < 30) {
        const double cn1 = 0.5 * (an - bn);
        const double an1 = 0.5 * (an + bn);
        bn = std::sqrt(an * bn);
        an = an1;
        ++n;
        a[n] = an;
        c[n] = cn1;
        if (std::abs(cn1) <= 1e-16 * an) break;
    }

    double phi = std::ldexp(an * u, n);
    for (int i = n; i >= 1; --i) {
        const double t = std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(t));
    }

    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn from qc + q cn^2 avoids the cancellation in 1 - q sn^2 near u = K.
    const double dn = std::sqrt(qc + q * cn * cn);
    return {sign * sn, sign * cn, dn};
}

SnCnDn jacobi_snd(double u, double q) {
    check_parameter(q);
    return jacobi_snd_comp(u, 1.0 - q);
}

double carlson_rf(double x, double y, double z) {
    constexpr double errtol = 2.5e-3;
    double xt = x, yt = y, zt = z;
    double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
    for (int i = 0; i < 200; ++i) {
        mu = (xt + yt + zt) / 3.0;
        dx = 1.0 - xt / mu;
        dy = 1.0 - yt / mu;
        dz = 1.0 - zt / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) break;
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
    }
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

double carlson_rd(double x, double y, double z) {
    constexpr double errtol = 1.5e-3;
    double xt = x, yt = y, zt = z;
    double sum = 0.0, fac = 1.0;
    double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
    for (int i = 0; i < 200; ++i) {
        mu = 0.2 * (xt + yt + 3.0 * zt);
        dx = 1.0 - xt / mu;
        dy = 1.0 - yt / mu;
        dz = 1.0 - zt / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) break;
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
    }
    const double ea = dx * dy;
    const double eb = dz * dz;
    const double ec = ea - eb;
    const double ed = ea - 6.0 * eb;
    const double ee = ed + ec + ec;
    const double s = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee) +
                     dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea));
    return 3.0 * sum + fac * (1.0 + s) / (mu * std::sqrt(mu));
}

double complete_E2_comp(double qc) {
    check_complement(qc);
    const double q = 1.0 - qc;
    if (q == 0.0) return kPi / 2.0;
    return carlson_rf(0.0, qc, 1.0) - (q / 3.0) * carlson_rd(0.0, qc, 1.0);
}

double complete_E2(double q) {
    check_parameter(q);
    return complete_E2_comp(1.0 - q);
}

double incomplete_E2_comp(double phi, double qc) {
    check_complement(qc);
    const double q = 1.0 - qc;

    // E2(theta + n pi) = E2(theta) + 2 n E2(pi/2)
    const double n = std::nearbyint(phi / kPi);
    const double theta = phi - n * kPi;

    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double d2 = qc + q * c * c;  // 1 - q sin^2(theta), cancellation-free
    double val;
    if (std::abs(s) < 1e-300) {
        val = 0.0;
    } else {
        val = s * carlson_rf(c * c, d2, 1.0) -
              (q / 3.0) * s * s * s * carlson_rd(c * c, d2, 1.0);
    }
    if (n != 0.0) val += 2.0 * n * complete_E2_comp(qc);
    return val;
}

double incomplete_E2(double phi, double q) {
    check_parameter(q);
    return incomplete_E2_comp(phi, 1.0 - q);
}

}  // namespace zak::elliptic

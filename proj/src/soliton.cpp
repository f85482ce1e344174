/// @file soliton.cpp

#include "zak/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zak/errors.hpp"

namespace zak::soliton {

namespace {

constexpr double kPi = std::numbers::pi;

/// E2(asin(sn), q) from already-computed (sn, cn, dn); depends only on sn,
/// so it is the principal-branch value used by phi_V.
double e2_principal(const elliptic::SnCnDn& j, double q) {
    const double s = j.sn;
    if (s == 0.0) return 0.0;
    const double c2 = j.cn * j.cn;
    const double d2 = j.dn * j.dn;  // = 1 - q sn^2, cancellation-free
    return s * elliptic::carlson_rf(c2, d2, 1.0) -
           (q / 3.0) * s * s * s * elliptic::carlson_rd(c2, d2, 1.0);
}

/// Cell index l with (l - 1/2) L < y <= (l + 1/2) L.
double cell_index(double y, double L) { return std::ceil(y / L - 0.5); }

struct PointSample {
    cplx E;
    double N, V, Nt;
};

/// Exact solution of one soliton at local coordinate y = x - v t; the phase
/// argument is passed separately since it travels at u, not v.
PointSample eval_soliton(const SolitonParams& p, double y, double phase_arg) {
    const double l = cell_index(y, p.L);
    const double xi_loc = p.kappa * y - 2.0 * l * p.K_half;
    const auto j = elliptic::jacobi_snd_comp(xi_loc, p.qc);

    PointSample s;
    const double dn2 = j.dn * j.dn;
    const double amp2 = p.E_max * p.E_max / (1.0 - p.v * p.v);
    s.E = p.E_max * j.dn * std::exp(cplx(0.0, p.phi * phase_arg));
    s.N = -amp2 * dn2 + p.N0;
    s.Nt = -2.0 * p.q * p.v * p.kappa * amp2 * j.sn * j.cn * j.dn;
    s.V = p.cV * (2.0 * l * p.E2c + e2_principal(j, p.q)) - (p.N0 / p.v) * y + p.V0;
    return s;
}

void check_period(const Grid& g, double L, const char* who) {
    if (std::abs(g.L - L) > 1e-12 * L)
        throw ShapeError(std::string(who) + ": grid period does not match parameters");
}

}  // namespace

SolitonParams resolve_soliton(double E_max, double L, int m) {
    if (!(E_max > 0.0)) throw DomainError("resolve_soliton: E_max must be positive");
    if (!(L > 0.0)) throw DomainError("resolve_soliton: L must be positive");
    if (m == 0) throw DomainError("resolve_soliton: m must be nonzero");

    SolitonParams p;
    p.E_max = E_max;
    p.L = L;
    p.m = m;
    p.v = 4.0 * kPi * m / L;
    if (std::abs(p.v) >= 1.0)
        throw DomainError("resolve_soliton: infeasible velocity |4 pi m / L| >= 1");

    const double om = 1.0 - p.v * p.v;
    p.kappa = E_max / std::sqrt(2.0 * om);
    p.K_target = E_max * L / (2.0 * std::sqrt(2.0 * om));
    if (p.K_target < kPi / 2.0 - 1e-12)
        throw DomainError("resolve_soliton: infeasible amplitude, required K(q) < pi/2");

    // K(q) is monotone in q; bisect multiplicatively on qc = 1 - q, which
    // keeps full precision where q crowds against 1.
    const double qc_min = 1e-12;
    double lo = qc_min, hi = 1.0;
    if (elliptic::complete_K_comp(qc_min) < p.K_target) {
        p.qc = qc_min;  // clamped: the requested profile is too localized
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (mid <= lo || mid >= hi) break;
            const double Kmid = elliptic::complete_K_comp(mid);
            if (std::abs(Kmid - p.K_target) <= 1e-12) {
                lo = hi = mid;
                break;
            }
            (Kmid > p.K_target ? lo : hi) = mid;
        }
        p.qc = std::sqrt(lo * hi);
    }
    p.q = 1.0 - p.qc;
    p.K_half = elliptic::complete_K_comp(p.qc);
    p.K_residual = std::abs(p.K_half - p.K_target);
    p.q_clamped = p.K_residual > 1e-8;

    p.phi = 0.5 * p.v;
    p.cV = std::sqrt(2.0) * p.v * E_max / std::sqrt(om);
    p.E2c = elliptic::complete_E2_comp(p.qc);
    p.N0 = 2.0 * std::sqrt(2.0) * p.v * p.v * E_max / (L * std::sqrt(om)) * p.E2c;
    p.u = 0.5 * p.v + 2.0 * p.N0 / p.v - (2.0 - p.q) * E_max * E_max / (p.v * om);
    p.V0 = 0.0;  // phi_V(0) = 0, so this is exactly V(0,0) = 0
    return p;
}

double amplitude_phiV(double x, const SolitonParams& p) {
    const double l = cell_index(x, p.L);
    const auto j = elliptic::jacobi_snd_comp(p.kappa * x - 2.0 * l * p.K_half, p.qc);
    return l * kPi + std::asin(std::clamp(j.sn, -1.0, 1.0));
}

ExactSample sample_single_soliton(const SolitonParams& p, const Grid& g, double t) {
    check_period(g, p.L, "sample_single_soliton");
    ExactSample s;
    s.E.resize(g.K);
    s.N.resize(g.K);
    s.V.resize(g.K);
    s.Nt.resize(g.K);
    for (int k = 0; k < g.K; ++k) {
        const double x = g.x(k);
        const auto pt = eval_soliton(p, x - p.v * t, x - p.u * t);
        s.E[k] = pt.E;
        s.N[k] = pt.N;
        s.V[k] = pt.V;
        s.Nt[k] = pt.Nt;
    }
    return s;
}

InitialData single_soliton_initial(const SolitonParams& p, const Grid& g) {
    auto s = sample_single_soliton(p, g, 0.0);
    InitialData init;
    init.E0 = std::move(s.E);
    init.N0field = std::move(s.N);
    init.Nt0 = std::move(s.Nt);
    init.V0field = std::move(s.V);
    init.grid = g;
    init.variant = InitialVariant::single;
    return init;
}

InitialData sample_collision_initial(const SolitonParams& pp, const Grid& g, int variant) {
    check_period(g, 8.0 * pp.L, "sample_collision_initial");
    if (variant != 0 && variant != 1)
        throw ConfigError("collision variant must be 0 or 1");
    if (g.K % 16 != 0)
        throw ConfigError("collision grid must have K divisible by 16");

    const SolitonParams pm = resolve_soliton(pp.E_max, pp.L, -pp.m);
    const int K = g.K;
    const double dx = g.dx();
    const int kA = 3 * K / 8;   // x = 3L: rightward soliton starts
    const int kB = K / 2;       // x = 4L: leftward soliton starts
    const int kC = 5 * K / 8;   // x = 5L: background resumes
    const int c_plus = 7 * K / 16;
    const int c_minus = 9 * K / 16;

    // Constant background: the soliton's own edge value, so N is continuous.
    const double N_bg = eval_soliton(pp, -0.5 * pp.L, 0.0).N;

    InitialData init;
    init.grid = g;
    init.variant = (variant == 0) ? InitialVariant::collision0 : InitialVariant::collision1;
    init.E0.assign(K, cplx(0.0, 0.0));
    init.N0field.assign(K, N_bg);
    init.Nt0.assign(K, 0.0);
    init.V0field.assign(K, 0.0);

    const double vconst = pp.N0 * pp.L / (2.0 * pp.v);
    for (int k = kA; k < kC; ++k) {
        const bool plus = k < kB;
        const SolitonParams& p = plus ? pp : pm;
        const double y = (k - (plus ? c_plus : c_minus)) * dx;
        const auto pt = eval_soliton(p, y, y);
        init.E0[k] = pt.E;
        init.N0field[k] = pt.N;
        init.Nt0[k] = pt.Nt;
        if (variant == 0) {
            // Collision potential: elliptic part with explicit
            // signs plus the N0 L / (2v) offset; zero outside the solitons.
            const double l = cell_index(y, p.L);
            const auto j = elliptic::jacobi_snd_comp(p.kappa * y - 2.0 * l * p.K_half, p.qc);
            const double e2 = 2.0 * l * pp.E2c + e2_principal(j, pp.q);
            init.V0field[k] = (plus ? pp.cV : -pp.cV) * e2 + vconst;
        } else {
            init.V0field[k] = pt.V;  // single-soliton V, kinked at the seams
        }
    }

    if (variant == 1) init.Nt0 = second_diff(init.V0field, g);

    double seam = 0.0;
    for (int k : {kA, kB, kC})
        seam = std::max(seam, std::abs(init.E0[k] - init.E0[(k + K - 1) % K]));
    init.seam_jump = seam;
    return init;
}

TruncationNorms truncation_residual(const SolitonParams& p, const Grid& g, double t, double dt) {
    const auto s0 = sample_single_soliton(p, g, t);
    const auto s1 = sample_single_soliton(p, g, t + dt);

    const auto Eavg = avg2(s0.E, s1.E);
    const auto Navg = avg2(s0.N, s1.N);
    const auto Vavg = avg2(s0.V, s1.V);
    const auto Et = diff2(s0.E, s1.E, dt);
    const auto Nt = diff2(s0.N, s1.N, dt);
    const auto Vt = diff2(s0.V, s1.V, dt);
    const auto DEavg = second_diff(Eavg, g);
    const auto DVavg = second_diff(Vavg, g);
    const auto A0 = abs2(s0.E);
    const auto A1 = abs2(s1.E);

    ComplexField tauE(g.K);
    RealField tauN(g.K), tauV(g.K);
    for (int k = 0; k < g.K; ++k) {
        tauE[k] = cplx(0.0, 1.0) * Et[k] + DEavg[k] - Navg[k] * Eavg[k];
        tauN[k] = Nt[k] - DVavg[k];
        tauV[k] = Vt[k] - Navg[k] - 0.5 * (A0[k] + A1[k]);
    }

    TruncationNorms out;
    out.tauE = norm_2(tauE, g);
    out.tauE_dx = norm_2(forward_diff(tauE, g), g);
    out.tauN = norm_2(tauN, g);
    out.tauV_dx = norm_2(forward_diff(tauV, g), g);
    return out;
}

}  // namespace zak::soliton

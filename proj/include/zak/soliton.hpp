/// @file soliton.hpp
/// @brief Exact solitary-wave references: parameter resolution from
///        (E_max, L, m), pointwise sampling of E, N, V, N_t, piecewise
///        collision initial data, and the scheme truncation residual.

#pragma once

#include "zak/elliptic.hpp"
#include "zak/grid.hpp"

namespace zak::soliton {

/// Fully resolved parameters of the periodic dn-soliton
///   E(t,x) = E_max dn(kappa (x - v t), q) exp(i phi (x - u t)),
///   N(t,x) = -E_max^2/(1-v^2) dn(...)^2 + N0.
struct SolitonParams {
    double E_max = 0.0;
    double L = 0.0;
    int m = 0;

    double v = 0.0;    // 4 pi m / L
    double q = 0.0;    // elliptic parameter
    double qc = 1.0;   // 1 - q, stored separately for precision near q = 1
    double phi = 0.0;  // v / 2
    double u = 0.0;    // phase speed
    double N0 = 0.0;   // density offset making V periodic
    double V0 = 0.0;   // integration constant, fixed by V(0,0) = 0

    double kappa = 0.0;      // E_max / sqrt(2 (1 - v^2))
    double cV = 0.0;         // sqrt(2) v E_max / sqrt(1 - v^2)
    double E2c = 0.0;        // E2(pi/2, q)
    double K_half = 0.0;     // K(q) actually achieved by the parameter solve
    double K_target = 0.0;   // E_max L / (2 sqrt(2 (1 - v^2)))
    double K_residual = 0.0; // |K_half - K_target|

    /// True when the parameter solve hit the q <= 1 - 1e-12 clamp, i.e. the
    /// K-residual exceeds 1e-8 and the sampled profile is only approximately
    /// L-periodic.  Carried into run reports as a precision warning.
    bool q_clamped = false;
};

/// Solves the periodicity constraints for (v, q, phi, u, N0).  Bisection on
/// the complementary parameter, K-residual tolerance 1e-12, search clamped to
/// q in [0, 1 - 1e-12].
SolitonParams resolve_soliton(double E_max, double L, int m);

/// phi_V(x) = l pi + asin(sn(kappa x - 2 l K(q), q)) with
/// (l - 1/2) L < x <= (l + 1/2) L; continuous and increasing in x.
double amplitude_phiV(double x, const SolitonParams& p);

/// One time slice of the exact solution on a grid.
struct ExactSample {
    ComplexField E;
    RealField N;
    RealField V;
    RealField Nt;
};

ExactSample sample_single_soliton(const SolitonParams& p, const Grid& g, double t);

enum class InitialVariant { single, collision0, collision1 };

struct InitialData {
    ComplexField E0;
    RealField N0field;
    RealField Nt0;
    RealField V0field;
    Grid grid;
    InitialVariant variant = InitialVariant::single;
    double seam_jump = 0.0;  // max |E| jump across piecewise-assembly seams
};

/// Exact single-soliton data at t = 0 (V normalized so V(0,0) = 0).
InitialData single_soliton_initial(const SolitonParams& p, const Grid& g);

/// Two-soliton collision data on a grid of period 8 L: the rightward soliton
/// (m = +1) occupies [3L, 4L), the leftward one (m = -1) occupies [4L, 5L),
/// the rest is the constant background.  variant 0 pairs the analytic (N_t)_0
/// with the matching collision potential V_0; variant 1 assembles V_1
/// piecewise from the single-soliton potentials and takes N_t = the discrete
/// second difference of V_1.
InitialData sample_collision_initial(const SolitonParams& p_plus, const Grid& g, int variant);

/// Norms of the local truncation error of the exact solution in the three
/// DVDM equations across one (t, t+dt) level pair.
struct TruncationNorms {
    double tauE;     // ||tau_E||
    double tauE_dx;  // ||delta_x^+ tau_E||
    double tauN;     // ||tau_N||
    double tauV_dx;  // ||delta_x^+ tau_V||
};

TruncationNorms truncation_residual(const SolitonParams& p, const Grid& g, double t, double dt);

}  // namespace zak::soliton

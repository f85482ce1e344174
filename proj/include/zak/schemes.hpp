/// @file schemes.hpp
/// @brief Time stepping for the two conservative schemes: Glassey's
///        linearly-implicit updates (first-step variants G / GP / GN) and the
///        fully-implicit DVDM step solved by simplified Newton, plus the
///        V-recovery and the step-size advisor.

#pragma once

#include <optional>
#include <vector>

#include "zak/grid.hpp"
#include "zak/linalg.hpp"
#include "zak/soliton.hpp"

namespace zak {

/// One time level of the discrete solution.  V is absent while Glassey steps
/// through the interior; it is recovered on demand for energy reporting.
struct State {
    ComplexField E;
    RealField N;
    std::optional<RealField> V;
    int step = 0;
    double t = 0.0;
};

enum class FirstStepVariant { G, GP, GN };
enum class SchemeKind { Glassey, DVDM };

struct SchemeConfig {
    double dt = 0.1;
    double newton_eps = 1e-8;
    int newton_max_iter = 50;
    FirstStepVariant first_step = FirstStepVariant::GN;
    SchemeKind scheme = SchemeKind::Glassey;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(newton_eps > 0.0)) throw ConfigError("newton_eps must be positive");
        if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
    }
};

// ---------------------------------------------------------------------------
// Glassey scheme
// ---------------------------------------------------------------------------

/// N-update matrix I - (dt^2/2) D2; symmetric positive definite.
CyclicTridiagonal<double> glassey_n_matrix(const Grid& g, double dt);

/// First density level by variant:
///   G  : N0 + dt Nt0
///   GP : N0 + dt Nt0 + (dt^2/2) D2 (N0 + |E0|^2)
///   GN : GP minus its mean increment, so sum_k (N1 - N0) = 0 exactly
RealField glassey_first_N(const ComplexField& E0, const RealField& N0, const RealField& Nt0,
                          const Grid& g, double dt, FirstStepVariant variant);

/// N^{m+1} = -N^{m-1} - 2|E^m|^2 + 2 F^{-1}(N^m + |E^m|^2),
/// F the factorization of glassey_n_matrix.
RealField glassey_step_N(const RealField& N_prev, const RealField& N_curr,
                         const ComplexField& E_curr, const RealCyclicFactor& F,
                         const Grid& g, double dt);

/// E^{m+1} = -E^m + [2i I + dt (D2 - diag((N^m + N^{m+1})/2))]^{-1} (4i E^m);
/// conserves ||E|| exactly in exact arithmetic.
ComplexField glassey_step_E(const ComplexField& E_curr, const RealField& N_curr,
                            const RealField& N_next, const Grid& g, double dt);

/// V^m = D2^dagger (N^{m+1} - N^m)/dt, the mean-zero least-squares potential.
RealField glassey_recover_V(const RealField& N_curr, const RealField& N_next,
                            const Grid& g, double dt);

/// Caches the constant N-matrix factorization and the Poisson solver across
/// a trajectory.
class GlasseyStepper {
public:
    GlasseyStepper(const Grid& g, double dt);

    RealField first_N(const ComplexField& E0, const RealField& N0, const RealField& Nt0,
                      FirstStepVariant variant) const;
    RealField step_N(const RealField& N_prev, const RealField& N_curr,
                     const ComplexField& E_curr) const;
    ComplexField step_E(const ComplexField& E_curr, const RealField& N_curr,
                        const RealField& N_next) const;
    RealField recover_V(const RealField& N_curr, const RealField& N_next) const;

    const Grid& grid() const { return g_; }
    double dt() const { return dt_; }
    const RealCyclicFactor& n_factor() const { return n_factor_; }

private:
    Grid g_;
    double dt_;
    RealCyclicFactor n_factor_;
    PoissonMeanZero poisson_;
};

// ---------------------------------------------------------------------------
// DVDM scheme
// ---------------------------------------------------------------------------

/// Residual of the V-eliminated DVDM equations at candidate level m+1,
/// stacked as [Re F_E (K); Im F_E (K); F_N (K)]; zero exactly at a scheme
/// solution.
std::vector<double> dvdm_residual_FEN(const ComplexField& E_next, const RealField& N_next,
                                      const ComplexField& E_curr, const RealField& N_curr,
                                      const ComplexField& E_prev, const RealField& N_prev,
                                      const Grid& g, double dt);

/// Jacobian of the Newton map evaluated at the guess, in 3x3-block cyclic
/// form with rows scaled (E rows by 2 dt, N rows by dt^2) so the E block is
/// the real form of 2i I + dt (D2 - diag(mu_t N)).  The same matrix serves
/// the first-step (V-form) solve.  Structural nonzero count is 19 K.
SparseBlockSystem assemble_newton_system(const ComplexField& E_curr, const RealField& N_curr,
                                         const ComplexField& guessE, const RealField& guessN,
                                         const Grid& g, double dt);

struct NewtonStats {
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> history;  // ||F|| after each applied correction
};

/// Simplified-Newton stepper for the DVDM scheme.  The Jacobian is frozen at
/// the Glassey-predicted initial guess and factored once per step.
class DvdmStepper {
public:
    DvdmStepper(const Grid& g, SchemeConfig cfg);

    /// m = 0: solves the coupled three-equation system for (E1, N1, V1); the
    /// initial guess is one Glassey step with the GN first-step variant.
    State first_step(const soliton::InitialData& init, NewtonStats* stats = nullptr) const;

    /// Interior step via the V-eliminated form; prev/curr are levels m-1, m.
    /// curr must carry V (used to recover V^{m+1} via the third equation).
    State step(const State& prev, const State& curr, NewtonStats* stats = nullptr) const;

    /// Interior step via the full three-equation form (V never eliminated);
    /// prev supplies the Glassey predictor.  Equivalent to step() up to the
    /// Newton tolerance.
    State step_full(const State& prev, const State& curr, NewtonStats* stats = nullptr) const;

    const Grid& grid() const { return g_; }
    const SchemeConfig& config() const { return cfg_; }

private:
    Grid g_;
    SchemeConfig cfg_;
    GlasseyStepper glassey_;

    struct Solution {
        ComplexField E;
        RealField N;
    };
    Solution newton_solve(const ComplexField& E_curr, const RealField& N_curr,
                          ComplexField guessE, RealField guessN, bool first_form,
                          const ComplexField& E_prev, const RealField& N_prev,
                          const RealField& V_curr, NewtonStats* stats) const;
};

// ---------------------------------------------------------------------------
// Step-size advisor (solvability thresholds; advisory only)
// ---------------------------------------------------------------------------

struct StepSizeThresholds {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double L_hat = 0.0;
    double p = 0.0;
    double r = 0.0;
    bool dt_ok = false;  // dt < min(dx, eps1, eps2)
};

/// eps1(p, r) = 2 (p-3) dx / (2 + 2p(p Lhat + 1) r + p(p+1) r dx^{1/2}
///                              + (2 p^2 Lhat + p + 1) r dx),
/// eps2(p, r) = dx / (r (2p Lhat + 1 + (p + 1/2) dx^{1/2} + (2p Lhat + 1/2) dx)).
/// Stepping proceeds regardless of the flag; the bound is conservative.
StepSizeThresholds stepsize_thresholds(double p, double r, const Grid& g, double dt);

}  // namespace zak

/// @file schemes.cpp

#include "zak/schemes.hpp"

#include <cmath>
#include <utility>

namespace zak {

CyclicTridiagonal<double> glassey_n_matrix(const Grid& g, double dt) {
    const double c = 0.5 * dt * dt / (g.dx() * g.dx());
    CyclicTridiagonal<double> A;
    A.lower.assign(g.K, -c);
    A.diag.assign(g.K, 1.0 + 2.0 * c);
    A.upper.assign(g.K, -c);
    return A;
}

RealField glassey_first_N(const ComplexField& E0, const RealField& N0, const RealField& Nt0,
                          const Grid& g, double dt, FirstStepVariant variant) {
    detail::check_len(E0.size(), g, "glassey_first_N");
    detail::check_len(N0.size(), g, "glassey_first_N");
    detail::check_len(Nt0.size(), g, "glassey_first_N");

    RealField N1(g.K);
    for (int k = 0; k < g.K; ++k) N1[k] = N0[k] + dt * Nt0[k];
    if (variant == FirstStepVariant::G) return N1;

    RealField w(g.K);
    for (int k = 0; k < g.K; ++k) w[k] = N0[k] + std::norm(E0[k]);
    const RealField d2 = second_diff(w, g);
    for (int k = 0; k < g.K; ++k) N1[k] += 0.5 * dt * dt * d2[k];
    if (variant == FirstStepVariant::GP) return N1;

    // GN: remove the mean increment so sum_k (N1 - N0) vanishes exactly.
    double inc = 0.0;
    for (int k = 0; k < g.K; ++k) inc += N1[k] - N0[k];
    inc /= g.K;
    for (int k = 0; k < g.K; ++k) N1[k] -= inc;
    return N1;
}

RealField glassey_step_N(const RealField& N_prev, const RealField& N_curr,
                         const ComplexField& E_curr, const RealCyclicFactor& F,
                         const Grid& g, double /*dt*/) {
    detail::check_len(N_prev.size(), g, "glassey_step_N");
    detail::check_len(N_curr.size(), g, "glassey_step_N");
    detail::check_len(E_curr.size(), g, "glassey_step_N");

    RealField rhs(g.K);
    for (int k = 0; k < g.K; ++k) rhs[k] = N_curr[k] + std::norm(E_curr[k]);
    RealField y = F.solve(rhs);
    RealField next(g.K);
    for (int k = 0; k < g.K; ++k)
        next[k] = -N_prev[k] - 2.0 * std::norm(E_curr[k]) + 2.0 * y[k];
    return next;
}

ComplexField glassey_step_E(const ComplexField& E_curr, const RealField& N_curr,
                            const RealField& N_next, const Grid& g, double dt) {
    detail::check_len(E_curr.size(), g, "glassey_step_E");
    detail::check_len(N_curr.size(), g, "glassey_step_E");
    detail::check_len(N_next.size(), g, "glassey_step_E");

    const double w = dt / (g.dx() * g.dx());
    CyclicTridiagonal<cplx> M;
    M.lower.assign(g.K, cplx(w, 0.0));
    M.upper.assign(g.K, cplx(w, 0.0));
    M.diag.resize(g.K);
    for (int k = 0; k < g.K; ++k)
        M.diag[k] = cplx(-2.0 * w - dt * 0.5 * (N_curr[k] + N_next[k]), 2.0);

    ComplexField rhs(g.K);
    for (int k = 0; k < g.K; ++k) rhs[k] = cplx(0.0, 4.0) * E_curr[k];

    ComplexCyclicFactor F(M);
    ComplexField s = F.solve(rhs);
    for (int k = 0; k < g.K; ++k) s[k] -= E_curr[k];
    return s;
}

RealField glassey_recover_V(const RealField& N_curr, const RealField& N_next,
                            const Grid& g, double dt) {
    return poisson_meanzero(diff2(N_curr, N_next, dt), g);
}

GlasseyStepper::GlasseyStepper(const Grid& g, double dt)
    : g_(g), dt_(dt), n_factor_(glassey_n_matrix(g, dt)), poisson_(g) {}

RealField GlasseyStepper::first_N(const ComplexField& E0, const RealField& N0,
                                  const RealField& Nt0, FirstStepVariant variant) const {
    return glassey_first_N(E0, N0, Nt0, g_, dt_, variant);
}

RealField GlasseyStepper::step_N(const RealField& N_prev, const RealField& N_curr,
                                 const ComplexField& E_curr) const {
    return glassey_step_N(N_prev, N_curr, E_curr, n_factor_, g_, dt_);
}

ComplexField GlasseyStepper::step_E(const ComplexField& E_curr, const RealField& N_curr,
                                    const RealField& N_next) const {
    return glassey_step_E(E_curr, N_curr, N_next, g_, dt_);
}

RealField GlasseyStepper::recover_V(const RealField& N_curr, const RealField& N_next) const {
    return poisson_.solve(diff2(N_curr, N_next, dt_));
}

// ---------------------------------------------------------------------------
// DVDM
// ---------------------------------------------------------------------------

namespace {

/// F_E = i dE/dt + D2 (E' + E)/2 - ((n + N)/2)((E' + E)/2), written into
/// re/im; shared by both step forms.
void schrodinger_residual(const ComplexField& E_next, const ComplexField& E_curr,
                          const RealField& N_next, const RealField& N_curr,
                          const Grid& g, double dt, std::vector<double>& out) {
    const int K = g.K;
    const double invdt = 1.0 / dt;
    const double w = 1.0 / (g.dx() * g.dx());
    for (int k = 0; k < K; ++k) {
        const int km = (k == 0) ? K - 1 : k - 1;
        const int kp = (k + 1 == K) ? 0 : k + 1;
        const cplx Ea = 0.5 * (E_next[k] + E_curr[k]);
        const cplx lap = 0.5 * w *
                         (E_next[kp] + E_curr[kp] - 2.0 * (E_next[k] + E_curr[k]) +
                          E_next[km] + E_curr[km]);
        const double Na = 0.5 * (N_next[k] + N_curr[k]);
        const cplx dE = (E_next[k] - E_curr[k]) * invdt;
        const cplx r = cplx(0.0, 1.0) * dE + lap - Na * Ea;
        out[k] = r.real();
        out[K + k] = r.imag();
    }
}

double weighted_norm(const std::vector<double>& F, const Grid& g) {
    double s = 0.0;
    for (double x : F) s += x * x;
    return std::sqrt(s * g.dx());
}

}  // namespace

std::vector<double> dvdm_residual_FEN(const ComplexField& E_next, const RealField& N_next,
                                      const ComplexField& E_curr, const RealField& N_curr,
                                      const ComplexField& E_prev, const RealField& N_prev,
                                      const Grid& g, double dt) {
    const int K = g.K;
    detail::check_len(E_next.size(), g, "dvdm_residual_FEN");
    detail::check_len(N_prev.size(), g, "dvdm_residual_FEN");

    std::vector<double> F(3 * K);
    schrodinger_residual(E_next, E_curr, N_next, N_curr, g, dt, F);

    // F_N = dt^+ dt^- N - mu^+ mu^- D2 (N + |E|^2)
    const double w = 1.0 / (g.dx() * g.dx());
    const double invdt2 = 1.0 / (dt * dt);
    RealField SN(K);
    for (int k = 0; k < K; ++k)
        SN[k] = N_next[k] + 2.0 * N_curr[k] + N_prev[k] + std::norm(E_next[k]) +
                2.0 * std::norm(E_curr[k]) + std::norm(E_prev[k]);
    for (int k = 0; k < K; ++k) {
        const int km = (k == 0) ? K - 1 : k - 1;
        const int kp = (k + 1 == K) ? 0 : k + 1;
        const double lap = 0.25 * w * (SN[kp] - 2.0 * SN[k] + SN[km]);
        F[2 * K + k] = (N_next[k] - 2.0 * N_curr[k] + N_prev[k]) * invdt2 - lap;
    }
    return F;
}

namespace {

/// Residual of the first-step / full form after V^{m+1} is eliminated through
/// the third equation:
/// F_N0 = (n - N)/dt - D2 [V + (dt/4)(n + N) + (dt/4)(|E'|^2 + |E|^2)].
std::vector<double> dvdm_residual_vform(const ComplexField& E_next, const RealField& N_next,
                                        const ComplexField& E_curr, const RealField& N_curr,
                                        const RealField& V_curr, const Grid& g, double dt) {
    const int K = g.K;
    std::vector<double> F(3 * K);
    schrodinger_residual(E_next, E_curr, N_next, N_curr, g, dt, F);

    const double w = 1.0 / (g.dx() * g.dx());
    const double invdt = 1.0 / dt;
    RealField W(K);
    for (int k = 0; k < K; ++k)
        W[k] = V_curr[k] + 0.25 * dt * (N_next[k] + N_curr[k] + std::norm(E_next[k]) +
                                        std::norm(E_curr[k]));
    for (int k = 0; k < K; ++k) {
        const int km = (k == 0) ? K - 1 : k - 1;
        const int kp = (k + 1 == K) ? 0 : k + 1;
        const double lap = w * (W[kp] - 2.0 * W[k] + W[km]);
        F[2 * K + k] = (N_next[k] - N_curr[k]) * invdt - lap;
    }
    return F;
}

}  // namespace

SparseBlockSystem assemble_newton_system(const ComplexField& E_curr, const RealField& N_curr,
                                         const ComplexField& guessE, const RealField& guessN,
                                         const Grid& g, double dt) {
    detail::check_len(E_curr.size(), g, "assemble_newton_system");
    detail::check_len(guessE.size(), g, "assemble_newton_system");
    const int K = g.K;
    const double beta = dt / (g.dx() * g.dx());
    const double betaN = 0.25 * dt * dt / (g.dx() * g.dx());

    SparseBlockSystem J;
    J.lower.assign(K, Mat3{});
    J.diag.assign(K, Mat3{});
    J.upper.assign(K, Mat3{});

    auto off_block = [&](int j) {
        Mat3 B;
        B(0, 0) = beta;
        B(1, 1) = beta;
        B(2, 0) = -2.0 * betaN * guessE[j].real();
        B(2, 1) = -2.0 * betaN * guessE[j].imag();
        B(2, 2) = -betaN;
        return B;
    };

    for (int k = 0; k < K; ++k) {
        const int km = (k == 0) ? K - 1 : k - 1;
        const int kp = (k + 1 == K) ? 0 : k + 1;
        const double cn = 0.5 * dt * (guessN[k] + N_curr[k]);
        const double ca = 0.5 * dt * (guessE[k].real() + E_curr[k].real());
        const double cb = 0.5 * dt * (guessE[k].imag() + E_curr[k].imag());

        Mat3& Dk = J.diag[k];
        Dk(0, 0) = -2.0 * beta - cn;
        Dk(0, 1) = -2.0;
        Dk(0, 2) = -ca;
        Dk(1, 0) = 2.0;
        Dk(1, 1) = -2.0 * beta - cn;
        Dk(1, 2) = -cb;
        Dk(2, 0) = 4.0 * betaN * guessE[k].real();
        Dk(2, 1) = 4.0 * betaN * guessE[k].imag();
        Dk(2, 2) = 1.0 + 2.0 * betaN;

        J.lower[k] = off_block(km);
        J.upper[k] = off_block(kp);
    }
    J.nnz = 19 * K;  // 5 + 5 + 9 structural entries per node
    return J;
}

DvdmStepper::DvdmStepper(const Grid& g, SchemeConfig cfg)
    : g_(g), cfg_(std::move(cfg)), glassey_(g, cfg_.dt) {
    cfg_.validate();
}

DvdmStepper::Solution DvdmStepper::newton_solve(const ComplexField& E_curr,
                                                const RealField& N_curr, ComplexField guessE,
                                                RealField guessN, bool first_form,
                                                const ComplexField& E_prev,
                                                const RealField& N_prev, const RealField& V_curr,
                                                NewtonStats* stats) const {
    const int K = g_.K;
    const double dt = cfg_.dt;

    auto residual = [&](const ComplexField& E, const RealField& N) {
        return first_form ? dvdm_residual_vform(E, N, E_curr, N_curr, V_curr, g_, dt)
                          : dvdm_residual_FEN(E, N, E_curr, N_curr, E_prev, N_prev, g_, dt);
    };

    std::vector<double> F = residual(guessE, guessN);
    double res = weighted_norm(F, g_);
    NewtonStats st;
    st.history.push_back(res);

    if (res > cfg_.newton_eps) {
        // Jacobian frozen at the initial guess, factored once per step.
        BlockCyclicFactor jac_factor{assemble_newton_system(E_curr, N_curr, guessE, guessN, g_, dt)};
        const double scaleE = 2.0 * dt;
        const double scaleN = first_form ? dt : dt * dt;

        std::vector<double> rhs(3 * K);
        bool converged = false;
        for (int it = 0; it < cfg_.newton_max_iter; ++it) {
            for (int k = 0; k < K; ++k) {
                rhs[3 * k] = scaleE * F[k];
                rhs[3 * k + 1] = scaleE * F[K + k];
                rhs[3 * k + 2] = scaleN * F[2 * K + k];
            }
            const std::vector<double> d = jac_factor.solve(rhs);
            for (int k = 0; k < K; ++k) {
                guessE[k] -= cplx(d[3 * k], d[3 * k + 1]);
                guessN[k] -= d[3 * k + 2];
            }
            F = residual(guessE, guessN);
            res = weighted_norm(F, g_);
            st.iterations = it + 1;
            st.history.push_back(res);
            if (res <= cfg_.newton_eps) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NewtonDivergenceError("simplified Newton failed to reach tolerance " +
                                            std::to_string(cfg_.newton_eps) + " in " +
                                            std::to_string(cfg_.newton_max_iter) + " iterations",
                                        st.history);
    }

    st.final_residual = res;
    if (stats) *stats = st;
    return {std::move(guessE), std::move(guessN)};
}

namespace {

RealField recover_next_V(const RealField& V_curr, const RealField& N_curr,
                         const RealField& N_next, const ComplexField& E_curr,
                         const ComplexField& E_next, double dt) {
    RealField V(V_curr.size());
    for (std::size_t k = 0; k < V.size(); ++k)
        V[k] = V_curr[k] + 0.5 * dt * (N_next[k] + N_curr[k]) +
               0.5 * dt * (std::norm(E_next[k]) + std::norm(E_curr[k]));
    return V;
}

}  // namespace

State DvdmStepper::first_step(const soliton::InitialData& init, NewtonStats* stats) const {
    detail::check_len(init.V0field.size(), g_, "dvdm first step: V0 required");

    // Initial guess: one Glassey step with the GN first-step variant.
    RealField N1g = glassey_.first_N(init.E0, init.N0field, init.Nt0, FirstStepVariant::GN);
    ComplexField E1g = glassey_.step_E(init.E0, init.N0field, N1g);

    auto sol = newton_solve(init.E0, init.N0field, std::move(E1g), std::move(N1g),
                            /*first_form=*/true, init.E0, init.N0field, init.V0field, stats);

    State s;
    s.V = recover_next_V(init.V0field, init.N0field, sol.N, init.E0, sol.E, cfg_.dt);
    s.E = std::move(sol.E);
    s.N = std::move(sol.N);
    s.step = 1;
    s.t = cfg_.dt;
    return s;
}

State DvdmStepper::step(const State& prev, const State& curr, NewtonStats* stats) const {
    if (prev.step + 1 != curr.step) throw ConfigError("dvdm_step: states must be consecutive");
    if (!curr.V) throw DomainError("dvdm_step: current state must carry V");

    RealField Ng = glassey_.step_N(prev.N, curr.N, curr.E);
    ComplexField Eg = glassey_.step_E(curr.E, curr.N, Ng);

    auto sol = newton_solve(curr.E, curr.N, std::move(Eg), std::move(Ng),
                            /*first_form=*/false, prev.E, prev.N, *curr.V, stats);

    State s;
    s.V = recover_next_V(*curr.V, curr.N, sol.N, curr.E, sol.E, cfg_.dt);
    s.E = std::move(sol.E);
    s.N = std::move(sol.N);
    s.step = curr.step + 1;
    s.t = s.step * cfg_.dt;
    return s;
}

State DvdmStepper::step_full(const State& prev, const State& curr, NewtonStats* stats) const {
    if (!curr.V) throw DomainError("dvdm_step_full: current state must carry V");

    RealField Ng = glassey_.step_N(prev.N, curr.N, curr.E);
    ComplexField Eg = glassey_.step_E(curr.E, curr.N, Ng);

    auto sol = newton_solve(curr.E, curr.N, std::move(Eg), std::move(Ng),
                            /*first_form=*/true, curr.E, curr.N, *curr.V, stats);

    State s;
    s.V = recover_next_V(*curr.V, curr.N, sol.N, curr.E, sol.E, cfg_.dt);
    s.E = std::move(sol.E);
    s.N = std::move(sol.N);
    s.step = curr.step + 1;
    s.t = s.step * cfg_.dt;
    return s;
}

StepSizeThresholds stepsize_thresholds(double p, double r, const Grid& g, double dt) {
    if (!(p > 3.0)) throw DomainError("stepsize_thresholds: p must exceed 3");
    if (!(r > 0.0)) throw DomainError("stepsize_thresholds: r must be positive");

    const double dx = g.dx();
    const double Lh = sobolev_Lhat(g.L);
    const double sdx = std::sqrt(dx);

    StepSizeThresholds th;
    th.p = p;
    th.r = r;
    th.L_hat = Lh;
    th.eps1 = 2.0 * (p - 3.0) * dx /
              (2.0 + 2.0 * p * (p * Lh + 1.0) * r + p * (p + 1.0) * r * sdx +
               (2.0 * p * p * Lh + p + 1.0) * r * dx);
    th.eps2 = dx / (r * (2.0 * p * Lh + 1.0 + (p + 0.5) * sdx + (2.0 * p * Lh + 0.5) * dx));
    th.dt_ok = dt < std::min({dx, th.eps1, th.eps2});
    return th;
}

}  // namespace zak

/// @file invariants.cpp

#include "zak/invariants.hpp"

#include <cmath>

namespace zak {

double norm_invariant(const State& s, const Grid& g) { return sq_norm(s.E, g); }

double energy_dvdm(const State& s, const Grid& g) {
    if (!s.V) throw DomainError("energy_dvdm: state carries no V");
    const double grad = sq_norm(forward_diff(s.E, g), g);
    const double quad = 0.5 * (sq_norm(s.N, g) + sq_norm(forward_diff(*s.V, g), g));
    const double coupling = inner_product(s.N, abs2(s.E), g);
    return grad + quad + coupling;
}

double energy_glassey(const State& curr, const State& next, const RealField& V_curr,
                      const Grid& g) {
    const double grad = sq_norm(forward_diff(next.E, g), g);
    const double quad = 0.5 * (0.5 * (sq_norm(curr.N, g) + sq_norm(next.N, g)) +
                               sq_norm(forward_diff(V_curr, g), g));
    const double coupling = inner_product(avg2(curr.N, next.N), abs2(next.E), g);
    return grad + quad + coupling;
}

ErrorRecord error_vs_reference(const State& s, const ComplexField& refE, const RealField& refN,
                               const Grid& g) {
    detail::check_len(refE.size(), g, "error_vs_reference");
    detail::check_len(refN.size(), g, "error_vs_reference");
    ErrorRecord r;
    r.step = s.step;
    double se = 0.0, sn = 0.0;
    for (int k = 0; k < g.K; ++k) {
        se += std::norm(s.E[k] - refE[k]);
        const double d = s.N[k] - refN[k];
        sn += d * d;
    }
    r.errE = std::sqrt(se * g.dx());
    r.errN = std::sqrt(sn * g.dx());
    return r;
}

void fill_bound_monitor(InvariantSample& sample, const State& s, const Grid& g) {
    sample.bound_monitor[0] = norm_2(s.E, g);
    sample.bound_monitor[1] = norm_2(forward_diff(s.E, g), g);
    sample.bound_monitor[2] = norm_inf(s.E);
    sample.bound_monitor[3] = norm_2(s.N, g);
    sample.bound_monitor[4] = s.V ? norm_2(forward_diff(*s.V, g), g) : 0.0;
}

}  // namespace zak

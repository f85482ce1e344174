/// @file invariants.hpp
/// @brief Discrete invariants (norm and the two energies), the bounded-
///        quantity monitor, and error norms against reference solutions.

#pragma once

#include "zak/grid.hpp"
#include "zak/schemes.hpp"

namespace zak {

/// Per-step invariant record.  bound_monitor carries the five quantities the
/// a-priori analysis keeps uniformly bounded:
/// ||E||, ||dx+ E||, ||E||_inf, ||N||, ||dx+ V||.
struct InvariantSample {
    int step = 0;
    double norm = 0.0;    // ||E||^2
    double energy = 0.0;  // E_D^(m) or E_G^(m+1)
    double bound_monitor[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
};

struct ErrorRecord {
    int step = 0;
    double errE = 0.0;  // ||E - reference||_2
    double errN = 0.0;
};

/// Norm invariant of both schemes: ||E||^2.
double norm_invariant(const State& s, const Grid& g);

/// DVDM energy, consistent in time:
/// ||dx+ E||^2 + (||N||^2 + ||dx+ V||^2)/2 + <N, |E|^2>.  Requires V.
double energy_dvdm(const State& s, const Grid& g);

/// Glassey energy, straddling levels m and m+1:
/// ||dx+ E^{m+1}||^2 + ((||N^m||^2 + ||N^{m+1}||^2)/2 + ||dx+ V^m||^2)/2
///   + <(N^m + N^{m+1})/2, |E^{m+1}|^2>.
double energy_glassey(const State& curr, const State& next, const RealField& V_curr,
                      const Grid& g);

/// Discrete 2-norm differences against a reference slice at the same time.
ErrorRecord error_vs_reference(const State& s, const ComplexField& refE, const RealField& refN,
                               const Grid& g);

/// Fills the bound-monitor entries of a sample from a state (V optional).
void fill_bound_monitor(InvariantSample& sample, const State& s, const Grid& g);

}  // namespace zak

/// @file harness.hpp
/// @brief Experiment configuration, trajectory driving, convergence and
///        collision studies, invariant audits, and CSV/JSON emission.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "zak/invariants.hpp"
#include "zak/schemes.hpp"
#include "zak/soliton.hpp"

namespace zak {

enum class SchemeVariant { G, GP, GN, DVDM };

std::string to_string(SchemeVariant s);
SchemeVariant parse_scheme(const std::string& s);

enum class HorizonKind { TL, T1, MultipleTL, Explicit };

/// Horizon spec: "tl", "t1", "<k>tl" (k real), or an explicit time.
struct Horizon {
    HorizonKind kind = HorizonKind::TL;
    double value = 1.0;
};

Horizon parse_horizon(const std::string& s);
std::string to_string(const Horizon& h);

struct ExperimentConfig {
    SchemeVariant scheme = SchemeVariant::GN;
    double E_max = 1.0;
    double L = 20.0;  // base soliton period
    int m = 1;
    int domain_multiplier = 1;  // 8 for collisions
    double dt = 0.1;
    double dx = 0.0;  // 0 means dx = dt
    Horizon horizon;
    bool collision = false;
    int collision_variant = 0;
    double newton_eps = 1e-8;
    int newton_max_iter = 50;

    double resolved_dx() const { return dx > 0.0 ? dx : dt; }
    int resolved_K() const;
    double domain_length() const { return domain_multiplier * L; }
    double resolve_T(double v) const;

    void validate() const;
};

struct RunReport {
    ExperimentConfig config;
    int steps = 0;  // M
    double v = 0.0;
    double T = 0.0;
    double E0_energy = 0.0;  // E^(0): E_G^(1) for Glassey, E_D^(0) for DVDM
    double dE = 0.0;         // max |energy - reference-level energy|
    double epsE = 0.0;       // max_m ||E^(m) - exact|| (single-soliton runs)
    double epsN = 0.0;
    double norm_drift = 0.0;  // max_m |N^(m) - N^(0)|
    double wall_time = 0.0;   // seconds spent inside scheme steps only
    double seam_jump = 0.0;
    bool q_clamped = false;
    std::string status = "ok";  // ok | diverged
    int diverged_at = -1;

    std::vector<InvariantSample> series;
    std::vector<ErrorRecord> errors;
    std::vector<int> newton_iters;        // per produced level (DVDM)
    std::vector<double> vlsq_residual;    // per step ||dt+ N - D2 V|| (Glassey)
};

RunReport run_experiment(const ExperimentConfig& cfg);

/// Halving study: runs the base config and `halvings` copies with dt and dx
/// simultaneously halved, then reports error ratios and observed orders.
struct ConvergenceStudy {
    std::vector<RunReport> runs;
    std::vector<double> ratio_epsE, order_epsE;
    std::vector<double> ratio_epsN, order_epsN;
};

ConvergenceStudy convergence_study(const ExperimentConfig& base, int halvings);

/// Paired collision runs compared at common times and common nodes against
/// the fine run taken as the reference solution.
struct CollisionComparison {
    RunReport coarse;
    RunReport reference;
    double epsE_tilde = 0.0;
    double epsN_tilde = 0.0;
};

CollisionComparison collision_comparison(const ExperimentConfig& cfg,
                                         const ExperimentConfig& reference_cfg);

/// Invariant audit of one configuration (the `validate` subcommand).
struct ValidationCheck {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double threshold = 0.0;
};

struct ValidationReport {
    RunReport run;
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
};

ValidationReport validate_run(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

enum class EmitFormat { csv, json };

EmitFormat parse_format(const std::string& s);

/// Summary rows (scheme, dt, E0, dE, eps_E,
/// eps_N, time) plus run metadata; one row per report, in order.
void emit_summary(const std::vector<RunReport>& reports, std::ostream& os, EmitFormat f);

/// Per-step series (step, t, norm, energy, errE, errN, newton_iters,
/// vlsq_residual) for drift-curve plotting.
void emit_series(const RunReport& report, std::ostream& os, EmitFormat f);

/// Writes <tag>_summary and <tag>_series files into dir; returns the paths.
std::vector<std::string> emit(const RunReport& report, const std::string& dir, EmitFormat f);

/// One shared summary plus per-run series files, in run order.
std::vector<std::string> emit_all(const std::vector<RunReport>& reports, const std::string& dir,
                                  EmitFormat f);

/// Round-trip helper: parses one summary CSV line back into named fields.
std::vector<std::pair<std::string, std::string>> parse_summary_csv_row(const std::string& header,
                                                                       const std::string& row);

}  // namespace zak

/// @file harness.cpp

#include "zak/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace zak {

namespace {

using njson = nlohmann::json;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string to_string(SchemeVariant s) {
    switch (s) {
        case SchemeVariant::G: return "g";
        case SchemeVariant::GP: return "gp";
        case SchemeVariant::GN: return "gn";
        case SchemeVariant::DVDM: return "dvdm";
    }
    return "?";
}

SchemeVariant parse_scheme(const std::string& s) {
    const std::string t = lower(s);
    if (t == "g") return SchemeVariant::G;
    if (t == "gp") return SchemeVariant::GP;
    if (t == "gn") return SchemeVariant::GN;
    if (t == "dvdm" || t == "d") return SchemeVariant::DVDM;
    throw ConfigError("unknown scheme '" + s + "' (expected g, gp, gn or dvdm)");
}

Horizon parse_horizon(const std::string& s) {
    const std::string t = lower(s);
    if (t == "tl") return {HorizonKind::TL, 1.0};
    if (t == "t1") return {HorizonKind::T1, 1.0};
    if (t.size() > 2 && t.substr(t.size() - 2) == "tl") {
        try {
            std::size_t pos = 0;
            const double k = std::stod(t.substr(0, t.size() - 2), &pos);
            if (pos == t.size() - 2 && k > 0.0) return {HorizonKind::MultipleTL, k};
        } catch (const std::exception&) {
        }
        throw ConfigError("bad horizon '" + s + "'");
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos == t.size() && v >= 0.0) return {HorizonKind::Explicit, v};
    } catch (const std::exception&) {
    }
    throw ConfigError("bad horizon '" + s + "' (expected tl, t1, <k>tl or a time)");
}

std::string to_string(const Horizon& h) {
    switch (h.kind) {
        case HorizonKind::TL: return "tl";
        case HorizonKind::T1: return "t1";
        case HorizonKind::MultipleTL: return fmt_full(h.value) + "tl";
        case HorizonKind::Explicit: return fmt_full(h.value);
    }
    return "?";
}

int ExperimentConfig::resolved_K() const {
    return static_cast<int>(std::llround(domain_length() / resolved_dx()));
}

double ExperimentConfig::resolve_T(double v) const {
    const double av = std::abs(v);
    switch (horizon.kind) {
        case HorizonKind::TL: return L / av;
        case HorizonKind::T1: return 1.0 / av;
        case HorizonKind::MultipleTL: return horizon.value * L / av;
        case HorizonKind::Explicit: return horizon.value;
    }
    return 0.0;
}

void ExperimentConfig::validate() const {
    if (!(E_max > 0.0)) throw ConfigError("E_max must be positive");
    if (!(L > 0.0)) throw ConfigError("L must be positive");
    if (m == 0) throw ConfigError("m must be nonzero");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (dx < 0.0) throw ConfigError("dx must be positive when given");
    if (!(newton_eps > 0.0)) throw ConfigError("newton-eps must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton-max-iter must be >= 1");
    if (collision) {
        if (domain_multiplier != 8)
            throw ConfigError("collision runs use the 8L computational interval");
        if (collision_variant != 0 && collision_variant != 1)
            throw ConfigError("collision variant must be 0 or 1");
        if (resolved_K() % 16 != 0)
            throw ConfigError("collision grid needs K divisible by 16");
    } else if (domain_multiplier != 1) {
        throw ConfigError("domain multiplier is 8 for collisions, 1 otherwise");
    }
    if (resolved_K() < 3) throw ConfigError("grid too coarse: K < 3");
}

// ---------------------------------------------------------------------------
// Trajectory driving
// ---------------------------------------------------------------------------

namespace {

struct Snapshot {
    int step = 0;
    ComplexField E;
    RealField N;
};

struct SnapshotSpec {
    int time_stride = 0;  // 0 disables collection
    int space_stride = 1;
};

template <class T>
std::vector<T> restrict_field(const std::vector<T>& f, int stride) {
    if (stride <= 1) return f;
    std::vector<T> r(f.size() / stride);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i * stride];
    return r;
}

class StepTimer {
public:
    void start() { t0_ = std::chrono::steady_clock::now(); }
    void stop() {
        total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }
    double seconds() const { return total_; }

private:
    std::chrono::steady_clock::time_point t0_;
    double total_ = 0.0;
};

void maybe_snapshot(const SnapshotSpec& snap, std::vector<Snapshot>* out, int step,
                    const ComplexField& E, const RealField& N) {
    if (!out || snap.time_stride <= 0 || step % snap.time_stride != 0) return;
    out->push_back({step, restrict_field(E, snap.space_stride),
                    restrict_field(N, snap.space_stride)});
}

RunReport run_impl(const ExperimentConfig& cfg, const SnapshotSpec& snap,
                   std::vector<Snapshot>* snapshots) {
    cfg.validate();
    const auto params = soliton::resolve_soliton(cfg.E_max, cfg.L, cfg.m);
    const double T = cfg.resolve_T(params.v);
    const int M = static_cast<int>(std::llround(T / cfg.dt));
    const Grid g(cfg.resolved_K(), cfg.domain_length());
    const double dt = cfg.dt;

    const soliton::InitialData init =
        cfg.collision ? soliton::sample_collision_initial(params, g, cfg.collision_variant)
                      : soliton::single_soliton_initial(params, g);
    const bool track_exact = !cfg.collision;

    RunReport rep;
    rep.config = cfg;
    rep.steps = M;
    rep.v = params.v;
    rep.T = T;
    rep.seam_jump = init.seam_jump;
    rep.q_clamped = params.q_clamped;
    rep.series.reserve(M + 1);
    rep.errors.reserve(M + 1);

    auto record_error = [&](int step, const ComplexField& E, const RealField& N) {
        if (!track_exact) {
            rep.errors.push_back({step, 0.0, 0.0});
            return;
        }
        const auto ref = soliton::sample_single_soliton(params, g, step * dt);
        State s;
        s.E = E;  // only the fields matter here
        s.N = N;
        s.step = step;
        rep.errors.push_back(error_vs_reference(s, ref.E, ref.N, g));
    };

    StepTimer timer;

    if (cfg.scheme == SchemeVariant::DVDM) {
        SchemeConfig sc;
        sc.dt = dt;
        sc.newton_eps = cfg.newton_eps;
        sc.newton_max_iter = cfg.newton_max_iter;
        sc.scheme = SchemeKind::DVDM;
        DvdmStepper stepper(g, sc);

        State curr;
        curr.E = init.E0;
        curr.N = init.N0field;
        curr.V = init.V0field;

        auto record_level = [&](const State& s, int iters) {
            InvariantSample iv;
            iv.step = s.step;
            iv.norm = norm_invariant(s, g);
            iv.energy = energy_dvdm(s, g);
            fill_bound_monitor(iv, s, g);
            rep.series.push_back(iv);
            rep.newton_iters.push_back(iters);
            record_error(s.step, s.E, s.N);
            maybe_snapshot(snap, snapshots, s.step, s.E, s.N);
        };

        record_level(curr, 0);
        rep.E0_energy = rep.series[0].energy;

        try {
            if (M >= 1) {
                NewtonStats st;
                timer.start();
                State next = stepper.first_step(init, &st);
                timer.stop();
                record_level(next, st.iterations);
                State prev = std::move(curr);
                curr = std::move(next);
                for (int mstep = 1; mstep < M; ++mstep) {
                    timer.start();
                    next = stepper.step(prev, curr, &st);
                    timer.stop();
                    record_level(next, st.iterations);
                    prev = std::move(curr);
                    curr = std::move(next);
                }
            }
        } catch (const NewtonDivergenceError&) {
            rep.status = "diverged";
            rep.diverged_at = static_cast<int>(rep.series.size());
        }

        for (const auto& iv : rep.series)
            rep.dE = std::max(rep.dE, std::abs(iv.energy - rep.E0_energy));
    } else {
        const FirstStepVariant variant = cfg.scheme == SchemeVariant::G ? FirstStepVariant::G
                                         : cfg.scheme == SchemeVariant::GP
                                             ? FirstStepVariant::GP
                                             : FirstStepVariant::GN;
        GlasseyStepper stepper(g, dt);

        ComplexField E_curr = init.E0;
        RealField N_prev, N_curr = init.N0field, N_next;

        {
            InvariantSample iv;
            iv.step = 0;
            State s0;
            s0.E = E_curr;
            s0.N = N_curr;
            iv.norm = norm_invariant(s0, g);
            iv.energy = 0.0;  // E_G^(1) is filled in after the first E-step
            fill_bound_monitor(iv, s0, g);
            rep.series.push_back(iv);
            record_error(0, E_curr, N_curr);
            maybe_snapshot(snap, snapshots, 0, E_curr, N_curr);
        }

        for (int mstep = 0; mstep < M; ++mstep) {
            timer.start();
            N_next = (mstep == 0) ? stepper.first_N(init.E0, init.N0field, init.Nt0, variant)
                                  : stepper.step_N(N_prev, N_curr, E_curr);
            ComplexField E_next = stepper.step_E(E_curr, N_curr, N_next);
            timer.stop();

            // Metrics: V recovery, energies, least-squares residual, errors.
            const RealField V_curr = stepper.recover_V(N_curr, N_next);
            {
                const RealField dN = diff2(N_curr, N_next, dt);
                const RealField DV = second_diff(V_curr, g);
                double s = 0.0;
                for (int k = 0; k < g.K; ++k) {
                    const double d = dN[k] - DV[k];
                    s += d * d;
                }
                rep.vlsq_residual.push_back(std::sqrt(s * g.dx()));
            }

            InvariantSample iv;
            iv.step = mstep + 1;
            State s_next;
            s_next.E = E_next;
            s_next.N = N_next;
            s_next.V = V_curr;  // level-m potential, the one the energy uses
            iv.norm = norm_invariant(s_next, g);
            State s_curr;
            s_curr.E = E_curr;
            s_curr.N = N_curr;
            iv.energy = energy_glassey(s_curr, s_next, V_curr, g);
            fill_bound_monitor(iv, s_next, g);
            rep.series.push_back(iv);
            record_error(mstep + 1, E_next, N_next);
            maybe_snapshot(snap, snapshots, mstep + 1, E_next, N_next);

            N_prev = std::move(N_curr);
            N_curr = std::move(N_next);
            E_curr = std::move(E_next);
        }

        if (M >= 1) {
            rep.E0_energy = rep.series[1].energy;
            rep.series[0].energy = rep.E0_energy;
            for (int i = 1; i <= M; ++i)
                rep.dE = std::max(rep.dE, std::abs(rep.series[i].energy - rep.E0_energy));
        }
    }

    for (const auto& e : rep.errors) {
        rep.epsE = std::max(rep.epsE, e.errE);
        rep.epsN = std::max(rep.epsN, e.errN);
    }
    for (const auto& iv : rep.series)
        rep.norm_drift = std::max(rep.norm_drift, std::abs(iv.norm - rep.series[0].norm));
    rep.wall_time = timer.seconds();
    return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
    return run_impl(cfg, SnapshotSpec{}, nullptr);
}

ConvergenceStudy convergence_study(const ExperimentConfig& base, int halvings) {
    if (halvings < 0) throw ConfigError("halvings must be >= 0");
    ConvergenceStudy study;
    ExperimentConfig cfg = base;
    cfg.dx = base.resolved_dx();
    for (int i = 0; i <= halvings; ++i) {
        study.runs.push_back(run_experiment(cfg));
        cfg.dt *= 0.5;
        cfg.dx *= 0.5;
    }
    for (std::size_t i = 1; i < study.runs.size(); ++i) {
        const double rE = study.runs[i - 1].epsE / study.runs[i].epsE;
        const double rN = study.runs[i - 1].epsN / study.runs[i].epsN;
        study.ratio_epsE.push_back(rE);
        study.ratio_epsN.push_back(rN);
        study.order_epsE.push_back(std::log2(rE));
        study.order_epsN.push_back(std::log2(rN));
    }
    return study;
}

CollisionComparison collision_comparison(const ExperimentConfig& cfg,
                                         const ExperimentConfig& reference_cfg) {
    cfg.validate();
    reference_cfg.validate();
    if (!cfg.collision || !reference_cfg.collision)
        throw ConfigError("collision_comparison needs collision configs");
    if (cfg.collision_variant != reference_cfg.collision_variant)
        throw ConfigError("initial-condition variants must match between run and reference");
    if (cfg.E_max != reference_cfg.E_max || cfg.L != reference_cfg.L || cfg.m != reference_cfg.m)
        throw ConfigError("run and reference must share soliton parameters");

    const double ratio_t = cfg.dt / reference_cfg.dt;
    const int rt = static_cast<int>(std::llround(ratio_t));
    if (rt < 1 || std::abs(ratio_t - rt) > 1e-9)
        throw ConfigError("reference dt must divide dt");
    const int Kc = cfg.resolved_K();
    const int Kf = reference_cfg.resolved_K();
    if (Kf % Kc != 0) throw ConfigError("reference grid must refine the run grid");

    SnapshotSpec coarse_spec{1, 1};
    SnapshotSpec ref_spec{rt, Kf / Kc};
    std::vector<Snapshot> coarse_snaps, ref_snaps;

    CollisionComparison out;
    out.coarse = run_impl(cfg, coarse_spec, &coarse_snaps);
    out.reference = run_impl(reference_cfg, ref_spec, &ref_snaps);

    const Grid gc(Kc, cfg.domain_length());
    const std::size_t n = std::min(coarse_snaps.size(), ref_snaps.size());
    for (std::size_t i = 0; i < n; ++i) {
        double se = 0.0, sn = 0.0;
        for (int k = 0; k < Kc; ++k) {
            se += std::norm(coarse_snaps[i].E[k] - ref_snaps[i].E[k]);
            const double d = coarse_snaps[i].N[k] - ref_snaps[i].N[k];
            sn += d * d;
        }
        out.epsE_tilde = std::max(out.epsE_tilde, std::sqrt(se * gc.dx()));
        out.epsN_tilde = std::max(out.epsN_tilde, std::sqrt(sn * gc.dx()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation audit
// ---------------------------------------------------------------------------

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ValidationReport validate_run(const ExperimentConfig& cfg) {
    ValidationReport vr;
    vr.run = run_experiment(cfg);
    const RunReport& r = vr.run;

    auto add = [&](const std::string& name, double observed, double threshold) {
        vr.checks.push_back({name, observed <= threshold, observed, threshold});
    };

    const double N0 = r.series.empty() ? 0.0 : r.series[0].norm;
    if (cfg.scheme == SchemeVariant::DVDM) {
        add("norm-conservation", r.norm_drift, 1e3 * cfg.newton_eps * std::max(N0, 1.0));
        add("energy-conservation", r.dE, 100.0 * cfg.newton_eps * std::max(1, r.steps));
    } else {
        add("norm-conservation", r.norm_drift, 1e-10 * std::max(N0, 1.0));
    }

    if (cfg.scheme == SchemeVariant::GN && r.steps >= 1) {
        // GN forces mean-zero density increments, so the recovered V solves
        // its Poisson problem to projection roundoff on the very first step.
        add("gn-vlsq-first-step", r.vlsq_residual.empty() ? 0.0 : r.vlsq_residual.front(),
            1e-9 * std::max(1.0, N0));
    }

    // Bounded-quantity monitor: nothing may exceed twice its first-period max.
    if (!r.series.empty()) {
        const double TL = cfg.L / std::abs(r.v);
        const int first_period = std::min<int>(r.steps, static_cast<int>(TL / cfg.dt));
        for (int q = 0; q < 5; ++q) {
            double early = 0.0, all = 0.0;
            for (const auto& iv : r.series) {
                if (iv.step <= std::max(first_period, 1))
                    early = std::max(early, iv.bound_monitor[q]);
                all = std::max(all, iv.bound_monitor[q]);
            }
            add("bound-monitor-" + std::to_string(q), all, 2.0 * std::max(early, 1e-30));
        }
    }

    vr.checks.push_back(
        {"status-ok", r.status == "ok", r.status == "ok" ? 1.0 : 0.0, 1.0});
    return vr;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

EmitFormat parse_format(const std::string& s) {
    const std::string t = lower(s);
    if (t == "csv") return EmitFormat::csv;
    if (t == "json") return EmitFormat::json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

namespace {

const char* kSummaryHeader =
    "scheme,dt,dx,K,M,E0,dE,epsE,epsN,norm_drift,time,status,seam_jump,q_clamped";

void summary_row_csv(const RunReport& r, std::ostream& os) {
    os << to_string(r.config.scheme) << ',' << fmt_full(r.config.dt) << ','
       << fmt_full(r.config.resolved_dx()) << ',' << r.config.resolved_K() << ',' << r.steps
       << ',' << fmt_full(r.E0_energy) << ',' << fmt_full(r.dE) << ',' << fmt_full(r.epsE) << ','
       << fmt_full(r.epsN) << ',' << fmt_full(r.norm_drift) << ',' << fmt_full(r.wall_time)
       << ',' << r.status << ',' << fmt_full(r.seam_jump) << ',' << (r.q_clamped ? 1 : 0)
       << '\n';
}

njson summary_row_json(const RunReport& r) {
    return njson{{"scheme", to_string(r.config.scheme)},
                 {"dt", r.config.dt},
                 {"dx", r.config.resolved_dx()},
                 {"K", r.config.resolved_K()},
                 {"M", r.steps},
                 {"E0", r.E0_energy},
                 {"dE", r.dE},
                 {"epsE", r.epsE},
                 {"epsN", r.epsN},
                 {"norm_drift", r.norm_drift},
                 {"time", r.wall_time},
                 {"status", r.status},
                 {"seam_jump", r.seam_jump},
                 {"q_clamped", r.q_clamped}};
}

}  // namespace

void emit_summary(const std::vector<RunReport>& reports, std::ostream& os, EmitFormat f) {
    if (f == EmitFormat::csv) {
        os << kSummaryHeader << '\n';
        for (const auto& r : reports) summary_row_csv(r, os);
    } else {
        njson j = njson::array();
        for (const auto& r : reports) j.push_back(summary_row_json(r));
        os << j.dump(2) << '\n';
    }
}

void emit_series(const RunReport& r, std::ostream& os, EmitFormat f) {
    const auto iters_at = [&](std::size_t i) -> int {
        return i < r.newton_iters.size() ? r.newton_iters[i] : 0;
    };
    const auto vlsq_at = [&](std::size_t i) -> double {
        return (i >= 1 && i - 1 < r.vlsq_residual.size()) ? r.vlsq_residual[i - 1] : 0.0;
    };
    if (f == EmitFormat::csv) {
        os << "step,t,norm,energy,errE,errN,newton_iters,vlsq_residual\n";
        for (std::size_t i = 0; i < r.series.size(); ++i) {
            const auto& iv = r.series[i];
            const double errE = i < r.errors.size() ? r.errors[i].errE : 0.0;
            const double errN = i < r.errors.size() ? r.errors[i].errN : 0.0;
            os << iv.step << ',' << fmt_full(iv.step * r.config.dt) << ',' << fmt_full(iv.norm)
               << ',' << fmt_full(iv.energy) << ',' << fmt_full(errE) << ',' << fmt_full(errN)
               << ',' << iters_at(i) << ',' << fmt_full(vlsq_at(i)) << '\n';
        }
    } else {
        njson rows = njson::array();
        for (std::size_t i = 0; i < r.series.size(); ++i) {
            const auto& iv = r.series[i];
            rows.push_back({{"step", iv.step},
                            {"t", iv.step * r.config.dt},
                            {"norm", iv.norm},
                            {"energy", iv.energy},
                            {"errE", i < r.errors.size() ? r.errors[i].errE : 0.0},
                            {"errN", i < r.errors.size() ? r.errors[i].errN : 0.0},
                            {"newton_iters", iters_at(i)},
                            {"vlsq_residual", vlsq_at(i)}});
        }
        os << rows.dump(2) << '\n';
    }
}

namespace {

std::string run_tag(const RunReport& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r.config.dt);
    std::string dt(buf);
    for (char& c : dt)
        if (c == '.') c = 'p';
    std::string tag = to_string(r.config.scheme) + "_dt" + dt;
    if (r.config.collision) tag = "collision_" + tag;
    return tag;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    writer(os);
    if (!os.good()) throw std::runtime_error("write failed: " + path);
    return path;
}

}  // namespace

std::vector<std::string> emit(const RunReport& report, const std::string& dir, EmitFormat f) {
    const std::string ext = (f == EmitFormat::csv) ? ".csv" : ".json";
    const std::string tag = run_tag(report);
    std::vector<std::string> paths;
    paths.push_back(write_file(dir, tag + "_summary" + ext, [&](std::ostream& os) {
        emit_summary({report}, os, f);
    }));
    paths.push_back(write_file(dir, tag + "_series" + ext, [&](std::ostream& os) {
        emit_series(report, os, f);
    }));
    return paths;
}

std::vector<std::string> emit_all(const std::vector<RunReport>& reports, const std::string& dir,
                                  EmitFormat f) {
    const std::string ext = (f == EmitFormat::csv) ? ".csv" : ".json";
    std::vector<std::string> paths;
    paths.push_back(write_file(dir, "summary" + ext, [&](std::ostream& os) {
        emit_summary(reports, os, f);
    }));
    for (const auto& r : reports)
        paths.push_back(write_file(dir, run_tag(r) + "_series" + ext, [&](std::ostream& os) {
            emit_series(r, os, f);
        }));
    return paths;
}

std::vector<std::pair<std::string, std::string>> parse_summary_csv_row(const std::string& header,
                                                                       const std::string& row) {
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };
    const auto h = split(header);
    const auto v = split(row);
    if (h.size() != v.size()) throw std::runtime_error("summary row does not match header");
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < h.size(); ++i) out.emplace_back(h[i], v[i]);
    return out;
}

}  // namespace zak

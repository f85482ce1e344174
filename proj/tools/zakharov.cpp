/// @file zakharov.cpp
/// @brief Command-line harness: run / sweep / collision / validate.
///
/// Exit codes: 0 success, 2 configuration error, 3 scheme divergence.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zak/harness.hpp"

namespace {

struct CliOpts {
    std::string scheme = "gn";
    double emax = 1.0;
    double L = 20.0;
    int m = 1;
    double dt = 0.1;
    double dx = 0.0;
    std::string horizon = "tl";
    bool collision = false;
    int variant = 0;
    double newton_eps = 1e-8;
    int newton_max_iter = 50;
    std::string config_file;
    std::string out = "out";
    std::string format = "csv";
};

void add_config_flags(CLI::App* sub, CliOpts& o) {
    sub->add_option("--scheme", o.scheme, "scheme: gp, gn, g or dvdm");
    sub->add_option("--emax", o.emax, "soliton amplitude E_max");
    sub->add_option("--L", o.L, "base spatial period");
    sub->add_option("--m", o.m, "soliton winding number");
    sub->add_option("--dt", o.dt, "time step");
    sub->add_option("--dx", o.dx, "spatial step (default: dx = dt)");
    sub->add_option("--horizon", o.horizon, "tl, t1, <k>tl or an explicit time");
    sub->add_flag("--collision", o.collision, "two-soliton collision on the 8L interval");
    sub->add_option("--variant", o.variant, "collision initial-condition variant, 0 or 1");
    sub->add_option("--newton-eps", o.newton_eps, "Newton stopping tolerance");
    sub->add_option("--newton-max-iter", o.newton_max_iter, "Newton iteration cap");
    sub->add_option("--config", o.config_file,
                    "JSON config file (replaces the flags above)");
}

void add_output_flags(CLI::App* sub, CliOpts& o) {
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "csv or json");
}

void load_config_file(CliOpts& o) {
    std::ifstream in(o.config_file);
    if (!in) throw zak::ConfigError("cannot open config file: " + o.config_file);
    nlohmann::json j;
    in >> j;
    if (j.contains("scheme")) o.scheme = j["scheme"].get<std::string>();
    if (j.contains("emax")) o.emax = j["emax"].get<double>();
    if (j.contains("L")) o.L = j["L"].get<double>();
    if (j.contains("m")) o.m = j["m"].get<int>();
    if (j.contains("dt")) o.dt = j["dt"].get<double>();
    if (j.contains("dx")) o.dx = j["dx"].get<double>();
    if (j.contains("horizon")) {
        if (j["horizon"].is_number())
            o.horizon = std::to_string(j["horizon"].get<double>());
        else
            o.horizon = j["horizon"].get<std::string>();
    }
    if (j.contains("collision")) o.collision = j["collision"].get<bool>();
    if (j.contains("variant")) o.variant = j["variant"].get<int>();
    if (j.contains("newton_eps")) o.newton_eps = j["newton_eps"].get<double>();
    if (j.contains("newton_max_iter")) o.newton_max_iter = j["newton_max_iter"].get<int>();
}

zak::ExperimentConfig to_config(CliOpts o) {
    if (!o.config_file.empty()) load_config_file(o);
    zak::ExperimentConfig cfg;
    cfg.scheme = zak::parse_scheme(o.scheme);
    cfg.E_max = o.emax;
    cfg.L = o.L;
    cfg.m = o.m;
    cfg.dt = o.dt;
    cfg.dx = o.dx;
    cfg.horizon = zak::parse_horizon(o.horizon);
    cfg.collision = o.collision;
    cfg.collision_variant = o.variant;
    cfg.domain_multiplier = o.collision ? 8 : 1;
    cfg.newton_eps = o.newton_eps;
    cfg.newton_max_iter = o.newton_max_iter;
    return cfg;
}

void print_summary(const std::vector<zak::RunReport>& reports) {
    zak::emit_summary(reports, std::cout, zak::EmitFormat::csv);
}

int exit_code_for(const zak::RunReport& r) { return r.status == "diverged" ? 3 : 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-conservative finite-difference schemes for the periodic Zakharov equations"};
    app.require_subcommand(1);

    CliOpts run_o, sweep_o, coll_o, val_o;
    int halvings = 2;
    double ref_dt = 0.0, ref_dx = 0.0;

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
    add_config_flags(run_cmd, run_o);
    add_output_flags(run_cmd, run_o);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "halving convergence study");
    add_config_flags(sweep_cmd, sweep_o);
    add_output_flags(sweep_cmd, sweep_o);
    sweep_cmd->add_option("--halvings", halvings, "number of dt = dx halvings");

    CLI::App* coll_cmd =
        app.add_subcommand("collision", "paired collision run against a fine reference");
    add_config_flags(coll_cmd, coll_o);
    add_output_flags(coll_cmd, coll_o);
    coll_cmd->add_option("--ref-dt", ref_dt, "reference run dt (default dt/4)");
    coll_cmd->add_option("--ref-dx", ref_dx, "reference run dx (default ref-dt)");

    CLI::App* val_cmd = app.add_subcommand("validate", "invariant audit of a configuration");
    add_config_flags(val_cmd, val_o);
    double advisor_p = 0.0, advisor_r = 0.0;
    val_cmd->add_option("--advisor-p", advisor_p, "step-size advisor exponent p > 3");
    val_cmd->add_option("--advisor-r", advisor_r, "step-size advisor bound r > 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto report = zak::run_experiment(to_config(run_o));
            zak::emit(report, run_o.out, zak::parse_format(run_o.format));
            print_summary({report});
            return exit_code_for(report);
        }

        if (sweep_cmd->parsed()) {
            const auto study = zak::convergence_study(to_config(sweep_o), halvings);
            zak::emit_all(study.runs, sweep_o.out, zak::parse_format(sweep_o.format));
            print_summary(study.runs);
            for (std::size_t i = 0; i < study.ratio_epsE.size(); ++i)
                std::cout << "halving " << i + 1 << ": epsE ratio " << study.ratio_epsE[i]
                          << " (order " << study.order_epsE[i] << "), epsN ratio "
                          << study.ratio_epsN[i] << " (order " << study.order_epsN[i] << ")\n";
            for (const auto& r : study.runs)
                if (r.status == "diverged") return 3;
            return 0;
        }

        if (coll_cmd->parsed()) {
            coll_o.collision = true;
            auto cfg = to_config(coll_o);
            auto ref_cfg = cfg;
            ref_cfg.dt = ref_dt > 0.0 ? ref_dt : cfg.dt / 4.0;
            ref_cfg.dx = ref_dx > 0.0 ? ref_dx : ref_cfg.dt;
            const auto cmp = zak::collision_comparison(cfg, ref_cfg);
            zak::emit_all({cmp.coarse, cmp.reference}, coll_o.out,
                          zak::parse_format(coll_o.format));
            print_summary({cmp.coarse, cmp.reference});
            std::cout << "epsE_tilde," << cmp.epsE_tilde << "\nepsN_tilde," << cmp.epsN_tilde
                      << "\n";
            return std::max(exit_code_for(cmp.coarse), exit_code_for(cmp.reference));
        }

        if (val_cmd->parsed()) {
            const auto cfg = to_config(val_o);
            const auto vr = zak::validate_run(cfg);
            for (const auto& c : vr.checks)
                std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  observed "
                          << c.observed << "  threshold " << c.threshold << "\n";
            if (advisor_p > 0.0 && advisor_r > 0.0) {
                const zak::Grid g(cfg.resolved_K(), cfg.domain_length());
                const auto th = zak::stepsize_thresholds(advisor_p, advisor_r, g, cfg.dt);
                std::cout << "advisory: eps1=" << th.eps1 << " eps2=" << th.eps2
                          << " dt " << (th.dt_ok ? "within" : "exceeds")
                          << " min(dx, eps1, eps2); stepping proceeds regardless\n";
            }
            if (vr.run.status == "diverged") return 3;
            return vr.all_pass() ? 0 : 1;
        }
    } catch (const zak::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const zak::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const zak::NewtonDivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

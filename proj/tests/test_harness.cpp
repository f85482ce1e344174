#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zak/harness.hpp"

using namespace zak;

namespace {

ExperimentConfig small_gn() {
    ExperimentConfig cfg;
    cfg.scheme = SchemeVariant::GN;
    cfg.E_max = 1.0;
    cfg.dt = 0.1;
    cfg.horizon = parse_horizon("t1");
    return cfg;
}

}  // namespace

TEST_CASE("horizon parsing") {
    CHECK(parse_horizon("tl").kind == HorizonKind::TL);
    CHECK(parse_horizon("T1").kind == HorizonKind::T1);
    const auto h = parse_horizon("5tl");
    CHECK(h.kind == HorizonKind::MultipleTL);
    CHECK(h.value == doctest::Approx(5.0));
    const auto e = parse_horizon("12.5");
    CHECK(e.kind == HorizonKind::Explicit);
    CHECK(e.value == doctest::Approx(12.5));
    CHECK_THROWS_AS(parse_horizon("sideways"), ConfigError);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_gn();
    cfg.collision = true;  // without the 8L interval
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.domain_multiplier = 8;
    cfg.collision_variant = 3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = small_gn();
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = small_gn();
    cfg.domain_multiplier = 8;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    CHECK_THROWS_AS(parse_scheme("xyz"), ConfigError);
    CHECK(parse_scheme("dvdm") == SchemeVariant::DVDM);
}

TEST_CASE("zero-step run echoes the initial invariants") {
    ExperimentConfig cfg = small_gn();
    cfg.horizon = parse_horizon("0");
    const auto rep = run_experiment(cfg);
    CHECK(rep.steps == 0);
    CHECK(rep.series.size() == 1);
    CHECK(rep.epsE == 0.0);
    CHECK(rep.epsN == 0.0);
    CHECK(rep.dE == 0.0);
    CHECK(rep.series[0].norm > 0.0);
}

TEST_CASE("small GN run: conservation, internal consistency, determinism") {
    const auto rep = run_experiment(small_gn());
    CHECK(rep.status == "ok");
    CHECK(rep.steps == 16);  // T1 = 1/v ~ 1.59, dt = 0.1
    CHECK(rep.norm_drift <= 1e-10 * rep.series[0].norm);
    CHECK(rep.dE <= 1e-9);

    double max_drift = 0.0;
    for (std::size_t i = 1; i < rep.series.size(); ++i)
        max_drift = std::max(max_drift, std::abs(rep.series[i].energy - rep.series[1].energy));
    CHECK(rep.dE == doctest::Approx(max_drift).epsilon(1e-15));

    const auto rep2 = run_experiment(small_gn());
    CHECK(rep.E0_energy == rep2.E0_energy);
    CHECK(rep.epsE == rep2.epsE);
    CHECK(rep.epsN == rep2.epsN);
    CHECK(rep.dE == rep2.dE);
    for (std::size_t i = 0; i < rep.series.size(); ++i) {
        CHECK(rep.series[i].norm == rep2.series[i].norm);
        CHECK(rep.series[i].energy == rep2.series[i].energy);
    }
}

TEST_CASE("small DVDM run records newton iterations and conserves") {
    ExperimentConfig cfg = small_gn();
    cfg.scheme = SchemeVariant::DVDM;
    const auto rep = run_experiment(cfg);
    CHECK(rep.status == "ok");
    CHECK(rep.newton_iters.size() == rep.series.size());
    int total_iters = 0;
    for (int it : rep.newton_iters) total_iters += it;
    CHECK(total_iters >= rep.steps);  // at least one correction per step here
    CHECK(rep.dE <= 100.0 * cfg.newton_eps * rep.steps);
    CHECK(rep.norm_drift <= 1e3 * cfg.newton_eps * rep.series[0].norm);
}

TEST_CASE("validate_run passes on sound configurations") {
    const auto vr = validate_run(small_gn());
    CHECK(vr.all_pass());
    for (const auto& c : vr.checks) CHECK(c.pass);

    ExperimentConfig dv = small_gn();
    dv.scheme = SchemeVariant::DVDM;
    CHECK(validate_run(dv).all_pass());
}

TEST_CASE("emission: header-only series, round-trip, sweep ordering") {
    RunReport empty;
    empty.config = small_gn();
    std::ostringstream es;
    emit_series(empty, es, EmitFormat::csv);
    CHECK(es.str() == "step,t,norm,energy,errE,errN,newton_iters,vlsq_residual\n");

    const auto rep = run_experiment(small_gn());
    std::ostringstream ss;
    emit_summary({rep}, ss, EmitFormat::csv);
    std::istringstream in(ss.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const auto fields = parse_summary_csv_row(header, row);
    bool saw_dE = false, saw_scheme = false;
    for (const auto& [k, v] : fields) {
        if (k == "dE") {
            saw_dE = true;
            CHECK(std::stod(v) == rep.dE);  // full-precision round trip
        }
        if (k == "scheme") {
            saw_scheme = true;
            CHECK(v == "gn");
        }
    }
    CHECK(saw_dE);
    CHECK(saw_scheme);

    // JSON mirror carries the same fields
    std::ostringstream js;
    emit_summary({rep}, js, EmitFormat::json);
    CHECK(js.str().find("\"dE\"") != std::string::npos);

    // three-run sweep emits three data rows in run order
    ExperimentConfig base = small_gn();
    base.horizon = parse_horizon("1.0");
    const auto study = convergence_study(base, 2);
    CHECK(study.runs.size() == 3);
    std::ostringstream sw;
    emit_summary(study.runs, sw, EmitFormat::csv);
    int rows = 0;
    std::string line;
    std::istringstream swin(sw.str());
    while (std::getline(swin, line))
        if (!line.empty() && line.substr(0, 2) == "gn") ++rows;
    CHECK(rows == 3);
    for (std::size_t i = 1; i < study.runs.size(); ++i)
        CHECK(study.runs[i].config.dt == doctest::Approx(0.5 * study.runs[i - 1].config.dt));

    // file emission writes summary plus one series per run
    const std::string dir = "emit_test_out";
    const auto paths = emit_all(study.runs, dir, EmitFormat::csv);
    CHECK(paths.size() == 4);
    for (const auto& p : paths) CHECK(std::filesystem::exists(p));
    std::filesystem::remove_all(dir);
}

TEST_CASE("convergence study reports second order on the soliton") {
    ExperimentConfig base = small_gn();
    base.horizon = parse_horizon("t1");
    const auto study = convergence_study(base, 1);
    REQUIRE(study.ratio_epsE.size() == 1);
    CHECK(study.ratio_epsE[0] >= 3.0);
    CHECK(study.ratio_epsE[0] <= 5.2);
}

TEST_CASE("collision comparison: identical configs give zero tilde errors") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeVariant::GN;
    cfg.E_max = 1.0;
    cfg.dt = 0.4;  // K = 400, divisible by 16
    cfg.collision = true;
    cfg.domain_multiplier = 8;
    cfg.horizon = parse_horizon("2.0");
    const auto cmp = collision_comparison(cfg, cfg);
    CHECK(cmp.epsE_tilde == 0.0);
    CHECK(cmp.epsN_tilde == 0.0);
    CHECK(cmp.coarse.seam_jump > 0.0);

    auto ref = cfg;
    ref.collision_variant = 1;
    CHECK_THROWS_AS(collision_comparison(cfg, ref), ConfigError);

    ref = cfg;
    ref.dt = 0.3;  // does not divide 0.4
    CHECK_THROWS_AS(collision_comparison(cfg, ref), ConfigError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "relaxinv/config.hpp"
#include "relaxinv/errors.hpp"

using namespace relaxinv;
namespace fs = std::filesystem;

TEST_CASE("json round trip preserves every field") {
    RunConfig cfg;
    cfg.kernel.kind = KernelKind::cpmg_cpmg;
    cfg.kernel.m1 = 48;
    cfg.kernel.m2 = 1000;
    cfg.kernel.t1_min = 0.25;
    cfg.kernel.t1_max = 4000.0;
    cfg.kernel.te = 0.75;
    cfg.kernel.n1 = 33;
    cfg.kernel.n2 = 44;
    cfg.kernel.T1_min = 0.05;
    cfg.kernel.T2_max = 20000.0;
    cfg.phantom.peaks = {PeakSpec{100.0, 10.0, 2.0, 0.2, 0.3}};
    cfg.noise.delta = 2.5e-3;
    cfg.noise.seed = 99;
    cfg.noise.realizations = 7;
    cfg.solver.method = Method::a_l1;
    cfg.solver.tau_outer = 1e-4;
    cfg.solver.max_inner = 1234;
    cfg.solver.gp_iters = 21;
    cfg.solver.alpha_fixed = 0.5;
    cfg.solver.upen.beta0 = 0.125;
    cfg.solver.upen.beta0_rel = 1e-7;
    cfg.solver.upen.beta_p = 0.25;
    cfg.solver.upen.beta_c = 4.0;
    cfg.solver.upen.rho = 1e-11;
    cfg.solver.upen.neighborhood_radius = 2;
    cfg.solver.upen.form = LambdaForm::exact;
    cfg.solver.upen.lambda_cap_rel = 0.5;

    const RunConfig back = config_from_json_string(to_json_string(cfg));
    CHECK(back.kernel.kind == cfg.kernel.kind);
    CHECK(back.kernel.m1 == cfg.kernel.m1);
    CHECK(back.kernel.m2 == cfg.kernel.m2);
    CHECK(back.kernel.t1_min == cfg.kernel.t1_min);
    CHECK(back.kernel.t1_max == cfg.kernel.t1_max);
    CHECK(back.kernel.te == cfg.kernel.te);
    CHECK(back.kernel.n1 == cfg.kernel.n1);
    CHECK(back.kernel.n2 == cfg.kernel.n2);
    CHECK(back.kernel.T1_min == cfg.kernel.T1_min);
    CHECK(back.kernel.T2_max == cfg.kernel.T2_max);
    REQUIRE(back.phantom.peaks.size() == 1);
    CHECK(back.phantom.peaks[0].t1_center_ms == 100.0);
    CHECK(back.phantom.peaks[0].width2_decades == 0.3);
    CHECK(back.noise.delta == cfg.noise.delta);
    CHECK(back.noise.seed == cfg.noise.seed);
    CHECK(back.noise.realizations == cfg.noise.realizations);
    CHECK(back.solver.method == cfg.solver.method);
    CHECK(back.solver.tau_outer == cfg.solver.tau_outer);
    CHECK(back.solver.max_inner == cfg.solver.max_inner);
    CHECK(back.solver.gp_iters == cfg.solver.gp_iters);
    CHECK(back.solver.alpha_fixed == cfg.solver.alpha_fixed);
    CHECK(back.solver.upen.beta0 == cfg.solver.upen.beta0);
    CHECK(back.solver.upen.beta0_rel == cfg.solver.upen.beta0_rel);
    CHECK(back.solver.upen.beta_p == cfg.solver.upen.beta_p);
    CHECK(back.solver.upen.beta_c == cfg.solver.upen.beta_c);
    CHECK(back.solver.upen.rho == cfg.solver.upen.rho);
    CHECK(back.solver.upen.neighborhood_radius == cfg.solver.upen.neighborhood_radius);
    CHECK(back.solver.upen.form == cfg.solver.upen.form);
    CHECK(back.solver.upen.lambda_cap_rel == cfg.solver.upen.lambda_cap_rel);
}

TEST_CASE("missing fields fall back to defaults") {
    const RunConfig d;
    const RunConfig cfg = config_from_json_string("{}");
    CHECK(cfg.kernel.m1 == d.kernel.m1);
    CHECK(cfg.kernel.n1 == d.kernel.n1);
    CHECK(cfg.noise.delta == d.noise.delta);
    CHECK(cfg.solver.method == d.solver.method);
    CHECK(cfg.solver.upen.beta_p == d.solver.upen.beta_p);

    const RunConfig partial =
        config_from_json_string(R"({"kernel": {"m1": 32}, "solver": {"method": "a_l1"}})");
    CHECK(partial.kernel.m1 == 32);
    CHECK(partial.kernel.m2 == d.kernel.m2);
    CHECK(partial.solver.method == Method::a_l1);
}

TEST_CASE("malformed documents raise data errors") {
    CHECK_THROWS_AS(config_from_json_string("not json"), DomainError);
    CHECK_THROWS_AS(config_from_json_string(R"({"kernel": {"m1": "many"}})"), DomainError);
    CHECK_THROWS_AS(config_from_json_string(R"({"solver": {"method": "newton"}})"), DomainError);
}

TEST_CASE("save and load through a file") {
    const fs::path p = fs::temp_directory_path() / "relaxinv-test-config.json";
    RunConfig cfg;
    cfg.phantom.preset = "2pks";
    cfg.noise.seed = 1234;
    save_config(p, cfg);
    const RunConfig back = load_config(p);
    CHECK(back.phantom.preset == "2pks");
    CHECK(back.noise.seed == 1234);
    CHECK_THROWS_AS(load_config(fs::temp_directory_path() / "no-such-config.json"), DomainError);
}

TEST_CASE("grid makers follow the kernel geometry") {
    KernelConfig k;
    k.kind = KernelKind::ir_cpmg;
    k.m1 = 16;
    k.m2 = 32;
    k.te = 0.5;
    const TimeGrid t1 = make_t1_grid(k);
    CHECK(t1.size() == 16);
    CHECK(t1.spacing == Spacing::logarithmic);
    const TimeGrid t2 = make_t2_grid(k);
    CHECK(t2.size() == 32);
    CHECK(t2.values[0] == 0.5);

    // a T2-T2 exchange-style acquisition uses echo trains on both axes
    k.kind = KernelKind::cpmg_cpmg;
    const TimeGrid t1cc = make_t1_grid(k);
    CHECK(t1cc.spacing == Spacing::linear);
    CHECK(t1cc.values[1] == 1.0);

    const SeparableOperator op = make_operator(k);
    CHECK(op.rows() == 16 * 32);
    CHECK(op.cols() == k.n1 * k.n2);
}

TEST_CASE("preset resolution fixes the map size") {
    KernelConfig k;
    PhantomConfig ph;
    ph.preset = "3pks";
    const auto peaks = resolve_phantom(ph, k);
    CHECK(peaks.size() == 3);
    CHECK(k.n1 == 100);
    CHECK(k.n2 == 100);

    PhantomConfig empty;
    CHECK_THROWS_AS(resolve_phantom(empty, k), DomainError);

    PhantomConfig custom;
    custom.peaks = {PeakSpec{50.0, 5.0, 1.0, 0.2, 0.2}};
    KernelConfig k2;
    k2.n1 = 24;
    const auto own = resolve_phantom(custom, k2);
    CHECK(own.size() == 1);
    CHECK(k2.n1 == 24);  // custom peaks leave the grid untouched
}

TEST_CASE("lambda form names round trip") {
    CHECK(lambda_form_from_name(lambda_form_name(LambdaForm::local_maps)) ==
          LambdaForm::local_maps);
    CHECK(lambda_form_from_name(lambda_form_name(LambdaForm::exact)) == LambdaForm::exact);
    CHECK_THROWS_AS(lambda_form_from_name("fancy"), DomainError);
}

// relaxcli: simulate synthetic T1-T2 measurements, invert them, and export
// plot-ready tables. Exit codes: 0 ok, 2 usage, 3 bad data, 4 numerical
// failure.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaxinv/config.hpp"
#include "relaxinv/errors.hpp"
#include "relaxinv/formats.hpp"
#include "relaxinv/metrics.hpp"
#include "relaxinv/phantom.hpp"
#include "relaxinv/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relaxinv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::string index_name(const char* stem, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu.%s", stem, i, ext);
    return buf;
}

// Runs work(0..n-1) on a small pool; rethrows the first captured exception.
void run_pool(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    std::vector<std::exception_ptr> errors(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                work(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        work(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + path.string());
    out << text;
}

json load_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

// --- flag plumbing -------------------------------------------------------

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::string preset;
    std::vector<std::vector<double>> peak_tuples;
    double delta = 0.0;
    std::uint64_t seed = 0;
    int realizations = 0;
    std::string kind;
    Eigen::Index m1 = 0, m2 = 0, n1 = 0, n2 = 0;
    double te = 0.0, t1_min = 0.0, t1_max = 0.0;
    double T1_min = 0.0, T1_max = 0.0, T2_min = 0.0, T2_max = 0.0;
    std::string method;
    double alpha_fixed = 0.0;
    double tau_outer = 0.0, tau_inner = 0.0;
    int max_outer = 0, max_inner = 0, gp_iters = 0;
    double beta0 = 0.0, beta0_rel = 0.0, beta_p = 0.0, beta_c = 0.0, rho = 0.0;
    double lambda_cap_rel = 0.0;
    int radius = 0;
    std::string lambda_form;
    std::vector<std::string> signals;
    std::string run_dir;
    std::vector<std::string> report_runs;
    std::string truth_path;
    int jobs = 0;
};

void add_kernel_flags(CLI::App* cmd, Flags& fl) {
    cmd->add_option("--kind", fl.kind, "kernel pair: ir-cpmg or cpmg-cpmg");
    cmd->add_option("--m1", fl.m1, "number of t1 samples");
    cmd->add_option("--m2", fl.m2, "number of t2 echoes");
    cmd->add_option("--n1", fl.n1, "T1 grid size");
    cmd->add_option("--n2", fl.n2, "T2 grid size");
    cmd->add_option("--te", fl.te, "echo spacing (ms)");
    cmd->add_option("--t1-min", fl.t1_min, "first t1 sample (ms)");
    cmd->add_option("--t1-max", fl.t1_max, "last t1 sample (ms)");
    cmd->add_option("--T1-min", fl.T1_min, "T1 grid lower bound (ms)");
    cmd->add_option("--T1-max", fl.T1_max, "T1 grid upper bound (ms)");
    cmd->add_option("--T2-min", fl.T2_min, "T2 grid lower bound (ms)");
    cmd->add_option("--T2-max", fl.T2_max, "T2 grid upper bound (ms)");
}

void add_solver_flags(CLI::App* cmd, Flags& fl) {
    cmd->add_option("--method", fl.method, "l1ll2, a_l1 or l1_fixed");
    cmd->add_option("--alpha", fl.alpha_fixed, "fixed L1 parameter (l1_fixed)");
    cmd->add_option("--tau-outer", fl.tau_outer, "outer relative-change tolerance");
    cmd->add_option("--tau-inner", fl.tau_inner, "inner relative-objective tolerance");
    cmd->add_option("--max-outer", fl.max_outer, "outer iteration cap");
    cmd->add_option("--max-inner", fl.max_inner, "inner iteration cap");
    cmd->add_option("--gp-iters", fl.gp_iters, "projected-gradient warmup iterations");
    cmd->add_option("--beta0", fl.beta0, "compliance floor (0 = automatic)");
    cmd->add_option("--beta0-rel", fl.beta0_rel, "automatic floor, relative to max curvature");
    cmd->add_option("--beta-p", fl.beta_p, "slope weight in the lambda denominator");
    cmd->add_option("--beta-c", fl.beta_c, "curvature weight in the lambda denominator");
    cmd->add_option("--rho", fl.rho, "denominator guard for the exact lambda form");
    cmd->add_option("--radius", fl.radius, "neighborhood half-width for the local maxima");
    cmd->add_option("--lambda-cap-rel", fl.lambda_cap_rel,
                    "lambda ceiling as a multiple of sigma^2/64 (0 = none)");
    cmd->add_option("--lambda-form", fl.lambda_form, "local-maps or exact");
}

// Flags the user actually passed override the (possibly loaded) config.
void apply_overrides(const CLI::App& cmd, const Flags& fl, RunConfig& cfg) {
    auto given = [&cmd](const std::string& name) {
        const CLI::Option* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--preset")) {
        cfg.phantom.preset = fl.preset;
        cfg.phantom.peaks.clear();
    }
    if (given("--peak")) {
        cfg.phantom.preset.clear();
        cfg.phantom.peaks.clear();
        for (const std::vector<double>& v : fl.peak_tuples) {
            if (v.size() < 2 || v.size() > 5)
                throw CLI::ValidationError("--peak", "expects T1,T2[,amp[,w1[,w2]]]");
            PeakSpec p;
            p.t1_center_ms = v[0];
            p.t2_center_ms = v[1];
            if (v.size() > 2) p.amplitude = v[2];
            if (v.size() > 3) p.width1_decades = v[3];
            if (v.size() > 4) p.width2_decades = v[4];
            cfg.phantom.peaks.push_back(p);
        }
    }
    if (given("--delta")) cfg.noise.delta = fl.delta;
    if (given("--seed")) cfg.noise.seed = fl.seed;
    if (given("--realizations")) cfg.noise.realizations = fl.realizations;
    if (given("--kind")) cfg.kernel.kind = kernel_kind_from_name(fl.kind);
    if (given("--m1")) cfg.kernel.m1 = fl.m1;
    if (given("--m2")) cfg.kernel.m2 = fl.m2;
    if (given("--n1")) cfg.kernel.n1 = fl.n1;
    if (given("--n2")) cfg.kernel.n2 = fl.n2;
    if (given("--te")) cfg.kernel.te = fl.te;
    if (given("--t1-min")) cfg.kernel.t1_min = fl.t1_min;
    if (given("--t1-max")) cfg.kernel.t1_max = fl.t1_max;
    if (given("--T1-min")) cfg.kernel.T1_min = fl.T1_min;
    if (given("--T1-max")) cfg.kernel.T1_max = fl.T1_max;
    if (given("--T2-min")) cfg.kernel.T2_min = fl.T2_min;
    if (given("--T2-max")) cfg.kernel.T2_max = fl.T2_max;
    if (given("--method")) cfg.solver.method = method_from_name(fl.method);
    if (given("--alpha")) cfg.solver.alpha_fixed = fl.alpha_fixed;
    if (given("--tau-outer")) cfg.solver.tau_outer = fl.tau_outer;
    if (given("--tau-inner")) cfg.solver.tau_inner = fl.tau_inner;
    if (given("--max-outer")) cfg.solver.max_outer = fl.max_outer;
    if (given("--max-inner")) cfg.solver.max_inner = fl.max_inner;
    if (given("--gp-iters")) cfg.solver.gp_iters = fl.gp_iters;
    if (given("--beta0")) cfg.solver.upen.beta0 = fl.beta0;
    if (given("--beta0-rel")) cfg.solver.upen.beta0_rel = fl.beta0_rel;
    if (given("--beta-p")) cfg.solver.upen.beta_p = fl.beta_p;
    if (given("--beta-c")) cfg.solver.upen.beta_c = fl.beta_c;
    if (given("--rho")) cfg.solver.upen.rho = fl.rho;
    if (given("--radius")) cfg.solver.upen.neighborhood_radius = fl.radius;
    if (given("--lambda-cap-rel")) cfg.solver.upen.lambda_cap_rel = fl.lambda_cap_rel;
    if (given("--lambda-form")) cfg.solver.upen.form = lambda_form_from_name(fl.lambda_form);
}

RunConfig base_config(const Flags& fl) {
    if (!fl.config_path.empty()) return load_config(fl.config_path);
    return RunConfig{};
}

// --- simulate ------------------------------------------------------------

int cmd_simulate(const CLI::App& cmd, const Flags& fl) {
    RunConfig cfg = base_config(fl);
    apply_overrides(cmd, fl, cfg);
    if (cfg.noise.realizations < 1) throw DomainError("realizations must be >= 1");

    const std::vector<PeakSpec> peaks = resolve_phantom(cfg.phantom, cfg.kernel);
    // explicit grid flags win over the preset's default map size
    if (cmd.get_option_no_throw("--n1")->count() > 0) cfg.kernel.n1 = fl.n1;
    if (cmd.get_option_no_throw("--n2")->count() > 0) cfg.kernel.n2 = fl.n2;
    for (const std::string& w : peak_warnings(peaks)) std::cerr << "warning: " << w << '\n';

    const TimeGrid t1 = make_t1_grid(cfg.kernel);
    const TimeGrid t2 = make_t2_grid(cfg.kernel);
    const RelaxGrid T1 = make_T1_grid(cfg.kernel);
    const RelaxGrid T2 = make_T2_grid(cfg.kernel);
    const SeparableOperator op = make_operator(cfg.kernel.kind, t1, T1, t2, T2);
    const Eigen::VectorXd f_true = make_phantom(peaks, T1, T2);

    const fs::path out(fl.out_dir);
    fs::create_directories(out);
    write_map(out / "truth.map", MapFile{T1, T2, f_true});

    json manifest{{"command", "simulate"},
                  {"signal_format_version", kSignalFormatVersion},
                  {"map_format_version", kMapFormatVersion},
                  {"truth", "truth.map"},
                  {"seeds", json::array()},
                  {"signals", json::array()}};
    for (int r = 0; r < cfg.noise.realizations; ++r) {
        const std::uint64_t seed = cfg.noise.seed + static_cast<std::uint64_t>(r);
        const NoisySignal ns = simulate(op, f_true, cfg.noise.delta, seed);
        const std::string name = index_name("signal", static_cast<std::size_t>(r), "sig");
        write_signal(out / name, SignalFile{cfg.kernel.kind, t1, t2, ns.delta, seed, ns.s});
        manifest["seeds"].push_back(seed);
        manifest["signals"].push_back(name);
    }
    save_config(out / "config.json", cfg);
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << cfg.noise.realizations << " signal(s) to " << out.string() << '\n';
    return kExitOk;
}

// --- invert --------------------------------------------------------------

struct InvertOutcome {
    RealizationMetrics metrics;
    double wall_time_s = 0.0;
};

int cmd_invert(const CLI::App& cmd, const Flags& fl) {
    RunConfig cfg = base_config(fl);
    apply_overrides(cmd, fl, cfg);

    std::vector<fs::path> signal_paths;
    for (const std::string& s : fl.signals) signal_paths.emplace_back(s);
    fs::path truth_path(fl.truth_path);
    if (!fl.run_dir.empty()) {
        const fs::path run(fl.run_dir);
        std::vector<fs::path> found;
        if (fs::is_directory(run))
            for (const fs::directory_entry& e : fs::directory_iterator(run))
                if (e.path().extension() == ".sig") found.push_back(e.path());
        std::sort(found.begin(), found.end());
        signal_paths.insert(signal_paths.end(), found.begin(), found.end());
        if (truth_path.empty() && fs::exists(run / "truth.map")) truth_path = run / "truth.map";
        if (fl.config_path.empty() && fs::exists(run / "config.json")) {
            cfg = load_config(run / "config.json");
            apply_overrides(cmd, fl, cfg);
        }
    }
    if (signal_paths.empty())
        throw CLI::ValidationError("invert", "no input signals (--signal or --run)");

    MapFile truth;
    const bool has_truth = !truth_path.empty();
    if (has_truth) truth = read_map(truth_path);

    const fs::path out(fl.out_dir);
    fs::create_directories(out);

    const std::size_t n = signal_paths.size();
    std::vector<InvertOutcome> outcomes(n);
    run_pool(n, fl.jobs, [&](std::size_t i) {
        const SignalFile sig = read_signal(signal_paths[i]);
        const RelaxGrid T1 = has_truth ? truth.T1 : make_T1_grid(cfg.kernel);
        const RelaxGrid T2 = has_truth ? truth.T2 : make_T2_grid(cfg.kernel);
        const SeparableOperator op = make_operator(sig.kind, sig.t1, T1, sig.t2, T2);

        SolverOptions opts = cfg.solver;
        opts.seed = sig.seed;
        const SolveReport rep = solve(op, sig.s, opts);

        write_map(out / index_name("f", i, "map"), MapFile{T1, T2, rep.f_final});
        write_diagnostics_csv(out / index_name("diagnostics", i, "csv"), rep);
        write_objective_csv(out / index_name("objective", i, "csv"), rep);

        RealizationMetrics m;
        m.method = method_name(opts.method);
        m.seed = sig.seed;
        m.rmsd = rmsd(op, rep.f_final, sig.s);
        m.has_truth = has_truth;
        if (has_truth) m.erel2 = erel2(rep.f_final, truth.f);

        json jrep{{"signal", signal_paths[i].string()},
                  {"method", m.method},
                  {"seed", m.seed},
                  {"converged", rep.converged},
                  {"outer_iters", rep.outer_iters},
                  {"inner_iters_total", rep.inner_iters_total},
                  {"wall_time_s", rep.wall_time_s},
                  {"rmsd", m.rmsd},
                  {"alpha_final", rep.final_penalty.alpha},
                  {"eps2_final", rep.final_penalty.eps2}};
        if (has_truth) jrep["erel2"] = m.erel2;
        write_text(out / index_name("report", i, "json"), jrep.dump(2) + "\n");

        outcomes[i] = InvertOutcome{m, rep.wall_time_s};
    });

    std::vector<RealizationMetrics> rows;
    std::vector<double> erel2s, rmsds, walls;
    json seeds = json::array();
    for (const InvertOutcome& o : outcomes) {
        rows.push_back(o.metrics);
        seeds.push_back(o.metrics.seed);
        if (has_truth) erel2s.push_back(o.metrics.erel2);
        rmsds.push_back(o.metrics.rmsd);
        walls.push_back(o.wall_time_s);
    }
    write_metrics_csv(out / "metrics.csv", rows);
    save_config(out / "config.json", cfg);

    json summary{{"method", method_name(cfg.solver.method)},
                 {"n_realizations", n},
                 {"seeds", seeds},
                 {"rmsd", rmsds},
                 {"wall_time_s", walls},
                 {"rmsd_mean", aggregate(rmsds).mean},
                 {"wall_time_mean", aggregate(walls).mean}};
    if (has_truth) {
        summary["erel2"] = erel2s;
        const Aggregate a = aggregate(erel2s);
        summary["erel2_mean"] = a.mean;
        summary["erel2_stddev"] = a.stddev;
    }
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::cout << "inverted " << n << " signal(s) into " << out.string() << '\n';
    return kExitOk;
}

// --- report --------------------------------------------------------------

int cmd_report(const CLI::App&, const Flags& fl) {
    if (fl.report_runs.empty()) throw CLI::ValidationError("report", "no run directories given");
    const fs::path out(fl.out_dir);
    fs::create_directories(out);

    std::vector<MetricRow> rows;
    for (const std::string& dir : fl.report_runs) {
        const fs::path run(dir);
        const json summary = load_json(run / "summary.json");
        MetricRow row;
        row.method = summary.at("method").get<std::string>();
        row.n_realizations = summary.at("n_realizations").get<int>();
        row.erel2 = summary.value("erel2_mean", 0.0);
        row.rmsd = summary.at("rmsd_mean").get<double>();
        row.wall_time = summary.at("wall_time_mean").get<double>();
        rows.push_back(row);

        const fs::path map_path = run / "f_000.map";
        if (fs::exists(map_path)) {
            const MapFile map = read_map(map_path);
            const std::string label = run.filename().string();
            write_contour_csv(out / ("contour_" + label + ".csv"), map);
            write_projection_csv(out / ("proj_T1_" + label + ".csv"),
                                 out / ("proj_T2_" + label + ".csv"), map);
        }
    }
    write_table1_csv(out / "table1.csv", rows);
    write_table2_csv(out / "table2.csv", rows);
    std::cout << "wrote tables for " << rows.size() << " run(s) to " << out.string() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D relaxation map inversion with locally adapted penalties"};
    app.require_subcommand(1);
    Flags fl;

    CLI::App* sim = app.add_subcommand("simulate", "generate synthetic signals and a truth map");
    sim->add_option("--config", fl.config_path, "run configuration (JSON)");
    sim->add_option("--out", fl.out_dir, "output directory")->required();
    sim->add_option("--preset", fl.preset, "phantom preset: 2pks or 3pks");
    sim->add_option("--peak", fl.peak_tuples, "custom peak T1,T2[,amp[,w1[,w2]]] (repeatable)")
        ->delimiter(',');
    sim->add_option("--delta", fl.delta, "noise norm");
    sim->add_option("--seed", fl.seed, "base seed; realization r uses seed + r");
    sim->add_option("--realizations", fl.realizations, "number of noise realizations");
    add_kernel_flags(sim, fl);

    CLI::App* inv = app.add_subcommand("invert", "reconstruct maps from signal files");
    inv->add_option("--config", fl.config_path, "run configuration (JSON)");
    inv->add_option("--out", fl.out_dir, "output directory")->required();
    inv->add_option("--signal", fl.signals, "signal file (repeatable)");
    inv->add_option("--run", fl.run_dir, "simulate output directory (all *.sig inside)");
    inv->add_option("--truth", fl.truth_path, "ground-truth map for error metrics");
    inv->add_option("--jobs", fl.jobs, "worker threads (default: hardware)");
    add_kernel_flags(inv, fl);
    add_solver_flags(inv, fl);

    CLI::App* rep = app.add_subcommand("report", "aggregate runs into tables and plot data");
    rep->add_option("--run", fl.report_runs, "invert output directory (repeatable)")->required();
    rep->add_option("--out", fl.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(*sim, fl);
        if (inv->parsed()) return cmd_invert(*inv, fl);
        return cmd_report(*rep, fl);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

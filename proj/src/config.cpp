#include "relaxinv/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relaxinv/errors.hpp"
#include "relaxinv/formats.hpp"

namespace relaxinv {

using nlohmann::json;

namespace {

json peaks_to_json(const std::vector<PeakSpec>& peaks) {
    json arr = json::array();
    for (const PeakSpec& p : peaks)
        arr.push_back(json{{"t1_center_ms", p.t1_center_ms},
                           {"t2_center_ms", p.t2_center_ms},
                           {"amplitude", p.amplitude},
                           {"width1_decades", p.width1_decades},
                           {"width2_decades", p.width2_decades}});
    return arr;
}

std::vector<PeakSpec> peaks_from_json(const json& arr) {
    std::vector<PeakSpec> peaks;
    for (const json& j : arr) {
        PeakSpec p;
        p.t1_center_ms = j.at("t1_center_ms").get<double>();
        p.t2_center_ms = j.at("t2_center_ms").get<double>();
        p.amplitude = j.at("amplitude").get<double>();
        p.width1_decades = j.at("width1_decades").get<double>();
        p.width2_decades = j.at("width2_decades").get<double>();
        peaks.push_back(p);
    }
    return peaks;
}

json to_json(const RunConfig& cfg) {
    const KernelConfig& k = cfg.kernel;
    const SolverOptions& s = cfg.solver;
    const UpenConfig& u = s.upen;
    return json{
        {"kernel",
         {{"kind", kernel_kind_name(k.kind)},
          {"m1", k.m1},
          {"m2", k.m2},
          {"t1_min", k.t1_min},
          {"t1_max", k.t1_max},
          {"te", k.te},
          {"n1", k.n1},
          {"n2", k.n2},
          {"T1_min", k.T1_min},
          {"T1_max", k.T1_max},
          {"T2_min", k.T2_min},
          {"T2_max", k.T2_max}}},
        {"phantom", {{"preset", cfg.phantom.preset}, {"peaks", peaks_to_json(cfg.phantom.peaks)}}},
        {"noise",
         {{"delta", cfg.noise.delta},
          {"seed", cfg.noise.seed},
          {"realizations", cfg.noise.realizations}}},
        {"solver",
         {{"method", method_name(s.method)},
          {"tau_outer", s.tau_outer},
          {"tau_inner", s.tau_inner},
          {"max_outer", s.max_outer},
          {"max_inner", s.max_inner},
          {"gp_iters", s.gp_iters},
          {"alpha_fixed", s.alpha_fixed},
          {"seed", s.seed},
          {"upen",
           {{"beta0", u.beta0},
            {"beta0_rel", u.beta0_rel},
            {"beta_p", u.beta_p},
            {"beta_c", u.beta_c},
            {"rho", u.rho},
            {"lambda_cap_rel", u.lambda_cap_rel},
            {"neighborhood_radius", u.neighborhood_radius},
            {"form", lambda_form_name(u.form)}}}}}};
}

RunConfig from_json(const json& j) {
    RunConfig cfg;  // missing keys and sections keep their defaults
    static const json empty = json::object();
    const json& k = j.contains("kernel") ? j.at("kernel") : empty;
    if (k.contains("kind")) cfg.kernel.kind = kernel_kind_from_name(k.at("kind").get<std::string>());
    cfg.kernel.m1 = k.value("m1", cfg.kernel.m1);
    cfg.kernel.m2 = k.value("m2", cfg.kernel.m2);
    cfg.kernel.t1_min = k.value("t1_min", cfg.kernel.t1_min);
    cfg.kernel.t1_max = k.value("t1_max", cfg.kernel.t1_max);
    cfg.kernel.te = k.value("te", cfg.kernel.te);
    cfg.kernel.n1 = k.value("n1", cfg.kernel.n1);
    cfg.kernel.n2 = k.value("n2", cfg.kernel.n2);
    cfg.kernel.T1_min = k.value("T1_min", cfg.kernel.T1_min);
    cfg.kernel.T1_max = k.value("T1_max", cfg.kernel.T1_max);
    cfg.kernel.T2_min = k.value("T2_min", cfg.kernel.T2_min);
    cfg.kernel.T2_max = k.value("T2_max", cfg.kernel.T2_max);

    const json& ph = j.contains("phantom") ? j.at("phantom") : empty;
    cfg.phantom.preset = ph.value("preset", cfg.phantom.preset);
    if (ph.contains("peaks")) cfg.phantom.peaks = peaks_from_json(ph.at("peaks"));

    const json& nz = j.contains("noise") ? j.at("noise") : empty;
    cfg.noise.delta = nz.value("delta", cfg.noise.delta);
    cfg.noise.seed = nz.value("seed", cfg.noise.seed);
    cfg.noise.realizations = nz.value("realizations", cfg.noise.realizations);

    const json& s = j.contains("solver") ? j.at("solver") : empty;
    if (s.contains("method")) cfg.solver.method = method_from_name(s.at("method").get<std::string>());
    cfg.solver.tau_outer = s.value("tau_outer", cfg.solver.tau_outer);
    cfg.solver.tau_inner = s.value("tau_inner", cfg.solver.tau_inner);
    cfg.solver.max_outer = s.value("max_outer", cfg.solver.max_outer);
    cfg.solver.max_inner = s.value("max_inner", cfg.solver.max_inner);
    cfg.solver.gp_iters = s.value("gp_iters", cfg.solver.gp_iters);
    cfg.solver.alpha_fixed = s.value("alpha_fixed", cfg.solver.alpha_fixed);
    cfg.solver.seed = s.value("seed", cfg.solver.seed);

    UpenConfig& u = cfg.solver.upen;
    if (s.contains("upen")) {
        const json& uj = s.at("upen");
        u.beta0 = uj.value("beta0", u.beta0);
        u.beta0_rel = uj.value("beta0_rel", u.beta0_rel);
        u.beta_p = uj.value("beta_p", u.beta_p);
        u.beta_c = uj.value("beta_c", u.beta_c);
        u.rho = uj.value("rho", u.rho);
        u.lambda_cap_rel = uj.value("lambda_cap_rel", u.lambda_cap_rel);
        u.neighborhood_radius = uj.value("neighborhood_radius", u.neighborhood_radius);
        if (uj.contains("form")) u.form = lambda_form_from_name(uj.at("form").get<std::string>());
    }
    return cfg;
}

}  // namespace

TimeGrid make_t1_grid(const KernelConfig& cfg) {
    if (cfg.kind == KernelKind::cpmg_cpmg) return echo_time_grid(cfg.te, cfg.m1);
    return log_time_grid(cfg.t1_min, cfg.t1_max, cfg.m1);
}

TimeGrid make_t2_grid(const KernelConfig& cfg) { return echo_time_grid(cfg.te, cfg.m2); }

RelaxGrid make_T1_grid(const KernelConfig& cfg) {
    return log_relax_grid(cfg.T1_min, cfg.T1_max, cfg.n1);
}

RelaxGrid make_T2_grid(const KernelConfig& cfg) {
    return log_relax_grid(cfg.T2_min, cfg.T2_max, cfg.n2);
}

SeparableOperator make_operator(const KernelConfig& cfg) {
    return make_operator(cfg.kind, make_t1_grid(cfg), make_T1_grid(cfg), make_t2_grid(cfg),
                         make_T2_grid(cfg));
}

std::vector<PeakSpec> resolve_phantom(const PhantomConfig& phantom, KernelConfig& kernel) {
    if (phantom.preset.empty()) {
        if (phantom.peaks.empty()) throw DomainError("phantom: no preset and no peaks given");
        return phantom.peaks;
    }
    const Eigen::Index n = preset_grid_size(phantom.preset);
    kernel.n1 = n;
    kernel.n2 = n;
    return preset_peaks(phantom.preset);
}

std::string to_json_string(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

RunConfig config_from_json_string(const std::string& text) {
    try {
        return from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write config: " + path.string());
    out << to_json_string(cfg);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_string(ss.str());
}

std::string lambda_form_name(LambdaForm f) {
    return f == LambdaForm::local_maps ? "local-maps" : "exact";
}

LambdaForm lambda_form_from_name(const std::string& name) {
    if (name == "local-maps") return LambdaForm::local_maps;
    if (name == "exact") return LambdaForm::exact;
    throw DomainError("unknown lambda form: " + name);
}

}  // namespace relaxinv

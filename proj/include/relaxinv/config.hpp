#ifndef RELAXINV_CONFIG_HPP
#define RELAXINV_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relaxinv/kernels.hpp"
#include "relaxinv/phantom.hpp"
#include "relaxinv/solver.hpp"

namespace relaxinv {

// Kernel discretization: time grids of the acquisition and relaxation grids
// of the unknown map.
struct KernelConfig {
    KernelKind kind = KernelKind::ir_cpmg;
    Eigen::Index m1 = 128;
    Eigen::Index m2 = 2048;
    double t1_min = 0.5;    // first axis, log-spaced (ms)
    double t1_max = 5000.0;
    double te = 0.5;        // second axis, echo spacing (ms)
    Eigen::Index n1 = 80;
    Eigen::Index n2 = 80;
    double T1_min = 0.1;
    double T1_max = 10000.0;
    double T2_min = 0.1;
    double T2_max = 10000.0;
};

struct PhantomConfig {
    std::string preset;           // "2pks", "3pks" or empty for custom peaks
    std::vector<PeakSpec> peaks;  // used when preset is empty
};

struct NoiseConfig {
    double delta = 1e-2;
    std::uint64_t seed = 1;
    int realizations = 1;  // seeds seed, seed+1, ...
};

struct RunConfig {
    KernelConfig kernel;
    PhantomConfig phantom;
    NoiseConfig noise;
    SolverOptions solver;
};

TimeGrid make_t1_grid(const KernelConfig& cfg);
TimeGrid make_t2_grid(const KernelConfig& cfg);
RelaxGrid make_T1_grid(const KernelConfig& cfg);
RelaxGrid make_T2_grid(const KernelConfig& cfg);
SeparableOperator make_operator(const KernelConfig& cfg);

// Applies a preset to the kernel config (map size) and returns its peaks.
std::vector<PeakSpec> resolve_phantom(const PhantomConfig& phantom, KernelConfig& kernel);

// Lossless JSON round trip.
std::string to_json_string(const RunConfig& cfg);
RunConfig config_from_json_string(const std::string& text);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

std::string lambda_form_name(LambdaForm f);
LambdaForm lambda_form_from_name(const std::string& name);

}  // namespace relaxinv

#endif

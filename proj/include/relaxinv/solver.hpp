#ifndef RELAXINV_SOLVER_HPP
#define RELAXINV_SOLVER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "relaxinv/fista.hpp"
#include "relaxinv/kernels.hpp"
#include "relaxinv/upen.hpp"

namespace relaxinv {

// l1ll2:    adaptive local L2 parameters plus adaptive L1 parameter;
// a_l1:     ablation with lambda = 0, alpha still adapted per iteration;
// l1_fixed: single user-supplied alpha, no adaptation.
enum class Method { l1ll2, a_l1, l1_fixed };

struct SolverOptions {
    Method method = Method::l1ll2;
    double tau_outer = 1e-3;
    double tau_inner = 1e-7;
    int max_outer = 50;
    int max_inner = 5000;
    int gp_iters = 10;
    UpenConfig upen;
    double alpha_fixed = 0.0;  // used by l1_fixed only
    std::uint64_t seed = 0;    // recorded; the solver itself is deterministic
};

// Per-pixel lambda summary logged once per outer iteration (post-update).
struct PenaltySnapshot {
    int k = 0;
    double eps2 = 0.0;
    double alpha = 0.0;
    double xi = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double lambda_mean = 0.0;
    int inner_iters = 0;
};

struct SolveReport {
    Eigen::VectorXd f_final;
    Eigen::Index n1 = 0, n2 = 0;
    int outer_iters = 0;
    long inner_iters_total = 0;
    double wall_time_s = 0.0;
    bool converged = false;  // outer criterion met before max_outer
    std::vector<double> eps2_history;           // per outer iterate, final included
    std::vector<double> objective_history;      // inner objectives, concatenated
    std::vector<int> inner_iters_per_outer;
    std::vector<PenaltySnapshot> snapshots;     // last entry evaluated at f_final
    PenaltyState final_penalty;                 // full parameters at f_final
};

// Projected-gradient start for min_{f >= 0} ||K f - s||^2 from f = 0,
// step 1/(sigma1_k1 sigma1_k2)^2 on the half gradient K^T (K f - s); the
// residual is non-increasing across iterations.
Eigen::VectorXd gp_init(const SeparableOperator& op, const Eigen::VectorXd& s, int iters);

// Outer splitting iteration: recompute eps2, lambda, alpha, xi from the
// current iterate, then one warm-started FISTA solve; stop when
// ||f_{k+1} - f_k|| <= tau_outer ||f_k|| or at max_outer.
SolveReport solve(const SeparableOperator& op, const Eigen::VectorXd& s,
                  const SolverOptions& opts);

std::string method_name(Method m);
Method method_from_name(const std::string& name);

}  // namespace relaxinv

#endif

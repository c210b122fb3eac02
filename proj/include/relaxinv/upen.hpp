#ifndef RELAXINV_UPEN_HPP
#define RELAXINV_UPEN_HPP

#include <Eigen/Core>

#include "relaxinv/kernels.hpp"
#include "relaxinv/laplacian.hpp"

namespace relaxinv {

// Which per-pixel L2 parameter formula the outer iteration uses.
//   local_maps: lambda_i = eps2 / ((N+1)(beta0 + beta_p max p^2 + beta_c max c^2))
//               with the maxima taken over the pixel neighborhood;
//   exact:      lambda_i = eps2 / ((N+1)(L f)_i^2 + rho),
//               the uniform-penalty form used by the balance diagnostic.
enum class LambdaForm { local_maps, exact };

struct UpenConfig {
    double beta0 = 0.0;      // absolute compliance floor; 0 selects the auto floor
    double beta0_rel = 1e-6; // auto floor = beta0_rel * max_i c_i^2, per iteration
    double beta_p = 1.0;
    double beta_c = 1.0;
    double rho = 1e-12;      // threshold of the exact form
    int neighborhood_radius = 1;
    LambdaForm form = LambdaForm::local_maps;
    // Upper bound on lambda as a multiple of (sigma1_k1 sigma1_k2)^2 / 64, so
    // the smoothing term never exceeds lambda_cap_rel times the data term in
    // the stepsize: xi <= (1 + lambda_cap_rel) sigma^2. Early iterates are
    // nearly flat, and the uncapped ratio eps2 / maps^2 freezes the inner
    // solver. 0 disables the cap.
    double lambda_cap_rel = 1.0;
};

// Penalty parameters at one outer iterate.
struct PenaltyState {
    Eigen::VectorXd lambda;
    double alpha = 0.0;
    double xi = 0.0;
    double eps2 = 0.0;  // ||K f - s||^2
};

double residual_eps2(const SeparableOperator& op, const Eigen::VectorXd& f,
                     const Eigen::VectorXd& s);

// Resolves the compliance floor for this iteration (absolute or auto-scaled).
double resolve_beta0(const UpenConfig& cfg, const Eigen::VectorXd& c);

// Local-maps form. Throws DomainError if a denominator vanishes
// (beta0 = 0 with locally flat maps).
Eigen::VectorXd update_lambdas(double eps2, const UpenConfig& cfg, const LocalMaps& maps,
                               Eigen::Index n1, Eigen::Index n2, double beta0);

// Exact uniform-penalty form over the curvature map c = L f.
Eigen::VectorXd update_lambdas_exact(double eps2, const Eigen::VectorXd& c, double rho);

// alpha = eps2 / ((N+1) max(||f||_1, l1_floor)); the floor keeps alpha finite
// at the zero iterate.
double update_alpha(const Eigen::VectorXd& f, double eps2, double l1_floor);

// xi = (sigma1_k1 * sigma1_k2)^2 + 64 max_i |lambda_i|, an upper bound on
// lambda_max(K^T K + L^T Lambda L). The gradient of Psi1 carries a factor 2,
// so solvers step with 2*xi.
double stepsize_xi(const SingularPair& sv, const Eigen::VectorXd& lambda);

}  // namespace relaxinv

#endif

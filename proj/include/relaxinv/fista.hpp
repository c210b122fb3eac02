#ifndef RELAXINV_FISTA_HPP
#define RELAXINV_FISTA_HPP

#include <Eigen/Core>
#include <vector>

#include "relaxinv/kernels.hpp"
#include "relaxinv/laplacian.hpp"

namespace relaxinv {

// Smooth part of the composite objective,
//   Psi1(f) = ||K f - s||^2 + sum_i lambda_i (L f)_i^2,
// i.e. the squared norm of the stacked system (K; sqrt(Lambda) L) f - (s; 0).
// Holds references only; the caller keeps the operands alive.
struct SmoothProblem {
    const SeparableOperator& op;
    const Eigen::VectorXd& s;
    const Eigen::VectorXd& lambda;  // length N, >= 0 elementwise
    LaplacianOp lap;
};

double psi1(const SmoothProblem& p, const Eigen::VectorXd& f);

// grad Psi1(y) = 2 K^T (K y - s) + 2 L^T (Lambda L y), matrix-free.
Eigen::VectorXd grad_psi1(const SmoothProblem& p, const Eigen::VectorXd& y);

// Normal-equation form of the data term. K enters the iteration only through
// K^T K and K^T s, and K^T K f = vec((K1^T K1) F (K2^T K2)^T) touches only the
// small N1 x N1 and N2 x N2 factors, so every inner iteration costs O(N^1.5)
// instead of O(M N) regardless of how many echoes were acquired.
struct NormalForm {
    Eigen::MatrixXd a1;  // K1^T K1
    Eigen::MatrixXd a2;  // K2^T K2
    Eigen::VectorXd b;   // K^T s
    double s2 = 0.0;     // ||s||^2
    Eigen::Index n1 = 0, n2 = 0;
};

NormalForm make_normal_form(const SeparableOperator& op, const Eigen::VectorXd& s);

// (K^T K) f through the factored form.
Eigen::VectorXd apply_normal(const NormalForm& nf, const Eigen::VectorXd& f);

// ||K f - s||^2 = f.(K^T K f) - 2 f.(K^T s) + ||s||^2, clamped at zero.
double data_term(const NormalForm& nf, const Eigen::VectorXd& f);

// Prox of theta * ||.||_1: elementwise sign(z) * max(|z| - theta, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double theta);

struct FistaState {
    Eigen::VectorXd f_prev;
    Eigen::VectorXd f_curr;
    Eigen::VectorXd y;
    double t = 1.0;  // momentum scalar, strictly increasing
    int j = 0;
    std::vector<double> objective_history;  // Psi1 + Psi2, entry 0 at f0
};

struct FistaResult {
    Eigen::VectorXd f;
    std::vector<double> objective_history;
    int iters = 0;
    bool converged = false;
};

// Accelerated proximal-gradient loop for fixed alpha, lambda:
//   z = y - (1/xi) grad Psi1(y);  f = soft_threshold(z, alpha/xi);
//   t_{j+1} = (1 + sqrt(1 + 4 t_j^2)) / 2;
//   y = f + ((t_j - 1)/t_{j+1}) (f_j - f_{j-1}).
// Stops when the relative objective decrease falls below tol or at max_iters.
// Returns the best-objective iterate, so the result never degrades f0.
// Requires xi >= Lipschitz constant of grad Psi1 (the caller guarantees it).
FistaResult fista_step_loop(const NormalForm& nf, const Eigen::VectorXd& lambda,
                            const LaplacianOp& lap, double alpha, double xi,
                            const Eigen::VectorXd& f0, double tol, int max_iters);

// Convenience overload; builds the normal form from the full operator.
FistaResult fista_step_loop(const SmoothProblem& p, double alpha, double xi,
                            const Eigen::VectorXd& f0, double tol, int max_iters);

}  // namespace relaxinv

#endif

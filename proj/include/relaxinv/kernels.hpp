#ifndef RELAXINV_KERNELS_HPP
#define RELAXINV_KERNELS_HPP

#include <Eigen/Core>

#include "relaxinv/grids.hpp"

namespace relaxinv {

enum class KernelKind { ir_cpmg, cpmg_cpmg };

// Separable kernel K = K2 (x) K1, kept as the two small dense factors.
// The Kronecker product itself is never materialized.
//
// Layout convention: the map F is N1 x N2 with rows indexing the K1 axis
// (T1) and columns the K2 axis (T2); f = vec(F) columnwise, so that
// K f = vec(K1 * F * K2^T).
struct SeparableOperator {
    Eigen::MatrixXd k1;  // M1 x N1
    Eigen::MatrixXd k2;  // M2 x N2
    KernelKind kind = KernelKind::ir_cpmg;

    Eigen::Index m1() const { return k1.rows(); }
    Eigen::Index m2() const { return k2.rows(); }
    Eigen::Index n1() const { return k1.cols(); }
    Eigen::Index n2() const { return k2.cols(); }
    Eigen::Index rows() const { return m1() * m2(); }
    Eigen::Index cols() const { return n1() * n2(); }
};

// Largest singular value of each kernel factor.
struct SingularPair {
    double sigma1_k1 = 0.0;
    double sigma1_k2 = 0.0;

    // lambda_max(K^T K) = (sigma1_k1 * sigma1_k2)^2.
    double product_sq() const { return (sigma1_k1 * sigma1_k2) * (sigma1_k1 * sigma1_k2); }
};

// Inversion-recovery kernel, entry (m,n) = 1 - 2 exp(-t_m / T_n).
Eigen::MatrixXd build_ir_kernel(const TimeGrid& t, const RelaxGrid& T);

// CPMG decay kernel, entry (m,n) = exp(-t_m / T_n).
Eigen::MatrixXd build_cpmg_kernel(const TimeGrid& t, const RelaxGrid& T);

SeparableOperator make_operator(KernelKind kind, const TimeGrid& t1, const RelaxGrid& T1,
                                const TimeGrid& t2, const RelaxGrid& T2);

// K f = vec(K1 * F * K2^T); f has length N1*N2.
Eigen::VectorXd apply_forward(const SeparableOperator& op, const Eigen::VectorXd& f);

// K^T s = vec(K1^T * S * K2); s has length M1*M2.
Eigen::VectorXd apply_adjoint(const SeparableOperator& op, const Eigen::VectorXd& s);

// Exact top singular values via SVD of the small factors.
SingularPair max_singular_values(const SeparableOperator& op);

}  // namespace relaxinv

#endif

#include "relaxinv/kernels.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

namespace {

void check_grids(const TimeGrid& t, const RelaxGrid& T) {
    if (t.size() == 0 || T.size() == 0) throw DomainError("kernel: empty grid");
    if (t.values.minCoeff() <= 0.0 || T.values.minCoeff() <= 0.0)
        throw DomainError("kernel: non-positive grid entry");
}

}  // namespace

Eigen::MatrixXd build_ir_kernel(const TimeGrid& t, const RelaxGrid& T) {
    check_grids(t, T);
    Eigen::MatrixXd k(t.size(), T.size());
    for (Eigen::Index n = 0; n < T.size(); ++n)
        for (Eigen::Index m = 0; m < t.size(); ++m)
            k(m, n) = 1.0 - 2.0 * std::exp(-t.values[m] / T.values[n]);
    return k;
}

Eigen::MatrixXd build_cpmg_kernel(const TimeGrid& t, const RelaxGrid& T) {
    check_grids(t, T);
    Eigen::MatrixXd k(t.size(), T.size());
    for (Eigen::Index n = 0; n < T.size(); ++n)
        for (Eigen::Index m = 0; m < t.size(); ++m)
            k(m, n) = std::exp(-t.values[m] / T.values[n]);
    return k;
}

SeparableOperator make_operator(KernelKind kind, const TimeGrid& t1, const RelaxGrid& T1,
                                const TimeGrid& t2, const RelaxGrid& T2) {
    SeparableOperator op;
    op.kind = kind;
    op.k1 = (kind == KernelKind::ir_cpmg) ? build_ir_kernel(t1, T1) : build_cpmg_kernel(t1, T1);
    op.k2 = build_cpmg_kernel(t2, T2);
    return op;
}

Eigen::VectorXd apply_forward(const SeparableOperator& op, const Eigen::VectorXd& f) {
    if (f.size() != op.cols())
        throw ShapeError("apply_forward: f has length " + std::to_string(f.size()) +
                         ", expected " + std::to_string(op.cols()));
    Eigen::Map<const Eigen::MatrixXd> F(f.data(), op.n1(), op.n2());
    Eigen::VectorXd out(op.rows());
    Eigen::Map<Eigen::MatrixXd> S(out.data(), op.m1(), op.m2());
    S.noalias() = (op.k1 * F) * op.k2.transpose();
    return out;
}

Eigen::VectorXd apply_adjoint(const SeparableOperator& op, const Eigen::VectorXd& s) {
    if (s.size() != op.rows())
        throw ShapeError("apply_adjoint: s has length " + std::to_string(s.size()) +
                         ", expected " + std::to_string(op.rows()));
    Eigen::Map<const Eigen::MatrixXd> S(s.data(), op.m1(), op.m2());
    Eigen::VectorXd out(op.cols());
    Eigen::Map<Eigen::MatrixXd> F(out.data(), op.n1(), op.n2());
    F.noalias() = (op.k1.transpose() * S) * op.k2;
    return out;
}

SingularPair max_singular_values(const SeparableOperator& op) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd1(op.k1);
    Eigen::BDCSVD<Eigen::MatrixXd> svd2(op.k2);
    if (svd1.info() != Eigen::Success || svd2.info() != Eigen::Success)
        throw NumericalError("max_singular_values: SVD failed");
    return SingularPair{svd1.singularValues()(0), svd2.singularValues()(0)};
}

}  // namespace relaxinv

#include "relaxinv/fista.hpp"

#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

namespace {

void check_problem(const SmoothProblem& p, const Eigen::VectorXd& f) {
    if (f.size() != p.op.cols()) throw ShapeError("fista: f does not match operator");
    if (p.s.size() != p.op.rows()) throw ShapeError("fista: s does not match operator");
    if (p.lambda.size() != p.op.cols()) throw ShapeError("fista: lambda does not match operator");
    if (p.lap.size() != p.op.cols()) throw ShapeError("fista: laplacian shape mismatch");
}

}  // namespace

double psi1(const SmoothProblem& p, const Eigen::VectorXd& f) {
    check_problem(p, f);
    double v = (apply_forward(p.op, f) - p.s).squaredNorm();
    if (p.lambda.maxCoeff() > 0.0) {
        const Eigen::VectorXd lf = apply_laplacian(p.lap, f);
        v += lf.cwiseProduct(lf).dot(p.lambda);
    }
    return v;
}

Eigen::VectorXd grad_psi1(const SmoothProblem& p, const Eigen::VectorXd& y) {
    check_problem(p, y);
    Eigen::VectorXd g = 2.0 * apply_adjoint(p.op, apply_forward(p.op, y) - p.s);
    if (p.lambda.maxCoeff() > 0.0) {
        // L is symmetric, so L^T (Lambda L y) = L (lambda .* L y)
        g += 2.0 * apply_laplacian(p.lap, p.lambda.cwiseProduct(apply_laplacian(p.lap, y)));
    }
    return g;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double theta) {
    if (theta < 0.0) throw DomainError("soft_threshold: theta must be >= 0");
    return z.unaryExpr([theta](double v) {
        const double m = std::abs(v) - theta;
        return m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
    });
}

NormalForm make_normal_form(const SeparableOperator& op, const Eigen::VectorXd& s) {
    if (s.size() != op.rows()) throw ShapeError("normal form: s does not match operator");
    NormalForm nf;
    nf.a1.noalias() = op.k1.transpose() * op.k1;
    nf.a2.noalias() = op.k2.transpose() * op.k2;
    nf.b = apply_adjoint(op, s);
    nf.s2 = s.squaredNorm();
    nf.n1 = op.n1();
    nf.n2 = op.n2();
    return nf;
}

Eigen::VectorXd apply_normal(const NormalForm& nf, const Eigen::VectorXd& f) {
    if (f.size() != nf.n1 * nf.n2) throw ShapeError("normal form: f has wrong length");
    Eigen::VectorXd out(f.size());
    Eigen::Map<const Eigen::MatrixXd> F(f.data(), nf.n1, nf.n2);
    Eigen::Map<Eigen::MatrixXd> O(out.data(), nf.n1, nf.n2);
    O.noalias() = (nf.a1 * F) * nf.a2;  // a2 symmetric
    return out;
}

double data_term(const NormalForm& nf, const Eigen::VectorXd& f) {
    const double v = f.dot(apply_normal(nf, f)) - 2.0 * f.dot(nf.b) + nf.s2;
    return v > 0.0 ? v : 0.0;
}

FistaResult fista_step_loop(const NormalForm& nf, const Eigen::VectorXd& lambda,
                            const LaplacianOp& lap, double alpha, double xi,
                            const Eigen::VectorXd& f0, double tol, int max_iters) {
    if (!(xi > 0.0)) throw DomainError("fista: stepsize xi must be > 0");
    if (alpha < 0.0) throw DomainError("fista: alpha must be >= 0");
    if (f0.size() != nf.n1 * nf.n2) throw ShapeError("fista: f0 has wrong length");
    if (lambda.size() != f0.size()) throw ShapeError("fista: lambda has wrong length");
    if (lap.size() != f0.size()) throw ShapeError("fista: laplacian shape mismatch");

    const bool smooth_term = lambda.size() > 0 && lambda.maxCoeff() > 0.0;
    auto objective = [&](const Eigen::VectorXd& f) {
        double v = data_term(nf, f) + alpha * f.lpNorm<1>();
        if (smooth_term) {
            const Eigen::VectorXd lf = apply_laplacian(lap, f);
            v += lf.cwiseProduct(lf).dot(lambda);
        }
        return v;
    };

    FistaState st;
    st.f_prev = f0;
    st.f_curr = f0;
    st.y = f0;
    st.t = 1.0;

    double obj = objective(f0);
    st.objective_history.push_back(obj);

    Eigen::VectorXd best_f = f0;
    double best_obj = obj;
    bool converged = false;
    const double theta = alpha / xi;

    while (st.j < max_iters) {
        ++st.j;
        Eigen::VectorXd g = 2.0 * (apply_normal(nf, st.y) - nf.b);
        if (smooth_term)
            g += 2.0 * apply_laplacian(lap, lambda.cwiseProduct(apply_laplacian(lap, st.y)));
        st.f_curr = soft_threshold(st.y - g / xi, theta);

        const double obj_new = objective(st.f_curr);
        if (!std::isfinite(obj_new))
            throw NumericalError("fista: objective diverged at inner iteration " +
                                 std::to_string(st.j));
        st.objective_history.push_back(obj_new);
        if (obj_new < best_obj) {
            best_obj = obj_new;
            best_f = st.f_curr;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.t * st.t));
        st.y = st.f_curr + ((st.t - 1.0) / t_next) * (st.f_curr - st.f_prev);
        st.f_prev = st.f_curr;
        st.t = t_next;

        if (std::abs(obj_new - obj) <= tol * std::max(std::abs(obj), 1e-300)) {
            converged = true;
            break;
        }
        obj = obj_new;
    }

    return FistaResult{std::move(best_f), std::move(st.objective_history), st.j, converged};
}

FistaResult fista_step_loop(const SmoothProblem& p, double alpha, double xi,
                            const Eigen::VectorXd& f0, double tol, int max_iters) {
    check_problem(p, f0);
    return fista_step_loop(make_normal_form(p.op, p.s), p.lambda, p.lap, alpha, xi, f0, tol,
                           max_iters);
}

}  // namespace relaxinv

#include "relaxinv/upen.hpp"

#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

double residual_eps2(const SeparableOperator& op, const Eigen::VectorXd& f,
                     const Eigen::VectorXd& s) {
    if (s.size() != op.rows()) throw ShapeError("residual_eps2: s does not match operator");
    return (apply_forward(op, f) - s).squaredNorm();
}

double resolve_beta0(const UpenConfig& cfg, const Eigen::VectorXd& c) {
    if (cfg.beta0 > 0.0) return cfg.beta0;
    return cfg.beta0_rel * c.cwiseAbs2().maxCoeff();
}

Eigen::VectorXd update_lambdas(double eps2, const UpenConfig& cfg, const LocalMaps& maps,
                               Eigen::Index n1, Eigen::Index n2, double beta0) {
    if (eps2 < 0.0) throw DomainError("update_lambdas: eps2 must be >= 0");
    const Eigen::Index n = n1 * n2;
    if (maps.c.size() != n || maps.p.size() != n)
        throw ShapeError("update_lambdas: local maps do not match grid shape");
    const Eigen::VectorXd pw = neighborhood_max_sq(maps.p, n1, n2, cfg.neighborhood_radius);
    const Eigen::VectorXd cw = neighborhood_max_sq(maps.c, n1, n2, cfg.neighborhood_radius);
    Eigen::VectorXd lambda(n);
    const double scale = static_cast<double>(n) + 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double den = beta0 + cfg.beta_p * pw[i] + cfg.beta_c * cw[i];
        if (den <= 0.0)
            throw DomainError("update_lambdas: zero denominator (beta0 = 0 with flat maps)");
        lambda[i] = eps2 / (scale * den);
    }
    return lambda;
}

Eigen::VectorXd update_lambdas_exact(double eps2, const Eigen::VectorXd& c, double rho) {
    if (eps2 < 0.0) throw DomainError("update_lambdas_exact: eps2 must be >= 0");
    if (!(rho > 0.0)) throw DomainError("update_lambdas_exact: rho must be > 0");
    const double scale = static_cast<double>(c.size()) + 1.0;
    return c.unaryExpr([eps2, scale, rho](double ci) { return eps2 / (scale * ci * ci + rho); });
}

double update_alpha(const Eigen::VectorXd& f, double eps2, double l1_floor) {
    if (eps2 < 0.0) throw DomainError("update_alpha: eps2 must be >= 0");
    const double l1 = std::max(f.lpNorm<1>(), l1_floor);
    return eps2 / ((static_cast<double>(f.size()) + 1.0) * l1);
}

double stepsize_xi(const SingularPair& sv, const Eigen::VectorXd& lambda) {
    const double lmax = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
    return sv.product_sq() + 64.0 * lmax;
}

}  // namespace relaxinv

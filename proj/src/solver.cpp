#include "relaxinv/solver.hpp"

#include <chrono>
#include <limits>
#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

namespace {

PenaltySnapshot snapshot_of(int k, const PenaltyState& ps, int inner_iters) {
    PenaltySnapshot sn;
    sn.k = k;
    sn.eps2 = ps.eps2;
    sn.alpha = ps.alpha;
    sn.xi = ps.xi;
    if (ps.lambda.size() > 0) {
        sn.lambda_min = ps.lambda.minCoeff();
        sn.lambda_max = ps.lambda.maxCoeff();
        sn.lambda_mean = ps.lambda.mean();
    }
    sn.inner_iters = inner_iters;
    return sn;
}

}  // namespace

Eigen::VectorXd gp_init(const SeparableOperator& op, const Eigen::VectorXd& s, int iters) {
    if (s.size() != op.rows()) throw ShapeError("gp_init: s does not match operator");
    if (iters < 1) throw DomainError("gp_init: need at least one iteration");
    const NormalForm nf = make_normal_form(op, s);

    // Projected gradient with spectral (Barzilai-Borwein) steplengths and a
    // halving safeguard, so the residual never increases. Plain fixed-step
    // descent stalls hopelessly on these kernels' conditioning.
    Eigen::VectorXd f = Eigen::VectorXd::Zero(op.cols());
    Eigen::VectorXd h = -nf.b;  // half gradient K^T (K f - s) at f = 0
    double r2 = nf.s2;
    double gamma;
    {
        const double hh = h.squaredNorm();
        const double hah = h.dot(apply_normal(nf, h));
        if (!(hah > 0.0) || hh == 0.0) return f;
        gamma = hh / hah;
    }
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd cand, a_cand;
        double cand_r2 = r2;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            cand = (f - gamma * h).cwiseMax(0.0);
            a_cand = apply_normal(nf, cand);
            cand_r2 = cand.dot(a_cand) - 2.0 * cand.dot(nf.b) + nf.s2;
            if (cand_r2 < 0.0) cand_r2 = 0.0;
            if (cand_r2 <= r2) {
                accepted = true;
                break;
            }
            gamma *= 0.5;
        }
        if (!accepted) break;  // stationary up to rounding
        const Eigen::VectorXd df = cand - f;
        const Eigen::VectorXd h_new = a_cand - nf.b;
        const double num = df.squaredNorm();
        const double den = df.dot(h_new - h);
        f = std::move(cand);
        h = h_new;
        r2 = cand_r2;
        if (num == 0.0) break;
        if (std::isfinite(den) && den > 0.0) gamma = num / den;
    }
    return f;
}

SolveReport solve(const SeparableOperator& op, const Eigen::VectorXd& s,
                  const SolverOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    if (s.size() != op.rows()) throw ShapeError("solve: s does not match operator");
    if (!(opts.tau_outer > 0.0 && opts.tau_outer < 1.0))
        throw DomainError("solve: tau_outer must be in (0,1)");
    if (!(opts.tau_inner > 0.0 && opts.tau_inner < 1.0))
        throw DomainError("solve: tau_inner must be in (0,1)");
    if (opts.max_outer < 1) throw DomainError("solve: max_outer must be >= 1");

    const Eigen::Index n1 = op.n1(), n2 = op.n2();
    const LaplacianOp lap{n1, n2};
    const SingularPair sv = max_singular_values(op);
    const NormalForm nf = make_normal_form(op, s);
    const double l1_floor = 1e-12 * std::max(1.0, s.lpNorm<1>());
    const Eigen::VectorXd zero_lambda = Eigen::VectorXd::Zero(n1 * n2);

    SolveReport rep;
    rep.n1 = n1;
    rep.n2 = n2;

    Eigen::VectorXd f = gp_init(op, s, opts.gp_iters);

    const double lambda_cap = opts.upen.lambda_cap_rel > 0.0
                                  ? opts.upen.lambda_cap_rel * sv.product_sq() / 64.0
                                  : std::numeric_limits<double>::infinity();

    auto penalty_at = [&](const Eigen::VectorXd& fk) {
        PenaltyState ps;
        ps.eps2 = residual_eps2(op, fk, s);
        if (!std::isfinite(ps.eps2)) throw NumericalError("solve: non-finite residual");
        switch (opts.method) {
            case Method::l1ll2: {
                const LocalMaps maps = local_maps(lap, fk);
                if (opts.upen.form == LambdaForm::exact)
                    ps.lambda = update_lambdas_exact(ps.eps2, maps.c, opts.upen.rho);
                else
                    ps.lambda = update_lambdas(ps.eps2, opts.upen, maps, n1, n2,
                                               resolve_beta0(opts.upen, maps.c));
                ps.lambda = ps.lambda.cwiseMin(lambda_cap);
                ps.alpha = update_alpha(fk, ps.eps2, l1_floor);
                break;
            }
            case Method::a_l1:
                ps.lambda = zero_lambda;
                ps.alpha = update_alpha(fk, ps.eps2, l1_floor);
                break;
            case Method::l1_fixed:
                ps.lambda = zero_lambda;
                ps.alpha = opts.alpha_fixed;
                break;
        }
        ps.xi = stepsize_xi(sv, ps.lambda);
        return ps;
    };

    bool converged = false;
    int k = 0;
    for (; k < opts.max_outer; ++k) {
        PenaltyState ps = penalty_at(f);
        rep.eps2_history.push_back(ps.eps2);

        // grad Psi1 = 2 (K^T K + L^T Lambda L) f - ..., so its Lipschitz
        // constant is bounded by 2 xi
        FistaResult inner = fista_step_loop(nf, ps.lambda, lap, ps.alpha, 2.0 * ps.xi, f,
                                            opts.tau_inner, opts.max_inner);

        rep.snapshots.push_back(snapshot_of(k, ps, inner.iters));
        rep.inner_iters_per_outer.push_back(inner.iters);
        rep.inner_iters_total += inner.iters;
        rep.objective_history.insert(rep.objective_history.end(), inner.objective_history.begin(),
                                     inner.objective_history.end());

        const double dn = (inner.f - f).norm();
        const double fn = f.norm();
        f = std::move(inner.f);
        if (dn <= opts.tau_outer * fn) {
            ++k;
            converged = true;
            break;
        }
    }

    rep.outer_iters = k;
    rep.converged = converged;
    rep.f_final = std::move(f);

    // post-update snapshot: parameters recomputed at the final iterate
    rep.final_penalty = penalty_at(rep.f_final);
    rep.eps2_history.push_back(rep.final_penalty.eps2);
    rep.snapshots.push_back(snapshot_of(rep.outer_iters, rep.final_penalty, 0));

    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::l1ll2: return "l1ll2";
        case Method::a_l1: return "a_l1";
        case Method::l1_fixed: return "l1_fixed";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "l1ll2") return Method::l1ll2;
    if (name == "a_l1") return Method::a_l1;
    if (name == "l1_fixed") return Method::l1_fixed;
    throw DomainError("unknown method: " + name);
}

}  // namespace relaxinv

#include "relaxinv/metrics.hpp"

#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

double erel2(const Eigen::VectorXd& f, const Eigen::VectorXd& f_true) {
    if (f.size() != f_true.size()) throw ShapeError("erel2: size mismatch");
    const double nt = f_true.squaredNorm();
    if (nt == 0.0) throw DomainError("erel2: zero truth vector");
    return (f - f_true).squaredNorm() / nt;
}

double rmsd(const SeparableOperator& op, const Eigen::VectorXd& f, const Eigen::VectorXd& s) {
    if (s.size() != op.rows()) throw ShapeError("rmsd: s does not match operator");
    return (apply_forward(op, f) - s).norm() / std::sqrt(static_cast<double>(s.size()));
}

double pal(double err_m, double err_min) {
    if (!(err_min > 0.0)) throw DomainError("pal: err_min must be > 0");
    return 100.0 * (err_m - err_min) / err_min;
}

double peg(double time_m, double time_max) {
    if (!(time_max > 0.0)) throw DomainError("peg: time_max must be > 0");
    return 100.0 * (time_max - time_m) / time_max;
}

Aggregate aggregate(std::span<const double> values) {
    Aggregate a;
    const std::size_t n = values.size();
    if (n == 0) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(n);
    if (n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return a;
}

}  // namespace relaxinv

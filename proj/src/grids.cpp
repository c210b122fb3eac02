#include "relaxinv/grids.hpp"

#include <cmath>

namespace relaxinv {

namespace {

void check_positive_increasing(const Eigen::VectorXd& v, const char* what) {
    if (v.size() == 0) throw DomainError(std::string(what) + ": empty grid");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i]))
            throw DomainError(std::string(what) + ": entries must be finite and > 0");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw DomainError(std::string(what) + ": entries must be strictly increasing");
    }
}

Eigen::VectorXd log_spaced(double tmin, double tmax, Eigen::Index count) {
    if (!(tmin > 0.0) || !(tmax > tmin))
        throw DomainError("log grid: need 0 < tmin < tmax");
    if (count < 1) throw DomainError("log grid: need at least one point");
    Eigen::VectorXd v(count);
    if (count == 1) {
        v[0] = tmin;
        return v;
    }
    const double l0 = std::log10(tmin), l1 = std::log10(tmax);
    for (Eigen::Index i = 0; i < count; ++i)
        v[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
    v[count - 1] = tmax;  // pin the endpoint against rounding
    return v;
}

}  // namespace

TimeGrid log_time_grid(double tmin, double tmax, Eigen::Index count) {
    TimeGrid g{log_spaced(tmin, tmax, count), Spacing::logarithmic};
    check_positive_increasing(g.values, "time grid");
    return g;
}

TimeGrid echo_time_grid(double te, Eigen::Index count) {
    if (!(te > 0.0)) throw DomainError("echo grid: te must be > 0");
    if (count < 1) throw DomainError("echo grid: need at least one point");
    Eigen::VectorXd v(count);
    for (Eigen::Index m = 0; m < count; ++m) v[m] = te * static_cast<double>(m + 1);
    return TimeGrid{std::move(v), Spacing::linear};
}

TimeGrid time_grid_from(Eigen::VectorXd values, Spacing spacing) {
    check_positive_increasing(values, "time grid");
    return TimeGrid{std::move(values), spacing};
}

RelaxGrid log_relax_grid(double tmin, double tmax, Eigen::Index count) {
    RelaxGrid g{log_spaced(tmin, tmax, count), tmin, tmax};
    check_positive_increasing(g.values, "relaxation grid");
    return g;
}

RelaxGrid relax_grid_from(Eigen::VectorXd values) {
    check_positive_increasing(values, "relaxation grid");
    const Eigen::Index n = values.size();
    if (n >= 3) {
        // log-spacing: constant ratio between consecutive nodes, 1e-12 relative
        const double r0 = values[1] / values[0];
        for (Eigen::Index i = 1; i + 1 < n; ++i) {
            const double r = values[i + 1] / values[i];
            if (std::abs(r - r0) > 1e-12 * r0)
                throw DomainError("relaxation grid: not log-spaced");
        }
    }
    const double tmin = values[0];
    const double tmax = values[n - 1];
    return RelaxGrid{std::move(values), tmin, tmax};
}

}  // namespace relaxinv

#ifndef RELAXINV_GRIDS_HPP
#define RELAXINV_GRIDS_HPP

#include <Eigen/Core>

#include "relaxinv/errors.hpp"

namespace relaxinv {

enum class Spacing { logarithmic, linear };

// Acquisition-time grid (ms). Entries must be strictly increasing and positive.
struct TimeGrid {
    Eigen::VectorXd values;
    Spacing spacing = Spacing::logarithmic;

    Eigen::Index size() const { return values.size(); }
};

// Relaxation-time grid (ms), log-spaced between its bounds.
struct RelaxGrid {
    Eigen::VectorXd values;
    double tmin = 0.0;
    double tmax = 0.0;

    Eigen::Index size() const { return values.size(); }
};

// Builders validate their invariants and throw DomainError on violation.
TimeGrid log_time_grid(double tmin, double tmax, Eigen::Index count);
// CPMG echo train t_m = m * te, m = 1..count.
TimeGrid echo_time_grid(double te, Eigen::Index count);
// Wraps externally supplied times (e.g. read from file) after validation.
TimeGrid time_grid_from(Eigen::VectorXd values, Spacing spacing);

RelaxGrid log_relax_grid(double tmin, double tmax, Eigen::Index count);
// Validates strict positivity, monotonicity and log-spacing (1e-12 relative).
RelaxGrid relax_grid_from(Eigen::VectorXd values);

}  // namespace relaxinv

#endif

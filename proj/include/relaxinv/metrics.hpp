#ifndef RELAXINV_METRICS_HPP
#define RELAXINV_METRICS_HPP

#include <Eigen/Core>
#include <span>
#include <string>

#include "relaxinv/kernels.hpp"

namespace relaxinv {

// Erel2 = ||f - f_true||^2 / ||f_true||^2. Throws DomainError if f_true = 0.
double erel2(const Eigen::VectorXd& f, const Eigen::VectorXd& f_true);

// RMSD = ||K f - s|| / sqrt(M).
double rmsd(const SeparableOperator& op, const Eigen::VectorXd& f, const Eigen::VectorXd& s);

// Percentage accuracy loss, 100 (err_m - err_min) / err_min.
double pal(double err_m, double err_min);

// Percentage efficiency gain, 100 (time_max - time_m) / time_max.
double peg(double time_m, double time_max);

struct MetricRow {
    std::string method;
    double erel2 = 0.0;
    double rmsd = 0.0;
    double wall_time = 0.0;
    int n_realizations = 0;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for n < 2
};

Aggregate aggregate(std::span<const double> values);

}  // namespace relaxinv

#endif

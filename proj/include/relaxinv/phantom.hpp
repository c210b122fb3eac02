#ifndef RELAXINV_PHANTOM_HPP
#define RELAXINV_PHANTOM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "relaxinv/grids.hpp"
#include "relaxinv/kernels.hpp"

namespace relaxinv {

// One spin population: a bivariate Gaussian in (log10 T1, log10 T2).
struct PeakSpec {
    double t1_center_ms = 0.0;
    double t2_center_ms = 0.0;
    double amplitude = 1.0;
    double width1_decades = 0.15;  // std dev along log10 T1
    double width2_decades = 0.15;  // std dev along log10 T2
};

// Synthetic signal s = K f* + e with noise scaled to an exact norm:
// e = delta * g / ||g||, g standard Gaussian, so ||e|| = delta.
struct NoisySignal {
    Eigen::VectorXd s;
    double delta = 0.0;  // noise norm ||e||
    double sigma = 0.0;  // per-sample std, delta / sqrt(M)
    std::uint64_t seed = 0;
};

// Sum of the peak Gaussians evaluated on the grid, normalized to unit sum.
// Throws DomainError on an empty peak list or a center outside the grid bounds.
Eigen::VectorXd make_phantom(const std::vector<PeakSpec>& peaks, const RelaxGrid& T1,
                             const RelaxGrid& T2);

// Physicality warnings (T1 <= T2 for an IR-CPMG population); never throws.
std::vector<std::string> peak_warnings(const std::vector<PeakSpec>& peaks);

// Named presets: "2pks" (80x80 map) and "3pks" (100x100 map).
std::vector<PeakSpec> preset_peaks(const std::string& name);
Eigen::Index preset_grid_size(const std::string& name);

NoisySignal simulate(const SeparableOperator& op, const Eigen::VectorXd& f_true, double delta,
                     std::uint64_t seed);

}  // namespace relaxinv

#endif

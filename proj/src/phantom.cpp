#include "relaxinv/phantom.hpp"

#include <cmath>

#include "relaxinv/errors.hpp"
#include "relaxinv/rng.hpp"

namespace relaxinv {

Eigen::VectorXd make_phantom(const std::vector<PeakSpec>& peaks, const RelaxGrid& T1,
                             const RelaxGrid& T2) {
    if (peaks.empty()) throw DomainError("make_phantom: empty peak list");
    const Eigen::Index n1 = T1.size(), n2 = T2.size();
    for (const PeakSpec& p : peaks) {
        if (!(p.amplitude > 0.0)) throw DomainError("make_phantom: amplitude must be > 0");
        if (!(p.width1_decades > 0.0) || !(p.width2_decades > 0.0))
            throw DomainError("make_phantom: widths must be > 0");
        if (p.t1_center_ms < T1.values[0] || p.t1_center_ms > T1.values[n1 - 1] ||
            p.t2_center_ms < T2.values[0] || p.t2_center_ms > T2.values[n2 - 1])
            throw DomainError("make_phantom: peak center outside grid bounds");
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n1 * n2);
    Eigen::Map<Eigen::MatrixXd> F(f.data(), n1, n2);
    for (const PeakSpec& p : peaks) {
        const double c1 = std::log10(p.t1_center_ms);
        const double c2 = std::log10(p.t2_center_ms);
        for (Eigen::Index j = 0; j < n2; ++j) {
            const double d2 = (std::log10(T2.values[j]) - c2) / p.width2_decades;
            for (Eigen::Index i = 0; i < n1; ++i) {
                const double d1 = (std::log10(T1.values[i]) - c1) / p.width1_decades;
                F(i, j) += p.amplitude * std::exp(-0.5 * (d1 * d1 + d2 * d2));
            }
        }
    }
    f /= f.sum();
    return f;
}

std::vector<std::string> peak_warnings(const std::vector<PeakSpec>& peaks) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        if (peaks[k].t1_center_ms <= peaks[k].t2_center_ms)
            out.push_back("peak " + std::to_string(k + 1) +
                          ": T1 <= T2 is unphysical for an IR-CPMG population");
    }
    return out;
}

std::vector<PeakSpec> preset_peaks(const std::string& name) {
    if (name == "2pks")
        return {PeakSpec{814.97, 4.533, 1.0, 0.15, 0.15},
                PeakSpec{119.54, 8.5606, 1.0, 0.15, 0.15}};
    if (name == "3pks")
        return {PeakSpec{1582.2, 32.289, 1.0, 0.15, 0.15},
                PeakSpec{5.9692, 2.6124, 1.0, 0.15, 0.15},
                PeakSpec{1139.5, 258.08, 1.0, 0.15, 0.15}};
    throw DomainError("unknown phantom preset: " + name);
}

Eigen::Index preset_grid_size(const std::string& name) {
    if (name == "2pks") return 80;
    if (name == "3pks") return 100;
    throw DomainError("unknown phantom preset: " + name);
}

NoisySignal simulate(const SeparableOperator& op, const Eigen::VectorXd& f_true, double delta,
                     std::uint64_t seed) {
    if (delta < 0.0) throw DomainError("simulate: delta must be >= 0");
    NoisySignal out;
    out.delta = delta;
    out.seed = seed;
    out.s = apply_forward(op, f_true);
    const double m = static_cast<double>(out.s.size());
    out.sigma = delta / std::sqrt(m);
    if (delta > 0.0) {
        Eigen::VectorXd g = gaussian_vector(seed, out.s.size());
        out.s += (delta / g.norm()) * g;
    }
    return out;
}

}  // namespace relaxinv

#ifndef RELAXINV_FORMATS_HPP
#define RELAXINV_FORMATS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relaxinv/grids.hpp"
#include "relaxinv/kernels.hpp"
#include "relaxinv/metrics.hpp"
#include "relaxinv/solver.hpp"

namespace relaxinv {

// On-disk containers: a plain-text header (one "key value" pair per line,
// first line carries the format tag and version, "data" closes the header)
// followed by a little-endian float64 payload. Round trips are bitwise.

inline constexpr int kSignalFormatVersion = 1;
inline constexpr int kMapFormatVersion = 1;

// Payload: t1 grid (m1), t2 grid (m2), then S columnwise (m1 x m2 with rows
// indexing t1).
struct SignalFile {
    KernelKind kind = KernelKind::ir_cpmg;
    TimeGrid t1;
    TimeGrid t2;
    double delta = 0.0;     // 0 for noise-free or measured data
    std::uint64_t seed = 0;
    Eigen::VectorXd s;      // length m1*m2
};

// Payload: T1 grid (n1), T2 grid (n2), then F columnwise (n1 x n2).
struct MapFile {
    RelaxGrid T1;
    RelaxGrid T2;
    Eigen::VectorXd f;  // length n1*n2
};

void write_signal(const std::filesystem::path& path, const SignalFile& sig);
SignalFile read_signal(const std::filesystem::path& path);

void write_map(const std::filesystem::path& path, const MapFile& map);
MapFile read_map(const std::filesystem::path& path);

// Shortest exact decimal representation (round trips through from_chars).
std::string format_double(double v);

std::string kernel_kind_name(KernelKind k);
KernelKind kernel_kind_from_name(const std::string& name);

// Plot-ready and diagnostic exports (CSV).
void write_diagnostics_csv(const std::filesystem::path& path, const SolveReport& report);
void write_objective_csv(const std::filesystem::path& path, const SolveReport& report);
// One realization's metrics; erel2 column is left empty without a truth map.
struct RealizationMetrics {
    std::string method;
    std::uint64_t seed = 0;
    double erel2 = 0.0;
    double rmsd = 0.0;
    bool has_truth = false;
};
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<RealizationMetrics>& rows);
void write_contour_csv(const std::filesystem::path& path, const MapFile& map);
// Projections: sums of F over columns (onto T1) and over rows (onto T2).
void write_projection_csv(const std::filesystem::path& t1_path,
                          const std::filesystem::path& t2_path, const MapFile& map);
void write_table1_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows);
void write_table2_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows);

}  // namespace relaxinv

#endif

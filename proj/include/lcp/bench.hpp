#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcp/clustering.hpp"
#include "lcp/graph.hpp"
#include "lcp/process.hpp"

namespace lcp {

/// SSBM experiment grid: mean degree is held fixed while the gap b_in - b_out
/// sweeps the grid. Methods: lcp, lcp_n, lcp_c, nbt, louvain, newman.
struct SweepConfig {
    int n = 400;
    int c = 2;
    double d_av = 7.0;
    std::vector<double> gaps;
    int repetitions = 10;
    std::vector<std::string> methods = {"lcp", "louvain"};
    std::uint64_t seed = 1;
    LcpParams lcp;
    std::string output;
    int threads = 0;  // 0 -> hardware concurrency
};

/// One result record per (method, grid point, repetition). Count-only methods
/// leave modularity_est and ari unset (NaN -> empty CSV field).
struct SweepRow {
    std::string method;
    double gap = 0.0;
    int rep = 0;
    std::uint64_t seed = 0;
    int estimated_c = 0;
    double modularity_est = 0.0;
    double modularity_planted = 0.0;
    double ari = 0.0;
    double runtime_ms = 0.0;
    std::string error;  // non-empty if this row failed; numeric fields unset
};

/// b_in = d_av + (c-1) gap / c and b_out = b_in - gap, so that the expected
/// degree stays d_av exactly. Throws if the gap forces b_out < 0.
std::pair<double, double> solve_bin_bout(int c, double d_av, double gap);

/// Executes the grid. One graph per (grid point, repetition) derived from a
/// stable seed mix, shared by every method; rows are ordered by
/// (method, gap, repetition) no matter how the work pool schedules them.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Adjusted Rand index in [-1, 1]; 1 iff the partitions agree up to label
/// permutation.
double adjusted_rand_index(const Partition& a, const Partition& b);

/// CSV emission with a versioned schema comment. runtime_ms is wall-clock and
/// the only column exempt from byte-for-byte reproducibility.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Flat `key = value` sweep configuration; unknown keys are errors.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

struct GapScanRow {
    double alpha = 0.0;
    double delta = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
};

/// Eigenvalue gap beta2 - beta3 of W - diag(Wu) over an (alpha, delta) grid.
/// Grid values must respect param_bounds for the graph.
std::vector<GapScanRow> scan_gap_surface(const Graph& g, const std::vector<double>& alphas,
                                         const std::vector<double>& deltas,
                                         const LcpParams& base = {});
void write_gap_scan_csv(std::ostream& out, const std::vector<GapScanRow>& rows);

struct Beta2ScanRow {
    SsbmConfig config;
    double modularity_planted = 0.0;
    double beta2 = 0.0;
};

/// Planted-partition modularity versus beta2, one SSBM draw per config.
std::vector<Beta2ScanRow> scan_beta2_modularity(const std::vector<SsbmConfig>& configs,
                                                const LcpParams& base = {});
void write_beta2_scan_csv(std::ostream& out, const std::vector<Beta2ScanRow>& rows);

}  // namespace lcp

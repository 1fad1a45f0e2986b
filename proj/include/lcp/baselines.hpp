#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lcp/graph.hpp"

namespace lcp {

/// Two-phase Louvain modularity optimization. Nodes are swept in ascending id
/// order with full passes until no move improves modularity by more than
/// 1e-12; communities are then aggregated into a weighted self-looped graph
/// and the procedure repeats. The seed is reserved for randomized sweep
/// orders and currently unused.
Partition louvain(const Graph& g, std::uint64_t seed = 0);

/// Newman's recursive spectral bisection of the modularity matrix. Each group
/// splits by the sign pattern of the leading eigenvector of its generalized
/// modularity matrix; a split is kept only when it strictly increases total
/// modularity.
Partition newman_spectral(const Graph& g);

/// Spectrum-based cluster count summary for the 2N x 2N companion matrices.
struct NbtSpectrum {
    std::vector<std::complex<double>> values;
    double lambda1 = 0.0;  // largest real eigenvalue
    double radius = 0.0;   // sqrt(lambda1)
    int count = 0;
};

/// Non-backtracking count: eigenvalues of B* = [[A, I-D],[I, 0]] that are real
/// and exceed sqrt(lambda1).
NbtSpectrum nbt_spectrum(const Graph& g);
int nbt_cluster_count(const Graph& g);

/// LCP variant: same counting on W*, whose attraction block weights links by
/// common-neighbor counts (repulsion off). Counts by real part, including
/// complex eigenvalues.
NbtSpectrum lcp_c_spectrum(const Graph& g, double alpha);
int lcp_c_count(const Graph& g, double alpha = 0.95);

}  // namespace lcp

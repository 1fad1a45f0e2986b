#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lcp/graph.hpp"
#include "lcp/process.hpp"

namespace lcp {

/// Node permutation induced by sorting y2 ascending (stable, ties by node id).
/// order maps rank position -> node, rank is its inverse.
struct Ranking {
    std::vector<int> order;
    std::vector<int> rank;
    Eigen::VectorXd sorted_y2;
};

Ranking rank_nodes(const Eigen::VectorXd& y2);

/// Consecutive nodes in ranked order share a cluster iff their sorted-y2 gap
/// is strictly below theta.
Partition threshold_clusters(const Ranking& rk, double theta);

/// Heuristic default threshold: mean consecutive gap plus two standard
/// deviations.
double default_gap_threshold(const Ranking& rk);

/// Split positions in relabeled (rank) order; each border b means positions
/// [.., b) and [b, ..) fall in different clusters. Invariant: 0 < b < n,
/// strictly increasing.
struct BorderSet {
    std::vector<int> borders;
};

/// Graph relabeled by a ranking: position p hosts node order[p].
struct RelabeledGraph {
    std::vector<int> offsets;    // CSR over positions
    std::vector<int> neighbors;  // neighbor positions, sorted per row
    std::vector<int> degree;
    long long links = 0;

    int n() const { return static_cast<int>(degree.size()); }
    std::span<const int> row(int p) const {
        return {neighbors.data() + offsets[p], neighbors.data() + offsets[p + 1]};
    }
};

RelabeledGraph relabel(const Graph& g, const Ranking& rk);

/// Prefix/backward modularity accumulators of the segment [lo, hi): entry r-1
/// is p_r + q_r, the summed modularity terms of the two sub-segments split
/// after the r-th position. Degree products use the whole graph's 2L.
std::vector<double> bisection_scores(const RelabeledGraph& rg, int lo, int hi);

/// Recursive modularity bisection on the ranked order. A segment splits at the
/// argmax of p+q (ties to the smaller border) when the score exceeds the
/// segment's own modularity term; the initial threshold is theta_m.
BorderSet estimate_clusters(const Ranking& rk, const Graph& g, double theta_m = 0.0);
BorderSet estimate_clusters(const RelabeledGraph& rg, double theta_m = 0.0);

/// Depth-limited variant: ceil(log2(c)) + 1 bisection levels, each accepting
/// the best split even at negative gain, yielding up to 2^depth segments.
BorderSet bisect_to_depth(const RelabeledGraph& rg, int c);

/// Aggregated modularity matrix over contiguous segments plus the adjacent-
/// pair merge scores mu_g = (M_c)_{g,g+1}.
struct MergeState {
    Eigen::MatrixXd m_c;
    Eigen::VectorXd mu;
};

MergeState build_merge_state(const RelabeledGraph& rg, const BorderSet& bs);

/// Merges the adjacent segment pair with maximal mu until exactly c segments
/// remain; throws if fewer than c segments are supplied.
Partition merge_to_c(const BorderSet& bs, const Ranking& rk, const Graph& g, int c);

/// Contiguous rank segments -> node partition.
Partition partition_from_borders(const BorderSet& bs, const Ranking& rk);

struct PipelineDiagnostics {
    double beta2 = 0.0;
    double beta3 = 0.0;
    double modularity_value = 0.0;
    int cluster_count = 0;        // communities found on the degree>=1 core
    int total_cluster_count = 0;  // including isolated-node singletons
    int isolated_nodes = 0;
    bool power_converged = true;
    bool params_clamped = false;
    double alpha_used = 0.0;
    double delta_used = 0.0;
};

struct PipelineResult {
    Partition partition;
    PipelineDiagnostics diagnostics;
};

/// End-to-end clustering: scaled LCP -> ranking -> recursive modularity
/// estimation (auto) or depth-limited bisection plus merge (fixed_c). Isolated
/// nodes are split into singleton clusters up front and the process runs on
/// the remainder; they are excluded from cluster_count but present in the
/// returned partition.
PipelineResult lcp_pipeline(const Graph& g, const LcpParams& params,
                            std::optional<int> fixed_c = std::nullopt);

}  // namespace lcp

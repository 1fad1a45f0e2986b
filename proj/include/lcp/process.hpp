#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lcp/graph.hpp"
#include "lcp/numerics.hpp"

namespace lcp {

/// Attraction/repulsion strengths and the inter-community link scaling
/// schedule. alpha/delta defaults follow the benchmark settings; with
/// enforce_bounds on they are clamped into the non-negativity region of the
/// operator (see param_bounds) instead of erroring.
struct LcpParams {
    double alpha = 0.95;
    double delta = 1e-3;
    bool enforce_bounds = false;

    double scale_fraction_total = 0.6;  // fraction of links scaled over the whole run
    int scale_iterations = 30;
    /// gamma applied to links selected at (1-based) iteration i; fixed once set.
    std::function<double(int iteration, int total_iterations)> gamma_schedule =
        [](int i, int total) { return 0.05 * i / total; };

    double power_tol = 1e-10;
    int power_max_iter = 0;  // 0 -> 10n + 1000
    std::uint64_t seed = 0;
};

/// Row-wise bounds above which the operator I + W - diag(Wu) can lose
/// non-negativity. alpha_max <= 1 always; for graphs where every node has
/// degree 1 the delta bound is vacuous (+infinity).
struct ParamBounds {
    double alpha_max;
    double delta_max;
};
ParamBounds param_bounds(const Graph& g);

/// (A o A^2): number of 2-hop walks between adjacent node pairs, stored on the
/// adjacency sparsity pattern (entry k counts common neighbors of the pair
/// behind CSR slot k). increments counts the upper-triangle walk updates
/// performed before symmetrization.
struct HadamardA2 {
    std::vector<int> counts;  // aligned with Graph::neighbors
    long long increments = 0;

    long long entry_sum() const;
};
HadamardA2 hadamard_a_a2(const Graph& g);

/// Symmetric link weight matrix W on the adjacency pattern, with per-link
/// scale state for the iterated reweighting. Scaled weights are materialized
/// (O(L) rebuild) so operator applications stay a plain sparse matvec.
class WeightMatrix {
public:
    WeightMatrix(const Graph& g, std::vector<double> base_weights);

    int n() const { return n_; }
    long long links() const { return static_cast<long long>(scale_.size()); }

    /// Scaled weight of CSR slot k (pattern identical to the source graph).
    double weight_at_slot(std::size_t k) const { return scaled_[k]; }
    double base_weight_at_slot(std::size_t k) const { return base_[k]; }
    const std::vector<double>& row_sums() const { return row_sums_; }

    bool link_scaled(int edge_id) const { return scale_[edge_id] != 1.0; }
    double link_scale(int edge_id) const { return scale_[edge_id]; }

    /// Applies gamma to both CSR slots of the given undirected links and
    /// refreshes scaled weights plus row sums.
    void scale_links(const std::vector<int>& edge_ids, double gamma);

    /// y = (W - diag(Wu)) x.
    void apply_centered(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

    /// Dense W (scaled) for oracles and small-instance checks.
    Eigen::MatrixXd dense() const;

    const std::vector<int>& offsets() const { return offsets_; }
    const std::vector<int>& neighbors() const { return neighbors_; }
    const std::vector<int>& slot_edge_ids() const { return slot_edge_; }

private:
    void rebuild();

    int n_;
    std::vector<int> offsets_;
    std::vector<int> neighbors_;
    std::vector<int> slot_edge_;   // CSR slot -> undirected link id
    std::vector<double> base_;     // unscaled weights per CSR slot
    std::vector<double> scale_;    // per-link scale factor (1 = untouched)
    std::vector<double> scaled_;   // base * scale per CSR slot
    std::vector<double> row_sums_; // (W u)_i over scaled weights
};

/// Builds W with w_ij = a_ij [alpha(|Ni∩Nj|+1) - delta((|Ni\Nj|+|Nj\Ni|)/2 - 1)] / (d_i d_j).
/// Throws on zero-degree nodes. If params.enforce_bounds, alpha/delta are
/// clamped to param_bounds first.
WeightMatrix build_w(const Graph& g, const LcpParams& params);

/// Node positions on the line at discrete time k.
struct PositionState {
    Eigen::VectorXd x;
    long long k = 0;
};

/// Equidistant initial placement x[0] = (1, 2, ..., N).
PositionState initial_positions(int n);

/// One step of x' = x + sum_j w_ij (x_j - x_i); conserves sum(x).
PositionState operator_apply(const WeightMatrix& w, const PositionState& state);

/// k operator applications from x[0] = (1..N).
PositionState simulate(const Graph& g, const LcpParams& params, long long k);

/// beta2/y2 of W - diag(Wu) by power iteration on the shifted operator
/// 2I + W - diag(Wu) with u deflated; beta3 by additionally deflating y2.
/// warm_start, when sized n, seeds the first iteration.
SpectralSummary spectral_y2(const WeightMatrix& w, const LcpParams& params = {},
                            const Eigen::VectorXd& warm_start = {});

/// One scaling round: ranking used, links selected, gamma applied.
struct ScaleEvent {
    int iteration = 0;
    double gamma = 1.0;
    std::vector<int> scaled_links;
    std::vector<int> ranking;  // rank of each node under the iteration's y2
};

struct ScaledLcpResult {
    SpectralSummary summary;           // spectrum of the final scaled matrix
    std::vector<ScaleEvent> history;
    double alpha_used = 0.0;           // after optional clamping
    double delta_used = 0.0;
    bool params_clamped = false;
};

/// Iterated reweighting: per iteration, extract y2 of the current scaled W,
/// rank nodes, scale the per-iteration quota of never-scaled links with the
/// largest rank distance, and continue. Each link is scaled at most once and
/// keeps the gamma from its selection iteration. The input graph is not
/// modified.
ScaledLcpResult run_scaled_lcp(const Graph& g, const LcpParams& params);

}  // namespace lcp

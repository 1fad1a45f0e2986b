#include "lcp/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lcp {

ParamBounds param_bounds(const Graph& g) {
    const int d_max = g.max_degree();
    const int d_min = g.min_degree();
    if (d_max < 1) throw std::invalid_argument("param_bounds needs at least one link");
    const double denom = d_max - 0.5 * (1.0 + static_cast<double>(d_min) / d_max);
    if (denom <= 0.0) {
        // Perfect matching (d_max = 1): the repulsion term vanishes on every
        // link, so delta is unconstrained.
        return {1.0, std::numeric_limits<double>::infinity()};
    }
    return {(d_max - 1.0) / denom, 1.0 / denom};
}

HadamardA2 hadamard_a_a2(const Graph& g) {
    HadamardA2 out;
    out.counts.assign(g.neighbors.size(), 0);

    std::vector<int> stamp(g.n, -1);
    std::vector<int> walk_count(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        const auto row_i = g.row(i);
        for (int v : row_i) stamp[v] = i;
        // 2-hop walks i -> j -> m with m > i and m adjacent to i; each found
        // walk is one increment of the upper-triangle entry (i, m).
        for (int j : row_i) {
            for (int m : g.row(j)) {
                if (m > i && stamp[m] == i) {
                    ++walk_count[m];
                    ++out.increments;
                }
            }
        }
        for (std::size_t k = 0; k < row_i.size(); ++k) {
            const int m = row_i[k];
            if (m <= i || walk_count[m] == 0) continue;
            const int c = walk_count[m];
            walk_count[m] = 0;
            out.counts[g.offsets[i] + k] = c;
            // Mirror into row m (symmetrization).
            const auto row_m = g.row(m);
            const auto it = std::lower_bound(row_m.begin(), row_m.end(), i);
            out.counts[g.offsets[m] + (it - row_m.begin())] = c;
        }
    }
    return out;
}

long long HadamardA2::entry_sum() const {
    return std::accumulate(counts.begin(), counts.end(), 0LL);
}

WeightMatrix::WeightMatrix(const Graph& g, std::vector<double> base_weights)
    : n_(g.n),
      offsets_(g.offsets),
      neighbors_(g.neighbors),
      base_(std::move(base_weights)) {
    if (base_.size() != neighbors_.size())
        throw std::invalid_argument("weight array does not match the adjacency pattern");
    slot_edge_.resize(neighbors_.size());
    // Map each CSR slot to its undirected link id (edges are lexicographically
    // sorted, which makes the lookup a binary search).
    for (int i = 0; i < n_; ++i) {
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            const int j = neighbors_[k];
            const int lo = std::min(i, j), hi = std::max(i, j);
            const auto it = std::lower_bound(g.edges.begin(), g.edges.end(), std::make_pair(lo, hi));
            slot_edge_[k] = static_cast<int>(it - g.edges.begin());
        }
    }
    scale_.assign(g.edges.size(), 1.0);
    rebuild();
}

void WeightMatrix::rebuild() {
    scaled_.resize(base_.size());
    for (std::size_t k = 0; k < base_.size(); ++k) scaled_[k] = base_[k] * scale_[slot_edge_[k]];
    row_sums_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) s += scaled_[k];
        row_sums_[i] = s;
    }
}

void WeightMatrix::scale_links(const std::vector<int>& edge_ids, double gamma) {
    for (int e : edge_ids) {
        if (e < 0 || e >= static_cast<int>(scale_.size())) throw std::invalid_argument("link id out of range");
        scale_[e] = gamma;
    }
    rebuild();
}

void WeightMatrix::apply_centered(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (x.size() != n_) throw std::invalid_argument("dimension mismatch");
    y.resize(n_);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) acc += scaled_[k] * x[neighbors_[k]];
        y[i] = acc - row_sums_[i] * x[i];
    }
}

Eigen::MatrixXd WeightMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) m(i, neighbors_[k]) = scaled_[k];
    return m;
}

WeightMatrix build_w(const Graph& g, const LcpParams& params) {
    for (int i = 0; i < g.n; ++i)
        if (g.degree[i] == 0)
            throw std::invalid_argument("build_w requires degree >= 1 (node " + std::to_string(i) +
                                        " is isolated)");
    double alpha = params.alpha;
    double delta = params.delta;
    if (params.enforce_bounds) {
        const ParamBounds b = param_bounds(g);
        alpha = std::min(alpha, b.alpha_max);
        delta = std::min(delta, b.delta_max);
    }

    const HadamardA2 h = hadamard_a_a2(g);
    std::vector<double> w(g.neighbors.size());
    for (int i = 0; i < g.n; ++i) {
        for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
            const int j = g.neighbors[k];
            const double common = h.counts[k];
            const double distinct = g.degree[i] + g.degree[j] - 2.0 * common;
            w[k] = (alpha * (common + 1.0) - delta * (0.5 * distinct - 1.0)) /
                   (static_cast<double>(g.degree[i]) * g.degree[j]);
        }
    }
    return WeightMatrix(g, std::move(w));
}

PositionState initial_positions(int n) {
    PositionState s;
    s.x.resize(n);
    for (int i = 0; i < n; ++i) s.x[i] = i + 1;
    s.k = 0;
    return s;
}

PositionState operator_apply(const WeightMatrix& w, const PositionState& state) {
    PositionState next;
    w.apply_centered(state.x, next.x);
    next.x += state.x;
    next.k = state.k + 1;
    return next;
}

PositionState simulate(const Graph& g, const LcpParams& params, long long k) {
    if (k < 0) throw std::invalid_argument("negative time");
    const WeightMatrix w = build_w(g, params);
    PositionState s = initial_positions(g.n);
    for (long long step = 0; step < k; ++step) s = operator_apply(w, s);
    return s;
}

SpectralSummary spectral_y2(const WeightMatrix& w, const LcpParams& params,
                            const Eigen::VectorXd& warm_start) {
    const int n = w.n();
    LinearMap map = [&w](const Eigen::VectorXd& x, Eigen::VectorXd& y) { w.apply_centered(x, y); };

    std::vector<Eigen::VectorXd> deflate;
    deflate.push_back(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));

    PowerOptions opts;
    opts.tol = params.power_tol;
    opts.max_iter = params.power_max_iter;
    opts.seed = params.seed;
    // W - diag(Wu) has spectrum in (-2, 0]; the +2 shift makes it (0, 2] so
    // the power iteration tracks the algebraically largest eigenvalue.
    opts.shift = 2.0;
    if (warm_start.size() == n) opts.start = warm_start;

    const PowerResult second = power_leading(map, n, deflate, opts);

    deflate.push_back(second.vector);
    PowerOptions opts3 = opts;
    opts3.seed = params.seed + 1;
    opts3.start.resize(0);
    const PowerResult third = power_leading(map, n, deflate, opts3);

    SpectralSummary out;
    out.beta2 = second.value;
    out.beta3 = third.value;
    out.y2 = second.vector;
    out.converged = second.converged && third.converged;
    if (out.beta3 > out.beta2) {
        // Near-degenerate pair resolved in the wrong order; the later run found
        // the larger eigenvalue.
        std::swap(out.beta2, out.beta3);
        out.y2 = third.vector;
    }
    return out;
}

namespace {

std::vector<int> ranking_from_y2(const Eigen::VectorXd& y2) {
    const int n = static_cast<int>(y2.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&y2](int a, int b) { return y2[a] < y2[b]; });
    std::vector<int> rank(n);
    for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos;
    return rank;
}

}  // namespace

ScaledLcpResult run_scaled_lcp(const Graph& g, const LcpParams& params) {
    LcpParams effective = params;
    ScaledLcpResult result;
    if (params.enforce_bounds) {
        const ParamBounds b = param_bounds(g);
        if (params.alpha > b.alpha_max || params.delta > b.delta_max) result.params_clamped = true;
        effective.alpha = std::min(params.alpha, b.alpha_max);
        effective.delta = std::min(params.delta, b.delta_max);
        effective.enforce_bounds = false;  // already applied
    }
    result.alpha_used = effective.alpha;
    result.delta_used = effective.delta;

    WeightMatrix w = build_w(g, effective);
    const long long links = g.link_count();
    const int iters = std::max(params.scale_iterations, 0);
    const long long target_total =
        std::llround(std::clamp(params.scale_fraction_total, 0.0, 1.0) * static_cast<double>(links));
    if (target_total > links) throw std::invalid_argument("scaling quota exceeds link count");

    std::vector<char> scaled(links, 0);
    Eigen::VectorXd warm;
    for (int it = 1; it <= iters && target_total > 0; ++it) {
        const SpectralSummary summary = spectral_y2(w, effective, warm);
        warm = summary.y2;
        const std::vector<int> rank = ranking_from_y2(summary.y2);

        // Evenly spread quota: cumulative targets avoid drift on non-divisible
        // totals.
        const long long quota =
            target_total * it / iters - target_total * (it - 1) / iters;
        if (quota == 0) continue;

        std::vector<int> candidates;
        candidates.reserve(links);
        for (int e = 0; e < links; ++e)
            if (!scaled[e]) candidates.push_back(e);
        const auto rank_gap = [&](int e) {
            return std::abs(rank[g.edges[e].first] - rank[g.edges[e].second]);
        };
        const long long take = std::min<long long>(quota, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                          [&](int a, int b) {
                              const int ga = rank_gap(a), gb = rank_gap(b);
                              return ga != gb ? ga > gb : a < b;
                          });
        candidates.resize(take);
        std::sort(candidates.begin(), candidates.end());

        const double gamma = params.gamma_schedule ? params.gamma_schedule(it, iters) : 1.0;
        w.scale_links(candidates, gamma);
        for (int e : candidates) scaled[e] = 1;

        ScaleEvent event;
        event.iteration = it;
        event.gamma = gamma;
        event.scaled_links = std::move(candidates);
        event.ranking = rank;
        result.history.push_back(std::move(event));
    }

    result.summary = spectral_y2(w, effective, warm);
    return result;
}

}  // namespace lcp

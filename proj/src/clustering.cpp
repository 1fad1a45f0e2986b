#include "lcp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lcp {

Ranking rank_nodes(const Eigen::VectorXd& y2) {
    const int n = static_cast<int>(y2.size());
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(y2[i])) throw std::invalid_argument("rank_nodes requires finite entries");
    Ranking rk;
    rk.order.resize(n);
    std::iota(rk.order.begin(), rk.order.end(), 0);
    std::stable_sort(rk.order.begin(), rk.order.end(),
                     [&y2](int a, int b) { return y2[a] < y2[b]; });
    rk.rank.resize(n);
    rk.sorted_y2.resize(n);
    for (int pos = 0; pos < n; ++pos) {
        rk.rank[rk.order[pos]] = pos;
        rk.sorted_y2[pos] = y2[rk.order[pos]];
    }
    return rk;
}

Partition threshold_clusters(const Ranking& rk, double theta) {
    if (theta < 0.0) throw std::invalid_argument("threshold must be non-negative");
    const int n = static_cast<int>(rk.order.size());
    std::vector<int> labels(n, 0);
    int cluster = 0;
    for (int pos = 1; pos < n; ++pos) {
        if (!(rk.sorted_y2[pos] - rk.sorted_y2[pos - 1] < theta)) ++cluster;
        labels[rk.order[pos]] = cluster;
    }
    if (n > 0) labels[rk.order[0]] = 0;
    return Partition::from_labels(std::move(labels));
}

double default_gap_threshold(const Ranking& rk) {
    const int n = static_cast<int>(rk.order.size());
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (int pos = 1; pos < n; ++pos) mean += rk.sorted_y2[pos] - rk.sorted_y2[pos - 1];
    mean /= (n - 1);
    double var = 0.0;
    for (int pos = 1; pos < n; ++pos) {
        const double d = rk.sorted_y2[pos] - rk.sorted_y2[pos - 1] - mean;
        var += d * d;
    }
    var /= (n - 1);
    return mean + 2.0 * std::sqrt(var);
}

RelabeledGraph relabel(const Graph& g, const Ranking& rk) {
    if (static_cast<int>(rk.order.size()) != g.n)
        throw std::invalid_argument("ranking does not match the graph");
    RelabeledGraph rg;
    rg.links = g.link_count();
    rg.degree.resize(g.n);
    rg.offsets.assign(g.n + 1, 0);
    for (int p = 0; p < g.n; ++p) {
        rg.degree[p] = g.degree[rk.order[p]];
        rg.offsets[p + 1] = rg.offsets[p] + rg.degree[p];
    }
    rg.neighbors.resize(g.neighbors.size());
    for (int p = 0; p < g.n; ++p) {
        const int node = rk.order[p];
        int cursor = rg.offsets[p];
        for (int nbr : g.row(node)) rg.neighbors[cursor++] = rk.rank[nbr];
        std::sort(rg.neighbors.begin() + rg.offsets[p], rg.neighbors.begin() + rg.offsets[p + 1]);
    }
    return rg;
}

namespace {

/// Number of neighbors of position p that lie in [a, b).
int neighbors_in_range(const RelabeledGraph& rg, int p, int a, int b) {
    const auto row = rg.row(p);
    const auto lo = std::lower_bound(row.begin(), row.end(), a);
    const auto hi = std::lower_bound(row.begin(), row.end(), b);
    return static_cast<int>(hi - lo);
}

struct SegmentScores {
    std::vector<double> prefix;  // prefix[s-1]: modularity term of [lo, lo+s)
    std::vector<double> suffix;  // suffix[t]: modularity term of [lo+t, hi)
};

SegmentScores segment_scores(const RelabeledGraph& rg, int lo, int hi) {
    const int len = hi - lo;
    const double two_l = 2.0 * static_cast<double>(rg.links);
    const double inv_l = 1.0 / static_cast<double>(rg.links);
    const double inv_two_l_sq = 1.0 / (two_l * two_l);

    SegmentScores sc;
    sc.prefix.resize(len);
    sc.suffix.resize(len);

    double deg_acc = rg.degree[lo];
    sc.prefix[0] = -static_cast<double>(rg.degree[lo]) * rg.degree[lo] * inv_two_l_sq;
    for (int s = 2; s <= len; ++s) {
        const int p = lo + s - 1;
        const double d = rg.degree[p];
        const double e_in = neighbors_in_range(rg, p, lo, p);
        sc.prefix[s - 1] = sc.prefix[s - 2] + e_in * inv_l - (2.0 * d * deg_acc + d * d) * inv_two_l_sq;
        deg_acc += d;
    }

    deg_acc = rg.degree[hi - 1];
    sc.suffix[len - 1] = -static_cast<double>(rg.degree[hi - 1]) * rg.degree[hi - 1] * inv_two_l_sq;
    for (int t = len - 2; t >= 0; --t) {
        const int p = lo + t;
        const double d = rg.degree[p];
        const double e_in = neighbors_in_range(rg, p, p + 1, hi);
        sc.suffix[t] = sc.suffix[t + 1] + e_in * inv_l - (2.0 * d * deg_acc + d * d) * inv_two_l_sq;
        deg_acc += d;
    }
    return sc;
}

/// Best split of [lo, hi): returns (border offset r in 1..len-1, score,
/// prefix term p_r, suffix term q_r); ties resolved to the smallest r.
struct BestSplit {
    int r = 0;
    double score = 0.0;
    double prefix_term = 0.0;
    double suffix_term = 0.0;
};

BestSplit best_split(const RelabeledGraph& rg, int lo, int hi) {
    const SegmentScores sc = segment_scores(rg, lo, hi);
    const int len = hi - lo;
    BestSplit best;
    best.r = 1;
    best.score = sc.prefix[0] + sc.suffix[1];
    for (int r = 2; r < len; ++r) {
        const double score = sc.prefix[r - 1] + sc.suffix[r];
        if (score > best.score) {
            best.score = score;
            best.r = r;
        }
    }
    best.prefix_term = sc.prefix[best.r - 1];
    best.suffix_term = sc.suffix[best.r];
    return best;
}

void recurse_estimate(const RelabeledGraph& rg, int lo, int hi, double theta,
                      std::vector<int>& borders) {
    if (hi - lo < 2) return;
    const BestSplit split = best_split(rg, lo, hi);
    if (!(split.score > theta)) return;
    borders.push_back(lo + split.r);
    recurse_estimate(rg, lo, lo + split.r, split.prefix_term, borders);
    recurse_estimate(rg, lo + split.r, hi, split.suffix_term, borders);
}

std::vector<std::pair<int, int>> segments_of(const BorderSet& bs, int n) {
    std::vector<std::pair<int, int>> segments;
    int lo = 0;
    for (int b : bs.borders) {
        segments.emplace_back(lo, b);
        lo = b;
    }
    segments.emplace_back(lo, n);
    return segments;
}

}  // namespace

std::vector<double> bisection_scores(const RelabeledGraph& rg, int lo, int hi) {
    if (lo < 0 || hi > rg.n() || hi - lo < 2)
        throw std::invalid_argument("bisection_scores needs a segment of length >= 2");
    const SegmentScores sc = segment_scores(rg, lo, hi);
    std::vector<double> scores(hi - lo - 1);
    for (int r = 1; r < hi - lo; ++r) scores[r - 1] = sc.prefix[r - 1] + sc.suffix[r];
    return scores;
}

BorderSet estimate_clusters(const RelabeledGraph& rg, double theta_m) {
    if (rg.links == 0) throw std::invalid_argument("estimate_clusters needs at least one link");
    BorderSet bs;
    recurse_estimate(rg, 0, rg.n(), theta_m, bs.borders);
    std::sort(bs.borders.begin(), bs.borders.end());
    return bs;
}

BorderSet estimate_clusters(const Ranking& rk, const Graph& g, double theta_m) {
    return estimate_clusters(relabel(g, rk), theta_m);
}

BorderSet bisect_to_depth(const RelabeledGraph& rg, int c) {
    if (c < 1) throw std::invalid_argument("cluster count must be positive");
    const int depth = static_cast<int>(std::ceil(std::log2(static_cast<double>(c)))) + 1;
    std::vector<std::pair<int, int>> segments{{0, rg.n()}};
    for (int level = 0; level < depth; ++level) {
        std::vector<std::pair<int, int>> next;
        next.reserve(2 * segments.size());
        for (auto [lo, hi] : segments) {
            if (hi - lo < 2) {
                next.emplace_back(lo, hi);
                continue;
            }
            const BestSplit split = best_split(rg, lo, hi);
            next.emplace_back(lo, lo + split.r);
            next.emplace_back(lo + split.r, hi);
        }
        segments = std::move(next);
    }
    BorderSet bs;
    for (std::size_t s = 0; s + 1 < segments.size(); ++s) bs.borders.push_back(segments[s].second);
    return bs;
}

MergeState build_merge_state(const RelabeledGraph& rg, const BorderSet& bs) {
    const int n = rg.n();
    const auto segments = segments_of(bs, n);
    const int s = static_cast<int>(segments.size());
    std::vector<int> seg_of(n);
    for (int g = 0; g < s; ++g)
        for (int p = segments[g].first; p < segments[g].second; ++p) seg_of[p] = g;

    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(s, s);
    for (int p = 0; p < n; ++p)
        for (int q : rg.row(p)) adjacency(seg_of[p], seg_of[q]) += 1.0;

    Eigen::VectorXd deg_sum = Eigen::VectorXd::Zero(s);
    for (int p = 0; p < n; ++p) deg_sum[seg_of[p]] += rg.degree[p];

    const double two_l = 2.0 * static_cast<double>(rg.links);
    MergeState state;
    state.m_c = adjacency - deg_sum * deg_sum.transpose() / two_l;
    state.mu.resize(std::max(s - 1, 0));
    for (int g = 0; g + 1 < s; ++g) state.mu[g] = state.m_c(g, g + 1);
    return state;
}

Partition merge_to_c(const BorderSet& bs, const Ranking& rk, const Graph& g, int c) {
    if (c < 1) throw std::invalid_argument("cluster count must be positive");
    const RelabeledGraph rg = relabel(g, rk);
    auto segments = segments_of(bs, rg.n());
    if (static_cast<int>(segments.size()) < c)
        throw std::invalid_argument("insufficient segments: have " + std::to_string(segments.size()) +
                                    ", need " + std::to_string(c));

    MergeState state = build_merge_state(rg, bs);
    int s = static_cast<int>(segments.size());
    while (s > c) {
        int best = 0;
        for (int g2 = 1; g2 + 1 < s; ++g2)
            if (state.mu[g2] > state.mu[best]) best = g2;

        // Merge segments best and best+1: collapse rows/columns and the span.
        segments[best].second = segments[best + 1].second;
        segments.erase(segments.begin() + best + 1);

        Eigen::MatrixXd next(s - 1, s - 1);
        for (int a = 0, ia = 0; a < s; ++a) {
            if (a == best + 1) continue;
            for (int b = 0, ib = 0; b < s; ++b) {
                if (b == best + 1) continue;
                double v = state.m_c(a, b);
                if (a == best) v += state.m_c(best + 1, b);
                if (b == best) v += state.m_c(a, best + 1);
                if (a == best && b == best) v += state.m_c(best + 1, best + 1);
                next(ia, ib) = v;
                ++ib;
            }
            ++ia;
        }
        state.m_c = std::move(next);
        --s;
        state.mu.resize(std::max(s - 1, 0));
        for (int g2 = 0; g2 + 1 < s; ++g2) state.mu[g2] = state.m_c(g2, g2 + 1);
    }

    BorderSet merged;
    for (int g2 = 0; g2 + 1 < s; ++g2) merged.borders.push_back(segments[g2].second);
    return partition_from_borders(merged, rk);
}

Partition partition_from_borders(const BorderSet& bs, const Ranking& rk) {
    const int n = static_cast<int>(rk.order.size());
    std::vector<int> labels(n, 0);
    int cluster = 0;
    std::size_t next_border = 0;
    for (int pos = 0; pos < n; ++pos) {
        if (next_border < bs.borders.size() && pos == bs.borders[next_border]) {
            ++cluster;
            ++next_border;
        }
        labels[rk.order[pos]] = cluster;
    }
    return Partition::from_labels(std::move(labels));
}

PipelineResult lcp_pipeline(const Graph& g, const LcpParams& params, std::optional<int> fixed_c) {
    std::vector<int> core;
    std::vector<int> isolated;
    core.reserve(g.n);
    for (int i = 0; i < g.n; ++i) (g.degree[i] > 0 ? core : isolated).push_back(i);

    PipelineResult result;
    result.diagnostics.isolated_nodes = static_cast<int>(isolated.size());

    if (core.empty()) {
        result.partition = Partition::singletons(g.n);
        result.diagnostics.cluster_count = 0;
        result.diagnostics.total_cluster_count = g.n;
        return result;
    }

    // Induced subgraph on the degree>=1 core (edge endpoints are never
    // isolated, so the edge set carries over unchanged).
    std::vector<int> to_core(g.n, -1);
    for (std::size_t i = 0; i < core.size(); ++i) to_core[core[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> core_edges;
    core_edges.reserve(g.edges.size());
    for (auto [i, j] : g.edges) core_edges.emplace_back(to_core[i], to_core[j]);
    const Graph sub = Graph::from_edges(static_cast<int>(core.size()), std::move(core_edges));

    const ScaledLcpResult scaled = run_scaled_lcp(sub, params);
    result.diagnostics.beta2 = scaled.summary.beta2;
    result.diagnostics.beta3 = scaled.summary.beta3;
    result.diagnostics.power_converged = scaled.summary.converged;
    result.diagnostics.params_clamped = scaled.params_clamped;
    result.diagnostics.alpha_used = scaled.alpha_used;
    result.diagnostics.delta_used = scaled.delta_used;

    const Ranking rk = rank_nodes(scaled.summary.y2);
    Partition core_partition;
    if (fixed_c.has_value()) {
        const RelabeledGraph rg = relabel(sub, rk);
        core_partition = merge_to_c(bisect_to_depth(rg, *fixed_c), rk, sub, *fixed_c);
    } else {
        core_partition = partition_from_borders(estimate_clusters(rk, sub, 0.0), rk);
    }

    std::vector<int> labels(g.n, -1);
    for (std::size_t i = 0; i < core.size(); ++i) labels[core[i]] = core_partition.assignment[i];
    int next_cluster = core_partition.c;
    for (int node : isolated) labels[node] = next_cluster++;
    result.partition = Partition::from_labels(std::move(labels));

    result.diagnostics.cluster_count = core_partition.c;
    result.diagnostics.total_cluster_count = result.partition.c;
    result.diagnostics.modularity_value =
        g.link_count() > 0 ? modularity(g, result.partition) : 0.0;
    return result;
}

}  // namespace lcp

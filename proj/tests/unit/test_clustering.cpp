#include <doctest.h>

#include <cmath>

#include "lcp/bench.hpp"
#include "lcp/clustering.hpp"
#include "support/oracles.hpp"

using namespace lcp;

namespace {

/// Direct modularity of the 2-segment split of [0, n) after position r, on the
/// relabeled graph, via the defining sum.
double split_modularity(const Graph& g, const Ranking& rk, int r) {
    std::vector<int> labels(g.n);
    for (int pos = 0; pos < g.n; ++pos) labels[rk.order[pos]] = pos < r ? 0 : 1;
    return oracle::modularity_direct(g, labels);
}

Ranking identity_ranking(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return rank_nodes(v);
}

}  // namespace

TEST_CASE("rank_nodes orders by value with stable ties") {
    Eigen::VectorXd y(3);
    y << 0.3, -0.2, 0.1;
    const Ranking rk = rank_nodes(y);
    CHECK(rk.order == std::vector<int>{1, 2, 0});
    CHECK(rk.rank == std::vector<int>{2, 0, 1});
    for (int pos = 1; pos < 3; ++pos) CHECK(rk.sorted_y2[pos] >= rk.sorted_y2[pos - 1]);

    const Ranking ties = rank_nodes(Eigen::VectorXd::Zero(4));
    CHECK(ties.order == std::vector<int>{0, 1, 2, 3});

    Eigen::VectorXd bad(2);
    bad << 0.0, std::nan("");
    CHECK_THROWS_AS(rank_nodes(bad), std::invalid_argument);
}

TEST_CASE("relabeling by the barbell ranking exposes the two blocks") {
    const Graph g = oracle::barbell();
    Eigen::VectorXd y(6);
    y << -3, -2, -1, 1, 2, 3;  // natural order: triangles {0,1,2} and {3,4,5}
    const Ranking rk = rank_nodes(y);
    const RelabeledGraph rg = relabel(g, rk);
    // Block-diagonal away from the single bridge at positions (2,3).
    for (int p = 0; p < 3; ++p)
        for (int q : rg.row(p)) CHECK((q < 3 || (p == 2 && q == 3)));
    for (int p = 3; p < 6; ++p)
        for (int q : rg.row(p)) CHECK((q >= 3 || (p == 3 && q == 2)));
}

TEST_CASE("threshold clustering on consecutive gaps") {
    Eigen::VectorXd y(4);
    y << 0.10, 0.12, 0.50, 0.52;
    const Ranking rk = rank_nodes(y);
    const Partition two = threshold_clusters(rk, 0.2);
    CHECK(two.c == 2);
    CHECK(two.assignment == std::vector<int>{0, 0, 1, 1});

    CHECK(threshold_clusters(rk, 1e18).c == 1);
    CHECK(threshold_clusters(rk, 0.0).c == 4);
}

TEST_CASE("bisection scores equal direct split modularity everywhere") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto [g, planted] = generate_ssbm({80, 2, 16.0, 4.0, seed + 50});
        if (g.min_degree() < 1 || g.link_count() == 0) continue;
        // Random ranking: the identity holds for any permutation.
        SplitMix64 rng(seed);
        Eigen::VectorXd noise(g.n);
        for (int i = 0; i < g.n; ++i) noise[i] = rng.next_u01();
        const Ranking rk = rank_nodes(noise);
        const RelabeledGraph rg = relabel(g, rk);
        const auto scores = bisection_scores(rg, 0, g.n);
        for (int r = 1; r < g.n; ++r)
            CHECK(scores[r - 1] == doctest::Approx(split_modularity(g, rk, r)).epsilon(1e-12));
    }
}

TEST_CASE("recursive estimation on the barbell finds the bridge") {
    const Graph g = oracle::barbell();
    Eigen::VectorXd y(6);
    y << -3, -2, -1, 1, 2, 3;
    const Ranking rk = rank_nodes(y);
    const BorderSet bs = estimate_clusters(rk, g, 0.0);
    CHECK(bs.borders == std::vector<int>{3});
    const Partition p = partition_from_borders(bs, rk);
    CHECK(modularity(g, p) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("recursive estimation declines to split K3") {
    const Graph g = oracle::complete(3);
    const Ranking rk = identity_ranking(3);
    const BorderSet bs = estimate_clusters(rk, g, 0.0);
    CHECK(bs.borders.empty());
    // Best 2-split of K3 has m = -2/9 < 0.
    const auto scores = bisection_scores(relabel(g, rk), 0, 3);
    for (double s : scores) CHECK(s == doctest::Approx(-2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("estimated partitions are contiguous with non-negative modularity") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto [g, planted] = generate_ssbm({90, 3, 18.0, 1.5, seed + 11});
        if (g.min_degree() < 1) continue;
        SplitMix64 rng(seed);
        Eigen::VectorXd noise(g.n);
        for (int i = 0; i < g.n; ++i) noise[i] = rng.next_u01();
        const Ranking rk = rank_nodes(noise);
        const BorderSet bs = estimate_clusters(rk, g, 0.0);
        const Partition p = partition_from_borders(bs, rk);
        CHECK(modularity(g, p) >= 0.0);
        // Clusters are contiguous rank segments.
        for (int pos = 1; pos < g.n; ++pos) {
            const int a = p.assignment[rk.order[pos - 1]];
            const int b = p.assignment[rk.order[pos]];
            CHECK(b >= a);
            CHECK(b - a <= 1);
        }
        // Returned partition beats the best single split.
        const auto scores = bisection_scores(relabel(g, rk), 0, g.n);
        const double best_single = *std::max_element(scores.begin(), scores.end());
        CHECK(modularity(g, p) >= std::max(0.0, best_single) - 1e-12);
    }
}

TEST_CASE("merge state and fixed-count merging") {
    const Graph g = oracle::barbell();
    Eigen::VectorXd y(6);
    y << -3, -2, -1, 1, 2, 3;
    const Ranking rk = rank_nodes(y);
    const RelabeledGraph rg = relabel(g, rk);

    BorderSet bs;
    bs.borders = {2, 3, 5};  // segments {0,1},{2},{3,4},{5}
    const MergeState state = build_merge_state(rg, bs);
    CHECK(state.m_c.rows() == 4);
    CHECK((state.m_c - state.m_c.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(state.m_c.sum() == doctest::Approx(0.0).epsilon(1e-9));
    // Quadratic-form diagonal reproduces the 4-way partition modularity.
    const Partition p4 = partition_from_borders(bs, rk);
    CHECK(state.m_c.trace() / (2.0 * g.link_count()) ==
          doctest::Approx(modularity(g, p4)).epsilon(1e-12));

    const Partition merged = merge_to_c(bs, rk, g, 2);
    CHECK(merged.c == 2);
    CHECK(merged.assignment == std::vector<int>{0, 0, 0, 1, 1, 1});

    // Already at the target count: unchanged.
    BorderSet two;
    two.borders = {3};
    const Partition same = merge_to_c(two, rk, g, 2);
    CHECK(same.assignment == std::vector<int>{0, 0, 0, 1, 1, 1});

    CHECK_THROWS_AS(merge_to_c(two, rk, g, 5), std::invalid_argument);

    // Merging preserves segment contiguity.
    const Partition three = merge_to_c(bs, rk, g, 3);
    for (int pos = 1; pos < 6; ++pos)
        CHECK(three.assignment[rk.order[pos]] - three.assignment[rk.order[pos - 1]] >= 0);
}

TEST_CASE("adjacent merge picks the argmax of mu") {
    // Segments {0,1} and {2} share two links; merging them damages modularity
    // least, so mu_0 must win over mu_1|mu_2.
    const Graph g = oracle::barbell();
    const Ranking rk = identity_ranking(6);
    BorderSet bs;
    bs.borders = {2, 3, 5};
    const MergeState state = build_merge_state(relabel(g, rk), bs);
    int best = 0;
    for (int i = 1; i < state.mu.size(); ++i)
        if (state.mu[i] > state.mu[best]) best = i;
    CHECK(best == 0);
    const Partition after = merge_to_c(bs, rk, g, 3);
    CHECK(after.assignment[0] == after.assignment[1]);
    CHECK(after.assignment[0] == after.assignment[2]);
}

TEST_CASE("pipeline clusters two disjoint K4 exactly") {
    const Graph g = oracle::disjoint_cliques(4, 2);
    LcpParams params;
    params.alpha = 0.9;
    params.delta = 1e-3;
    params.seed = 5;
    params.scale_iterations = 4;
    const PipelineResult result = lcp_pipeline(g, params);
    CHECK(result.partition.c == 2);
    CHECK(result.diagnostics.cluster_count == 2);
    CHECK(result.diagnostics.modularity_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(modularity(g, result.partition) == doctest::Approx(0.5).epsilon(1e-12));

    // Determinism: same seed, same partition.
    const PipelineResult again = lcp_pipeline(g, params);
    CHECK(again.partition.assignment == result.partition.assignment);
}

TEST_CASE("pipeline fixed-c mode returns the requested count") {
    const auto [g, planted] = generate_ssbm({120, 4, 24.0, 1.0, 3});
    REQUIRE(g.min_degree() >= 1);
    LcpParams params;
    params.seed = 11;
    params.scale_iterations = 6;
    const PipelineResult fixed = lcp_pipeline(g, params, 4);
    CHECK(fixed.partition.c == 4);
    CHECK(adjusted_rand_index(fixed.partition, planted) >= 0.95);

    const PipelineResult at3 = lcp_pipeline(g, params, 3);
    CHECK(at3.partition.c == 3);
}

TEST_CASE("pipeline splits isolated nodes into singletons") {
    // Two K4 plus two isolated nodes.
    std::vector<std::pair<int, int>> edges;
    oracle::append_clique(edges, 0, 4);
    oracle::append_clique(edges, 4, 4);
    const Graph g = Graph::from_edges(10, std::move(edges));
    LcpParams params;
    params.seed = 2;
    params.scale_iterations = 3;
    const PipelineResult result = lcp_pipeline(g, params);
    CHECK(result.diagnostics.isolated_nodes == 2);
    CHECK(result.diagnostics.cluster_count == 2);
    CHECK(result.diagnostics.total_cluster_count == 4);
    CHECK(result.partition.c == 4);
    CHECK(result.partition.sizes[result.partition.assignment[8]] == 1);
    CHECK(result.partition.sizes[result.partition.assignment[9]] == 1);
}

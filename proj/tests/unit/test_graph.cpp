#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lcp/graph.hpp"
#include "support/oracles.hpp"

using namespace lcp;

TEST_CASE("edge list parsing builds valid graphs") {
    const Graph k3 = from_edge_list("0 1\n1 2\n2 0");
    CHECK(k3.n == 3);
    CHECK(k3.link_count() == 3);
    CHECK(k3.degree == std::vector<int>{2, 2, 2});

    const Graph p3 = from_edge_list("0 1\n1 2");
    CHECK(p3.degree == std::vector<int>{1, 2, 1});

    CHECK_THROWS_AS(from_edge_list("0 0"), std::runtime_error);
    CHECK_THROWS_AS(from_edge_list("0 1\n1 0"), std::runtime_error);  // duplicate
    CHECK_THROWS_AS(from_edge_list("0 x"), std::runtime_error);

    const Graph commented = from_edge_list("# nodes 5\n# a comment\n\n0 1\n");
    CHECK(commented.n == 5);
    CHECK(commented.degree[4] == 0);
}

TEST_CASE("edge list and partition files round-trip") {
    const Graph g = oracle::barbell();
    const std::string edge_path = "test_roundtrip_edges.txt";
    save_edge_list(g, edge_path);
    const Graph loaded = load_edge_list(edge_path);
    CHECK(loaded.n == g.n);
    CHECK(loaded.edges == g.edges);

    Partition p = Partition::from_labels({0, 0, 0, 1, 1, 1});
    const std::string part_path = "test_roundtrip_partition.txt";
    save_partition(p, part_path);
    const Partition q = load_partition(part_path);
    CHECK(q.assignment == p.assignment);
    std::remove(edge_path.c_str());
    std::remove(part_path.c_str());
}

TEST_CASE("common_neighbors matches the dense A^2 oracle") {
    const Graph k3 = oracle::complete(3);
    CHECK(common_neighbors(k3, 0, 1) == 1);
    const Graph p3 = oracle::path(3);
    CHECK(common_neighbors(p3, 0, 2) == 1);
    CHECK(common_neighbors(p3, 0, 1) == 0);
    const Graph k4 = oracle::complete(4);
    for (auto [i, j] : k4.edges) CHECK(common_neighbors(k4, i, j) == 2);

    CHECK_THROWS_AS(common_neighbors(k3, 0, 3), std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = oracle::random_er(50, 0.15, seed);
        const Eigen::MatrixXd a2 = oracle::dense_a_squared(g);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (i != j) CHECK(common_neighbors(g, i, j) == doctest::Approx(a2(i, j)));
    }
}

TEST_CASE("degree identity over adjacent pairs") {
    // d_i = |N_i \ N_j| + |N_i cap N_j| with both sets built independently.
    const Graph g = oracle::random_er(40, 0.2, 99);
    for (auto [i, j] : g.edges) {
        std::set<int> ni(g.row(i).begin(), g.row(i).end());
        std::set<int> nj(g.row(j).begin(), g.row(j).end());
        int shared = 0;
        int only = 0;
        for (int v : ni) (nj.count(v) ? shared : only)++;
        CHECK(g.degree[i] == only + shared);
        CHECK(common_neighbors(g, i, j) == shared);
    }
}

TEST_CASE("modularity matches hand values and stays within [-1, 1]") {
    const Graph barbell = oracle::barbell();
    const Partition triangles = Partition::from_labels({0, 0, 0, 1, 1, 1});
    CHECK(modularity(barbell, triangles) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));

    CHECK(modularity(barbell, Partition::single_cluster(6)) == doctest::Approx(0.0).epsilon(1e-12));

    const Graph k3 = oracle::complete(3);
    CHECK(modularity(k3, Partition::singletons(3)) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(modularity(Graph::from_edges(3, {}), Partition::single_cluster(3)),
                    std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph g = oracle::random_er(30, 0.2, seed, true);
        SplitMix64 rng(seed);
        std::vector<int> labels(g.n);
        for (int& v : labels) v = static_cast<int>(rng.next_below(4));
        const Partition p = Partition::compact_labels(labels);
        const double m = modularity(g, p);
        CHECK(m >= -1.0);
        CHECK(m <= 1.0);
        CHECK(m == doctest::Approx(oracle::modularity_direct(g, p.assignment)).epsilon(1e-12));
    }
}

TEST_CASE("triangle counts") {
    CHECK(triangle_count(oracle::complete(3)) == 1);
    CHECK(triangle_count(oracle::complete(4)) == 4);
    CHECK(triangle_count(oracle::path(3)) == 0);

    // Brute-force triple enumeration on a random graph.
    const Graph g = oracle::random_er(30, 0.25, 5);
    long long expected = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            for (int k = j + 1; k < g.n; ++k)
                if (g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k)) ++expected;
    CHECK(triangle_count(g) == expected);
}

TEST_CASE("ssbm generation: planted sizes, determinism, feasibility") {
    const SsbmConfig cfg{1000, 4, 26.0, 0.67, 42};
    const auto [g, planted] = generate_ssbm(cfg);
    CHECK(planted.sizes == std::vector<int>{250, 250, 250, 250});

    const auto [g2, planted2] = generate_ssbm(cfg);
    CHECK(g.edges == g2.edges);

    const auto [g3, planted3] = generate_ssbm({999, 3, 20.0, 0.5, 7});
    CHECK(planted3.sizes == std::vector<int>{333, 333, 333});

    CHECK_THROWS_AS(generate_ssbm({10, 2, 11.0, 0.5, 1}), std::invalid_argument);  // p_in > 1
    CHECK_THROWS_AS(generate_ssbm({10, 3, 2.0, 0.5, 1}), std::invalid_argument);   // 3 !| 10
}

TEST_CASE("ssbm empirical mean degree tracks the expectation") {
    const int n = 1000;
    const double b_in = 26.0, b_out = 0.67;
    const double expected = expected_degree(4, b_in, b_out);
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto [g, planted] = generate_ssbm({n, 4, b_in, b_out, seed});
        mean += 2.0 * static_cast<double>(g.link_count()) / n;
    }
    mean /= 20.0;
    CHECK(std::abs(mean - expected) / expected < 0.05);
}

TEST_CASE("expected degree and detectability margin") {
    CHECK(expected_degree(4, 26.0, 0.67) == doctest::Approx(7.0025).epsilon(1e-12));
    CHECK(expected_degree(1, 3.25, 0.0) == doctest::Approx(3.25));
    CHECK(expected_degree(2, 12.25, 1.75) == doctest::Approx(7.0).epsilon(1e-12));

    const auto margin = detectability_margin(2, 12.25, 1.75);
    CHECK(margin.margin == doctest::Approx(10.5 - 2.0 * std::sqrt(7.0)).epsilon(1e-12));
    CHECK(margin.detectable);

    CHECK_FALSE(detectability_margin(3, 5.0, 5.0).detectable);

    // c=8 at fixed mean degree 7: threshold sits at 8*sqrt(7).
    const double gap = 8.0 * std::sqrt(7.0);
    const double b_in = 7.0 + 7.0 * gap / 8.0;
    const auto at_threshold = detectability_margin(8, b_in, b_in - gap);
    CHECK(at_threshold.margin == doctest::Approx(0.0).epsilon(1e-9));
}

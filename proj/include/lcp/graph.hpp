#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lcp {

/// Immutable undirected simple graph in compressed sparse adjacency form.
/// Invariants: no self-loops, no duplicate edges, neighbor lists sorted
/// ascending, degree[i] == row length, sum(degree) == 2L.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // (i,j) with i<j, lexicographic
    std::vector<int> offsets;                // CSR offsets, size n+1
    std::vector<int> neighbors;              // 2L entries, each row ascending
    std::vector<int> degree;                 // size n

    long long link_count() const { return static_cast<long long>(edges.size()); }

    std::span<const int> row(int i) const {
        return {neighbors.data() + offsets[i], neighbors.data() + offsets[i + 1]};
    }

    bool has_edge(int i, int j) const;

    int max_degree() const;
    int min_degree() const;

    /// Builds the CSR structure from an edge set; validates simple-graph
    /// invariants and throws std::invalid_argument on violation.
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);
};

/// Node -> cluster assignment with dense cluster ids 0..c-1.
struct Partition {
    std::vector<int> assignment;
    int c = 0;
    std::vector<int> sizes;

    int n() const { return static_cast<int>(assignment.size()); }

    /// Validates that labels are exactly 0..c-1 with every id present.
    static Partition from_labels(std::vector<int> labels);

    /// Renumbers arbitrary labels densely in order of first appearance.
    static Partition compact_labels(const std::vector<int>& labels);

    static Partition single_cluster(int n);
    static Partition singletons(int n);
};

/// Symmetric stochastic block model configuration. Link probabilities are
/// b_in/n within a planted cluster and b_out/n across clusters.
struct SsbmConfig {
    int n = 0;
    int c = 1;
    double b_in = 0.0;
    double b_out = 0.0;
    std::uint64_t seed = 0;
};

// -- construction / I/O ------------------------------------------------------

/// Parses a line-oriented edge list ("i j" per line, 0-based). Blank lines and
/// `#` comments are skipped; a `# nodes N` comment fixes the node count.
/// Throws std::runtime_error naming the offending line on malformed input,
/// self-loops, or duplicate edges.
Graph from_edge_list(std::istream& input);
Graph from_edge_list(const std::string& text);

Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

/// Partition file: one "node cluster" pair per line.
Partition load_partition(const std::string& path);
void save_partition(const Partition& p, const std::string& path);

// -- neighborhood arithmetic and quality -------------------------------------

/// |N_i ∩ N_j| by sorted-list intersection.
int common_neighbors(const Graph& g, int i, int j);

/// Newman-Girvan modularity of a partition, in [-1, 1].
double modularity(const Graph& g, const Partition& p);

/// Number of unordered node triples forming triangles, by ordered neighbor
/// intersection (no matrix products involved).
long long triangle_count(const Graph& g);

// -- SSBM --------------------------------------------------------------------

/// Samples an SSBM graph together with its planted partition (equal-size
/// contiguous blocks). One Bernoulli draw per unordered pair from a
/// counter-based generator, so a fixed seed gives an identical edge set
/// regardless of surrounding computation.
std::pair<Graph, Partition> generate_ssbm(const SsbmConfig& cfg);

/// E[D] = (b_in + (c-1) b_out) / c.
double expected_degree(int c, double b_in, double b_out);

/// margin = (b_in - b_out) - c * sqrt(E[D]); communities are theoretically
/// detectable iff the margin is positive.
struct DetectabilityMargin {
    double margin;
    bool detectable;
};
DetectabilityMargin detectability_margin(int c, double b_in, double b_out);

}  // namespace lcp

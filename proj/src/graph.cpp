#include "lcp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lcp/rng.hpp"

namespace lcp {

bool Graph::has_edge(int i, int j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
}

int Graph::max_degree() const {
    return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

int Graph::min_degree() const {
    return degree.empty() ? 0 : *std::min_element(degree.begin(), degree.end());
}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
    if (n < 0) throw std::invalid_argument("node count must be non-negative");
    for (auto& [i, j] : edge_list) {
        if (i == j) throw std::invalid_argument("self-loop at node " + std::to_string(i));
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= n) throw std::invalid_argument("node id out of range");
    }
    std::sort(edge_list.begin(), edge_list.end());
    auto dup = std::adjacent_find(edge_list.begin(), edge_list.end());
    if (dup != edge_list.end())
        throw std::invalid_argument("duplicate edge " + std::to_string(dup->first) + " " +
                                    std::to_string(dup->second));

    Graph g;
    g.n = n;
    g.edges = std::move(edge_list);
    g.degree.assign(n, 0);
    for (auto [i, j] : g.edges) {
        ++g.degree[i];
        ++g.degree[j];
    }
    g.offsets.assign(n + 1, 0);
    std::partial_sum(g.degree.begin(), g.degree.end(), g.offsets.begin() + 1);
    g.neighbors.resize(2 * g.edges.size());
    std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (auto [i, j] : g.edges) {
        g.neighbors[cursor[i]++] = j;
        g.neighbors[cursor[j]++] = i;
    }
    for (int i = 0; i < n; ++i)
        std::sort(g.neighbors.begin() + g.offsets[i], g.neighbors.begin() + g.offsets[i + 1]);
    return g;
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
    throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph from_edge_list(std::istream& input) {
    std::vector<std::pair<int, int>> edges;
    int declared_n = -1;
    int max_id = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream hdr(line.substr(first + 1));
            std::string key;
            long long value = 0;
            if (hdr >> key >> value && key == "nodes") {
                if (value < 0 || value > 100'000'000) parse_fail(line_no, "bad node count header");
                declared_n = static_cast<int>(value);
            }
            continue;
        }
        std::istringstream ss(line);
        long long i = 0, j = 0;
        if (!(ss >> i >> j)) parse_fail(line_no, "expected two node indices");
        std::string trailing;
        if (ss >> trailing) parse_fail(line_no, "unexpected trailing token '" + trailing + "'");
        if (i < 0 || j < 0) parse_fail(line_no, "negative node id");
        if (i == j) parse_fail(line_no, "self-loop at node " + std::to_string(i));
        if (i > 100'000'000 || j > 100'000'000) parse_fail(line_no, "node id too large");
        edges.emplace_back(static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j)));
        max_id = std::max(max_id, static_cast<int>(std::max(i, j)));
    }
    int n = max_id + 1;
    if (declared_n >= 0) {
        if (declared_n < n) throw std::runtime_error("node count header smaller than max node id + 1");
        n = declared_n;
    }
    try {
        return Graph::from_edges(n, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("edge list invalid: ") + e.what());
    }
}

Graph from_edge_list(const std::string& text) {
    std::istringstream ss(text);
    return from_edge_list(ss);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    return from_edge_list(in);
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list file: " + path);
    out << "# nodes " << g.n << "\n";
    for (auto [i, j] : g.edges) out << i << " " << j << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Partition load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open partition file: " + path);
    std::vector<std::pair<int, int>> rows;
    int max_node = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        int node = 0, cluster = 0;
        if (!(ss >> node >> cluster) || node < 0 || cluster < 0)
            throw std::runtime_error("partition parse error at line " + std::to_string(line_no));
        rows.emplace_back(node, cluster);
        max_node = std::max(max_node, node);
    }
    std::vector<int> labels(max_node + 1, -1);
    for (auto [node, cluster] : rows) {
        if (labels[node] != -1) throw std::runtime_error("duplicate node in partition file");
        labels[node] = cluster;
    }
    for (int i = 0; i <= max_node; ++i)
        if (labels[i] == -1) throw std::runtime_error("partition file misses node " + std::to_string(i));
    return Partition::compact_labels(labels);
}

void save_partition(const Partition& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write partition file: " + path);
    for (int i = 0; i < p.n(); ++i) out << i << " " << p.assignment[i] << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Partition Partition::from_labels(std::vector<int> labels) {
    Partition p;
    p.assignment = std::move(labels);
    int c = 0;
    for (int v : p.assignment) {
        if (v < 0) throw std::invalid_argument("negative cluster id");
        c = std::max(c, v + 1);
    }
    p.c = c;
    p.sizes.assign(c, 0);
    for (int v : p.assignment) ++p.sizes[v];
    for (int i = 0; i < c; ++i)
        if (p.sizes[i] == 0) throw std::invalid_argument("cluster ids not dense: id " + std::to_string(i) + " unused");
    return p;
}

Partition Partition::compact_labels(const std::vector<int>& labels) {
    std::vector<int> remap;
    std::vector<int> dense(labels.size());
    std::vector<int> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int v = labels[i];
        if (v < 0) throw std::invalid_argument("negative cluster id");
        if (v >= static_cast<int>(seen.size())) seen.resize(v + 1, -1);
        if (seen[v] == -1) {
            seen[v] = static_cast<int>(remap.size());
            remap.push_back(v);
        }
        dense[i] = seen[v];
    }
    Partition p;
    p.assignment = std::move(dense);
    p.c = static_cast<int>(remap.size());
    p.sizes.assign(p.c, 0);
    for (int v : p.assignment) ++p.sizes[v];
    return p;
}

Partition Partition::single_cluster(int n) {
    Partition p;
    p.assignment.assign(n, 0);
    p.c = n > 0 ? 1 : 0;
    if (n > 0) p.sizes = {n};
    return p;
}

Partition Partition::singletons(int n) {
    Partition p;
    p.assignment.resize(n);
    std::iota(p.assignment.begin(), p.assignment.end(), 0);
    p.c = n;
    p.sizes.assign(n, 1);
    return p;
}

int common_neighbors(const Graph& g, int i, int j) {
    if (i < 0 || i >= g.n || j < 0 || j >= g.n) throw std::invalid_argument("node id out of range");
    if (i == j) throw std::invalid_argument("common_neighbors requires distinct nodes");
    auto a = g.row(i);
    auto b = g.row(j);
    int count = 0;
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
        if (a[x] < b[y]) ++x;
        else if (a[x] > b[y]) ++y;
        else { ++count; ++x; ++y; }
    }
    return count;
}

double modularity(const Graph& g, const Partition& p) {
    if (g.link_count() == 0) throw std::invalid_argument("modularity of an empty graph is undefined");
    if (p.n() != g.n) throw std::invalid_argument("partition does not cover the graph");
    const double two_l = 2.0 * static_cast<double>(g.link_count());
    std::vector<double> intra(p.c, 0.0), deg_sum(p.c, 0.0);
    for (auto [i, j] : g.edges)
        if (p.assignment[i] == p.assignment[j]) intra[p.assignment[i]] += 2.0;
    for (int i = 0; i < g.n; ++i) deg_sum[p.assignment[i]] += g.degree[i];
    double m = 0.0;
    for (int c = 0; c < p.c; ++c) m += intra[c] / two_l - (deg_sum[c] / two_l) * (deg_sum[c] / two_l);
    return m;
}

long long triangle_count(const Graph& g) {
    long long total = 0;
    // For each edge (i,j) with i<j, count common neighbors k>j; every triangle
    // is found exactly once at its lexicographically smallest edge.
    for (auto [i, j] : g.edges) {
        auto a = g.row(i);
        auto b = g.row(j);
        auto x = std::upper_bound(a.begin(), a.end(), j);
        auto y = std::upper_bound(b.begin(), b.end(), j);
        while (x != a.end() && y != b.end()) {
            if (*x < *y) ++x;
            else if (*x > *y) ++y;
            else { ++total; ++x; ++y; }
        }
    }
    return total;
}

std::pair<Graph, Partition> generate_ssbm(const SsbmConfig& cfg) {
    if (cfg.n <= 0 || cfg.c <= 0) throw std::invalid_argument("SSBM requires positive n and c");
    if (cfg.n % cfg.c != 0) throw std::invalid_argument("SSBM cluster count must divide node count");
    const double p_in = cfg.b_in / cfg.n;
    const double p_out = cfg.b_out / cfg.n;
    if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
        throw std::invalid_argument("SSBM link probability outside [0,1]");

    const int block = cfg.n / cfg.c;
    std::vector<int> labels(cfg.n);
    for (int i = 0; i < cfg.n; ++i) labels[i] = i / block;

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(0.5 * cfg.n * (cfg.b_in / cfg.c + cfg.b_out)) + 64);
    std::uint64_t counter = 0;
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j, ++counter) {
            const double p = labels[i] == labels[j] ? p_in : p_out;
            if (p > 0.0 && counter_u01(cfg.seed, counter) < p) edges.emplace_back(i, j);
        }
    }
    return {Graph::from_edges(cfg.n, std::move(edges)), Partition::from_labels(std::move(labels))};
}

double expected_degree(int c, double b_in, double b_out) {
    if (c < 1) throw std::invalid_argument("cluster count must be at least 1");
    return (b_in + (c - 1) * b_out) / c;
}

DetectabilityMargin detectability_margin(int c, double b_in, double b_out) {
    if (c < 2) throw std::invalid_argument("detectability threshold needs c >= 2");
    const double margin = (b_in - b_out) - c * std::sqrt(expected_degree(c, b_in, b_out));
    return {margin, margin > 0.0};
}

}  // namespace lcp

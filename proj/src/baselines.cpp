#include "lcp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "lcp/numerics.hpp"
#include "lcp/process.hpp"

namespace lcp {

namespace {

constexpr double kGainEps = 1e-12;

/// Weighted graph with explicit diagonal entries. The diagonal weight of an
/// aggregated node equals twice the internal link weight, so strengths and
/// modularity survive aggregation unchanged.
struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;  // includes (i, w_ii)
    std::vector<double> strength;
    double total = 0.0;  // sum of strengths = 2M

    static WeightedGraph from_graph(const Graph& g) {
        WeightedGraph wg;
        wg.n = g.n;
        wg.adj.resize(g.n);
        wg.strength.assign(g.n, 0.0);
        for (int i = 0; i < g.n; ++i) {
            wg.adj[i].reserve(g.degree[i]);
            for (int j : g.row(i)) wg.adj[i].emplace_back(j, 1.0);
            wg.strength[i] = g.degree[i];
        }
        wg.total = 2.0 * static_cast<double>(g.link_count());
        return wg;
    }
};

double weighted_modularity(const WeightedGraph& wg, const std::vector<int>& comm, int n_comm) {
    std::vector<double> internal(n_comm, 0.0), tot(n_comm, 0.0);
    for (int i = 0; i < wg.n; ++i) {
        tot[comm[i]] += wg.strength[i];
        for (auto [j, w] : wg.adj[i])
            if (comm[i] == comm[j]) internal[comm[i]] += w;
    }
    double m = 0.0;
    for (int c = 0; c < n_comm; ++c) {
        const double frac = tot[c] / wg.total;
        m += internal[c] / wg.total - frac * frac;
    }
    return m;
}

/// One Louvain level: local moves until stable. comm is rewritten with dense
/// community ids; returns true if any node moved.
bool local_moving_phase(const WeightedGraph& wg, std::vector<int>& comm) {
    const int n = wg.n;
    comm.resize(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> sigma_tot(wg.strength);

    std::vector<double> k_to(n, 0.0);
    std::vector<int> touched;
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i < n; ++i) {
            const int c_old = comm[i];
            touched.clear();
            for (auto [j, w] : wg.adj[i]) {
                if (j == i) continue;
                const int c = comm[j];
                if (k_to[c] == 0.0) touched.push_back(c);
                k_to[c] += w;
            }
            sigma_tot[c_old] -= wg.strength[i];

            // gain(c) ~ k_{i,c} - s_i * Sigma_tot(c) / 2M, community c taken
            // without node i.
            const double self_gain =
                k_to[c_old] - wg.strength[i] * sigma_tot[c_old] / wg.total;
            int best = c_old;
            double best_gain = self_gain;
            std::sort(touched.begin(), touched.end());
            for (int c : touched) {
                if (c == c_old) continue;
                const double gain = k_to[c] - wg.strength[i] * sigma_tot[c] / wg.total;
                if (gain > best_gain + kGainEps) {
                    best_gain = gain;
                    best = c;
                }
            }
            sigma_tot[best] += wg.strength[i];
            if (best != c_old) {
                comm[i] = best;
                moved = true;
                any_move = true;
            }
            for (int c : touched) k_to[c] = 0.0;
        }
    }

    // Compact community ids.
    std::vector<int> remap(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (remap[comm[i]] == -1) remap[comm[i]] = next++;
        comm[i] = remap[comm[i]];
    }
    return any_move;
}

WeightedGraph aggregate(const WeightedGraph& wg, const std::vector<int>& comm, int n_comm) {
    WeightedGraph out;
    out.n = n_comm;
    out.adj.resize(n_comm);
    out.strength.assign(n_comm, 0.0);
    out.total = wg.total;

    std::vector<double> row(n_comm, 0.0);
    std::vector<int> touched;
    std::vector<std::vector<std::pair<int, double>>> rows(n_comm);
    for (int i = 0; i < wg.n; ++i) {
        for (auto [j, w] : wg.adj[i]) {
            const int c = comm[j];
            if (row[c] == 0.0) touched.push_back(c);
            row[c] += w;
        }
        const int ci = comm[i];
        for (int c : touched) {
            rows[ci].emplace_back(c, row[c]);
            row[c] = 0.0;
        }
        touched.clear();
    }
    for (int c = 0; c < n_comm; ++c) {
        auto& merged = rows[c];
        std::sort(merged.begin(), merged.end());
        for (const auto& entry : merged) {
            if (!out.adj[c].empty() && out.adj[c].back().first == entry.first)
                out.adj[c].back().second += entry.second;
            else
                out.adj[c].push_back(entry);
        }
        for (auto [j, w] : out.adj[c]) out.strength[c] += w;
    }
    return out;
}

}  // namespace

Partition louvain(const Graph& g, std::uint64_t seed) {
    (void)seed;
    if (g.link_count() < 1) throw std::invalid_argument("louvain needs at least one link");

    WeightedGraph level = WeightedGraph::from_graph(g);
    std::vector<int> node_to_comm(g.n);
    std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

    double prev_m = weighted_modularity(level, node_to_comm, g.n);
    for (int guard = 0; guard < 1000; ++guard) {
        std::vector<int> comm;
        const bool moved = local_moving_phase(level, comm);
        const int n_comm = *std::max_element(comm.begin(), comm.end()) + 1;
        if (!moved) break;
        const double m = weighted_modularity(level, comm, n_comm);
        for (int i = 0; i < g.n; ++i) node_to_comm[i] = comm[node_to_comm[i]];
        if (m - prev_m < kGainEps) break;
        prev_m = m;
        if (n_comm == level.n) break;
        level = aggregate(level, comm, n_comm);
    }
    return Partition::compact_labels(node_to_comm);
}

namespace {

void newman_recurse(const Eigen::MatrixXd& b, double inv_4l, std::vector<int>& group,
                    std::vector<int>& labels, int& next_label) {
    const int m = static_cast<int>(group.size());
    const int label = next_label++;
    for (int idx : group) labels[idx] = label;
    if (m < 2) return;

    Eigen::MatrixXd mg(m, m);
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) mg(a, c) = b(group[a], group[c]);
    for (int a = 0; a < m; ++a) mg(a, a) -= mg.row(a).sum();

    const SymEigs eig = dense_sym_eigs(mg);
    if (eig.values[0] <= kGainEps) return;  // indivisible

    std::vector<int> left, right;
    double gain = 0.0;
    {
        Eigen::VectorXd y(m);
        for (int a = 0; a < m; ++a) y[a] = eig.vectors(a, 0) > 0.0 ? 1.0 : -1.0;
        gain = y.dot(mg * y) * inv_4l;
        for (int a = 0; a < m; ++a) (y[a] > 0.0 ? left : right).push_back(group[a]);
    }
    if (!(gain > kGainEps) || left.empty() || right.empty()) return;

    --next_label;  // the group label is replaced by the two halves
    newman_recurse(b, inv_4l, left, labels, next_label);
    newman_recurse(b, inv_4l, right, labels, next_label);
}

}  // namespace

Partition newman_spectral(const Graph& g) {
    if (g.link_count() < 1) throw std::invalid_argument("newman_spectral needs at least one link");
    const double two_l = 2.0 * static_cast<double>(g.link_count());

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [i, j] : g.edges) {
        b(i, j) += 1.0;
        b(j, i) += 1.0;
    }
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) b(i, j) -= g.degree[i] * static_cast<double>(g.degree[j]) / two_l;

    std::vector<int> all(g.n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> labels(g.n, 0);
    int next_label = 0;
    newman_recurse(b, 1.0 / (2.0 * two_l), all, labels, next_label);
    return Partition::compact_labels(labels);
}

namespace {

constexpr double kImagTol = 1e-6;
constexpr double kRadiusMargin = 1e-9;

bool is_real(const std::complex<double>& z) {
    return std::abs(z.imag()) <= kImagTol * std::max(1.0, std::abs(z.real()));
}

NbtSpectrum count_from_values(std::vector<std::complex<double>> values, bool real_only) {
    NbtSpectrum spec;
    spec.values = std::move(values);
    double lambda1 = 0.0;
    bool found = false;
    for (const auto& z : spec.values) {
        if (is_real(z) && (!found || z.real() > lambda1)) {
            lambda1 = z.real();
            found = true;
        }
    }
    if (!found || lambda1 <= 0.0) return spec;  // count 0, degenerate spectrum
    spec.lambda1 = lambda1;
    spec.radius = std::sqrt(lambda1);
    for (const auto& z : spec.values) {
        if (real_only && !is_real(z)) continue;
        if (z.real() > spec.radius + kRadiusMargin) ++spec.count;
    }
    return spec;
}

}  // namespace

NbtSpectrum nbt_spectrum(const Graph& g) {
    if (2 * g.n > 4000) throw std::invalid_argument("nbt spectrum capped at 2000 nodes");
    const int n = g.n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (auto [i, j] : g.edges) {
        m(i, j) = 1.0;
        m(j, i) = 1.0;
    }
    for (int i = 0; i < n; ++i) {
        m(i, n + i) = 1.0 - g.degree[i];
        m(n + i, i) = 1.0;
    }
    return count_from_values(dense_nonsym_eigs(m), /*real_only=*/true);
}

int nbt_cluster_count(const Graph& g) { return nbt_spectrum(g).count; }

NbtSpectrum lcp_c_spectrum(const Graph& g, double alpha) {
    if (2 * g.n > 4000) throw std::invalid_argument("lcp_c spectrum capped at 2000 nodes");
    const int n = g.n;
    const HadamardA2 h = hadamard_a_a2(g);

    // Attraction block: I + alpha*(H - diag(Hu)) + (Delta - I), H = A o A^2 + A.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    std::vector<double> row_sum(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
            const double w = alpha * (h.counts[k] + 1.0);
            m(i, g.neighbors[k]) = w;
            row_sum[i] += w;
        }
    }
    for (int i = 0; i < n; ++i) {
        m(i, i) = 1.0 - row_sum[i] + (g.degree[i] - 1.0);
        m(i, n + i) = -(g.degree[i] - 1.0);
        m(n + i, i) = 1.0;
    }
    return count_from_values(dense_nonsym_eigs(m), /*real_only=*/false);
}

int lcp_c_count(const Graph& g, double alpha) { return lcp_c_spectrum(g, alpha).count; }

}  // namespace lcp

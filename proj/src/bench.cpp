#include "lcp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "lcp/baselines.hpp"
#include "lcp/rng.hpp"

namespace lcp {

std::pair<double, double> solve_bin_bout(int c, double d_av, double gap) {
    if (c < 2) throw std::invalid_argument("solve_bin_bout needs c >= 2");
    const double b_in = d_av + (c - 1) * gap / c;
    const double b_out = b_in - gap;
    if (b_out < 0.0)
        throw std::invalid_argument("gap " + std::to_string(gap) + " infeasible: b_out would be negative");
    return {b_in, b_out};
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("partitions cover different node counts");
    const long long n = a.n();
    std::unordered_map<long long, long long> cell;
    cell.reserve(a.c * 2);
    for (int i = 0; i < n; ++i)
        ++cell[static_cast<long long>(a.assignment[i]) * b.c + b.assignment[i]];

    const auto pairs = [](long long k) { return 0.5 * k * (k - 1); };
    double sum_cells = 0.0;
    for (const auto& [key, count] : cell) sum_cells += pairs(count);
    double sum_a = 0.0, sum_b = 0.0;
    for (int s : a.sizes) sum_a += pairs(s);
    for (int s : b.sizes) sum_b += pairs(s);

    const double total = pairs(n);
    const double expected = sum_a * sum_b / total;
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) return 1.0;  // both partitions trivial and identical
    return (sum_cells - expected) / (maximum - expected);
}

namespace {

int method_tag(const std::string& method) {
    if (method == "lcp") return 1;
    if (method == "lcp_n") return 2;
    if (method == "lcp_c") return 3;
    if (method == "nbt") return 4;
    if (method == "louvain") return 5;
    if (method == "newman") return 6;
    throw std::invalid_argument("unknown method '" + method + "'");
}

/// Clusters that contain at least one non-isolated node; keeps the estimated
/// community count comparable across methods when the generator produced
/// degree-0 nodes.
int core_cluster_count(const Graph& g, const Partition& p) {
    std::vector<char> seen(p.c, 0);
    int count = 0;
    for (int i = 0; i < g.n; ++i) {
        if (g.degree[i] == 0) continue;
        if (!seen[p.assignment[i]]) {
            seen[p.assignment[i]] = 1;
            ++count;
        }
    }
    return count;
}

void run_method_on_graph(const std::string& method, const Graph& g, const Partition& planted,
                         const SweepConfig& cfg, std::uint64_t graph_seed, SweepRow& row) {
    const auto t0 = std::chrono::steady_clock::now();
    const int tag = method_tag(method);
    if (tag == 3) {
        row.estimated_c = lcp_c_count(g, cfg.lcp.alpha);
        row.modularity_est = std::numeric_limits<double>::quiet_NaN();
        row.ari = std::numeric_limits<double>::quiet_NaN();
    } else if (tag == 4) {
        row.estimated_c = nbt_cluster_count(g);
        row.modularity_est = std::numeric_limits<double>::quiet_NaN();
        row.ari = std::numeric_limits<double>::quiet_NaN();
    } else {
        Partition estimated;
        if (tag == 1 || tag == 2) {
            LcpParams params = cfg.lcp;
            params.seed = seed_combine(graph_seed, static_cast<std::uint64_t>(tag));
            const PipelineResult result =
                tag == 1 ? lcp_pipeline(g, params)
                         : lcp_pipeline(g, params, std::optional<int>(cfg.c));
            estimated = std::move(result.partition);
            row.estimated_c = result.diagnostics.cluster_count;
        } else if (tag == 5) {
            estimated = louvain(g, graph_seed);
            row.estimated_c = core_cluster_count(g, estimated);
        } else {
            estimated = newman_spectral(g);
            row.estimated_c = core_cluster_count(g, estimated);
        }
        row.modularity_est = modularity(g, estimated);
        row.ari = adjusted_rand_index(estimated, planted);
    }
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.gaps.empty()) throw std::invalid_argument("sweep needs at least one gap value");
    if (cfg.repetitions < 1) throw std::invalid_argument("sweep needs at least one repetition");
    for (const auto& m : cfg.methods) method_tag(m);  // validate names up front

    const int gap_count = static_cast<int>(cfg.gaps.size());
    const int reps = cfg.repetitions;
    const int methods = static_cast<int>(cfg.methods.size());
    std::vector<SweepRow> rows(static_cast<std::size_t>(methods) * gap_count * reps);

    const int tasks = gap_count * reps;
    std::atomic<int> next_task{0};
    const auto worker = [&]() {
        for (;;) {
            const int task = next_task.fetch_add(1);
            if (task >= tasks) return;
            const int gap_idx = task / reps;
            const int rep = task % reps;
            const double gap = cfg.gaps[gap_idx];
            const std::uint64_t graph_seed =
                seed_combine(cfg.seed, static_cast<std::uint64_t>(gap_idx),
                             static_cast<std::uint64_t>(rep));

            Graph g;
            Partition planted;
            double m_planted = std::numeric_limits<double>::quiet_NaN();
            std::string graph_error;
            try {
                const auto [b_in, b_out] = solve_bin_bout(cfg.c, cfg.d_av, gap);
                SsbmConfig ssbm{cfg.n, cfg.c, b_in, b_out, graph_seed};
                auto generated = generate_ssbm(ssbm);
                g = std::move(generated.first);
                planted = std::move(generated.second);
                if (g.link_count() > 0) m_planted = modularity(g, planted);
            } catch (const std::exception& e) {
                graph_error = e.what();
            }

            for (int mi = 0; mi < methods; ++mi) {
                SweepRow& row = rows[(static_cast<std::size_t>(mi) * gap_count + gap_idx) * reps + rep];
                row.method = cfg.methods[mi];
                row.gap = gap;
                row.rep = rep;
                row.seed = graph_seed;
                row.modularity_planted = m_planted;
                if (!graph_error.empty()) {
                    row.error = graph_error;
                    continue;
                }
                try {
                    run_method_on_graph(cfg.methods[mi], g, planted, cfg, graph_seed, row);
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
        }
    };

    int thread_count = cfg.threads > 0 ? cfg.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::max(1, std::min(thread_count, tasks));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "# lcp sweep csv v1\n";
    out << "method,gap,rep,seed,estimated_c,modularity_est,modularity_planted,ari,runtime_ms\n";
    for (const auto& r : rows) {
        out << r.method << ',' << format_double(r.gap) << ',' << r.rep << ',' << r.seed << ',';
        if (r.error.empty()) {
            out << r.estimated_c << ',' << format_double(r.modularity_est) << ','
                << format_double(r.modularity_planted) << ',' << format_double(r.ari) << ','
                << format_double(r.runtime_ms);
        } else {
            out << ",," << format_double(r.modularity_planted) << ",,";
        }
        out << '\n';
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': bad number '" + value + "'");
    }
    if (pos != value.size())
        throw std::runtime_error("config key '" + key + "': bad number '" + value + "'");
    return v;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key == "n") cfg.n = static_cast<int>(parse_number(key, value));
        else if (key == "c") cfg.c = static_cast<int>(parse_number(key, value));
        else if (key == "d_av") cfg.d_av = parse_number(key, value);
        else if (key == "gaps") {
            cfg.gaps.clear();
            for (const auto& item : split_list(value)) cfg.gaps.push_back(parse_number(key, item));
        } else if (key == "reps") cfg.repetitions = static_cast<int>(parse_number(key, value));
        else if (key == "methods") cfg.methods = split_list(value);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number(key, value));
        else if (key == "alpha") cfg.lcp.alpha = parse_number(key, value);
        else if (key == "delta") cfg.lcp.delta = parse_number(key, value);
        else if (key == "scale_total") cfg.lcp.scale_fraction_total = parse_number(key, value);
        else if (key == "scale_iters") cfg.lcp.scale_iterations = static_cast<int>(parse_number(key, value));
        else if (key == "power_tol") cfg.lcp.power_tol = parse_number(key, value);
        else if (key == "enforce_bounds") cfg.lcp.enforce_bounds = parse_number(key, value) != 0.0;
        else if (key == "output") cfg.output = value;
        else if (key == "threads") cfg.threads = static_cast<int>(parse_number(key, value));
        else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    for (const auto& m : cfg.methods) method_tag(m);
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_sweep_config(in);
}

std::vector<GapScanRow> scan_gap_surface(const Graph& g, const std::vector<double>& alphas,
                                         const std::vector<double>& deltas, const LcpParams& base) {
    const ParamBounds bounds = param_bounds(g);
    for (double a : alphas)
        if (a < 0.0 || a > bounds.alpha_max)
            throw std::invalid_argument("alpha grid value outside param_bounds");
    for (double d : deltas)
        if (d < 0.0 || d > bounds.delta_max)
            throw std::invalid_argument("delta grid value outside param_bounds");

    std::vector<GapScanRow> rows;
    rows.reserve(alphas.size() * deltas.size());
    for (double a : alphas) {
        for (double d : deltas) {
            LcpParams params = base;
            params.alpha = a;
            params.delta = d;
            params.enforce_bounds = false;
            const SpectralSummary s = spectral_y2(build_w(g, params), params);
            rows.push_back({a, d, s.beta2, s.beta3});
        }
    }
    return rows;
}

void write_gap_scan_csv(std::ostream& out, const std::vector<GapScanRow>& rows) {
    out << "# lcp gap scan csv v1\n";
    out << "alpha,delta,beta2,beta3,gap\n";
    for (const auto& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.delta) << ','
            << format_double(r.beta2) << ',' << format_double(r.beta3) << ','
            << format_double(r.beta2 - r.beta3) << '\n';
}

std::vector<Beta2ScanRow> scan_beta2_modularity(const std::vector<SsbmConfig>& configs,
                                                const LcpParams& base) {
    std::vector<Beta2ScanRow> rows;
    rows.reserve(configs.size());
    for (const auto& cfg : configs) {
        auto [g, planted] = generate_ssbm(cfg);
        Beta2ScanRow row;
        row.config = cfg;
        row.modularity_planted = g.link_count() > 0 ? modularity(g, planted)
                                                    : std::numeric_limits<double>::quiet_NaN();
        // Degree-0 nodes cannot enter W; score the spectrum on the core.
        std::vector<int> core;
        for (int i = 0; i < g.n; ++i)
            if (g.degree[i] > 0) core.push_back(i);
        std::vector<int> to_core(g.n, -1);
        for (std::size_t i = 0; i < core.size(); ++i) to_core[core[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> edges;
        edges.reserve(g.edges.size());
        for (auto [i, j] : g.edges) edges.emplace_back(to_core[i], to_core[j]);
        const Graph sub = Graph::from_edges(static_cast<int>(core.size()), std::move(edges));
        LcpParams params = base;
        params.seed = seed_combine(cfg.seed, 7);
        row.beta2 = spectral_y2(build_w(sub, params), params).beta2;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_beta2_scan_csv(std::ostream& out, const std::vector<Beta2ScanRow>& rows) {
    out << "# lcp beta2 scan csv v1\n";
    out << "n,c,b_in,b_out,seed,modularity_planted,beta2\n";
    for (const auto& r : rows)
        out << r.config.n << ',' << r.config.c << ',' << format_double(r.config.b_in) << ','
            << format_double(r.config.b_out) << ',' << r.config.seed << ','
            << format_double(r.modularity_planted) << ',' << format_double(r.beta2) << '\n';
}

}  // namespace lcp

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcp/baselines.hpp"
#include "lcp/bench.hpp"
#include "lcp/clustering.hpp"
#include "lcp/graph.hpp"
#include "lcp/process.hpp"
#include "lcp/rng.hpp"

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void report_partition(const std::string& method, const lcp::Graph& g, const lcp::Partition& p) {
    std::cout << method << ": clusters=" << p.c;
    if (g.link_count() > 0) std::cout << " modularity=" << lcp::modularity(g, p);
    std::cout << "\n";
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> out;
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear clustering process toolkit: community detection on undirected graphs"};
    app.require_subcommand(1);

    // gen-ssbm
    auto* gen = app.add_subcommand("gen-ssbm", "Sample a symmetric stochastic block model graph");
    int gen_n = 1000, gen_c = 4;
    double gen_bin = 26.0, gen_bout = 0.67;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_planted;
    gen->add_option("--n", gen_n, "node count");
    gen->add_option("--c", gen_c, "cluster count (must divide n)");
    gen->add_option("--b-in", gen_bin, "intra-cluster link rate (p_in = b_in/n)");
    gen->add_option("--b-out", gen_bout, "inter-cluster link rate (p_out = b_out/n)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "edge list output path")->required();
    gen->add_option("--planted-out", gen_planted, "write the planted partition here");

    // shared clustering flags
    std::string in_path, out_path;
    lcp::LcpParams params;
    std::optional<int> fixed_c;
    auto add_lcp_flags = [&](CLI::App* cmd) {
        cmd->add_option("input", in_path, "edge list file")->required();
        cmd->add_option("--out", out_path, "partition output path");
        cmd->add_option("--alpha", params.alpha, "attraction strength");
        cmd->add_option("--delta", params.delta, "repulsion strength");
        cmd->add_option("--scale-total", params.scale_fraction_total,
                        "fraction of links scaled over the whole run");
        cmd->add_option("--scale-iters", params.scale_iterations, "scaling iterations");
        cmd->add_option("--seed", params.seed, "seed for power iteration starts");
        cmd->add_flag("--enforce-bounds", params.enforce_bounds,
                      "clamp alpha/delta to the operator non-negativity bounds");
    };

    auto* run_lcp = app.add_subcommand("lcp", "Cluster with the linear clustering process");
    add_lcp_flags(run_lcp);
    int fixed_c_value = 0;
    auto* fixed_opt = run_lcp->add_option("--fixed-c", fixed_c_value, "force exactly this many clusters");

    auto* run_louvain = app.add_subcommand("louvain", "Cluster with the Louvain method");
    run_louvain->add_option("input", in_path, "edge list file")->required();
    run_louvain->add_option("--out", out_path, "partition output path");
    std::uint64_t louvain_seed = 0;
    run_louvain->add_option("--seed", louvain_seed, "reserved");

    auto* run_newman = app.add_subcommand("newman", "Cluster with Newman spectral bisection");
    run_newman->add_option("input", in_path, "edge list file")->required();
    run_newman->add_option("--out", out_path, "partition output path");

    auto* run_nbt = app.add_subcommand("nbt-count", "Estimate cluster count from the non-backtracking spectrum");
    run_nbt->add_option("input", in_path, "edge list file")->required();

    auto* run_lcpc = app.add_subcommand("lcpc-count", "Estimate cluster count from the weighted-attraction spectrum");
    run_lcpc->add_option("input", in_path, "edge list file")->required();
    double lcpc_alpha = 0.95;
    run_lcpc->add_option("--alpha", lcpc_alpha, "attraction strength");

    auto* run_sweep_cmd = app.add_subcommand("sweep", "Run an SSBM method-comparison sweep");
    std::string sweep_config;
    run_sweep_cmd->add_option("--config", sweep_config, "flat key = value config file")->required();

    auto* run_scan_gap = app.add_subcommand("scan-gap", "Scan beta2-beta3 over an (alpha, delta) grid");
    run_scan_gap->add_option("input", in_path, "edge list file")->required();
    run_scan_gap->add_option("--out", out_path, "CSV output path")->required();
    int grid_alpha = 8, grid_delta = 8;
    run_scan_gap->add_option("--alpha-points", grid_alpha, "alpha grid size");
    run_scan_gap->add_option("--delta-points", grid_delta, "delta grid size");

    auto* run_scan_b2 = app.add_subcommand("scan-beta2", "Scan planted modularity vs beta2 over SSBM draws");
    int b2_n = 300, b2_c = 3, b2_points = 30;
    double b2_dav = 7.0;
    std::uint64_t b2_seed = 1;
    run_scan_b2->add_option("--n", b2_n, "node count");
    run_scan_b2->add_option("--c", b2_c, "cluster count");
    run_scan_b2->add_option("--d-av", b2_dav, "mean degree held fixed");
    run_scan_b2->add_option("--points", b2_points, "number of gap grid points");
    run_scan_b2->add_option("--seed", b2_seed, "seed");
    run_scan_b2->add_option("--out", out_path, "CSV output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            lcp::SsbmConfig cfg{gen_n, gen_c, gen_bin, gen_bout, gen_seed};
            const auto [graph, planted] = lcp::generate_ssbm(cfg);
            lcp::save_edge_list(graph, gen_out);
            if (!gen_planted.empty()) lcp::save_partition(planted, gen_planted);
            std::cout << "ssbm: n=" << graph.n << " links=" << graph.link_count() << " -> " << gen_out
                      << "\n";
        } else if (run_lcp->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            if (fixed_opt->count() > 0) fixed_c = fixed_c_value;
            const lcp::PipelineResult result = lcp::lcp_pipeline(g, params, fixed_c);
            if (result.diagnostics.params_clamped)
                std::cerr << "warning: alpha/delta clamped to (" << result.diagnostics.alpha_used
                          << ", " << result.diagnostics.delta_used << ")\n";
            if (!out_path.empty()) lcp::save_partition(result.partition, out_path);
            std::cout << "lcp: clusters=" << result.diagnostics.cluster_count
                      << " modularity=" << result.diagnostics.modularity_value
                      << " beta2=" << result.diagnostics.beta2
                      << " beta3=" << result.diagnostics.beta3;
            if (result.diagnostics.isolated_nodes > 0)
                std::cout << " isolated=" << result.diagnostics.isolated_nodes;
            std::cout << "\n";
        } else if (run_louvain->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            const lcp::Partition p = lcp::louvain(g, louvain_seed);
            if (!out_path.empty()) lcp::save_partition(p, out_path);
            report_partition("louvain", g, p);
        } else if (run_newman->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            const lcp::Partition p = lcp::newman_spectral(g);
            if (!out_path.empty()) lcp::save_partition(p, out_path);
            report_partition("newman", g, p);
        } else if (run_nbt->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            std::cout << lcp::nbt_cluster_count(g) << "\n";
        } else if (run_lcpc->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            std::cout << lcp::lcp_c_count(g, lcpc_alpha) << "\n";
        } else if (run_sweep_cmd->parsed()) {
            lcp::SweepConfig cfg = lcp::load_sweep_config(sweep_config);
            if (cfg.output.empty()) throw std::runtime_error("config must set output = <csv path>");
            const auto rows = lcp::run_sweep(cfg);
            auto out = open_output(cfg.output);
            lcp::write_sweep_csv(out, rows);
            std::cout << "sweep: " << rows.size() << " rows -> " << cfg.output << "\n";
        } else if (run_scan_gap->parsed()) {
            const lcp::Graph g = lcp::load_edge_list(in_path);
            const lcp::ParamBounds bounds = lcp::param_bounds(g);
            const double delta_cap =
                std::isfinite(bounds.delta_max) ? bounds.delta_max : bounds.alpha_max;
            const auto rows = lcp::scan_gap_surface(g, linspace(0.05, bounds.alpha_max, grid_alpha),
                                                    linspace(0.0, delta_cap, grid_delta), params);
            auto out = open_output(out_path);
            lcp::write_gap_scan_csv(out, rows);
            std::cout << "scan-gap: " << rows.size() << " rows -> " << out_path << "\n";
        } else if (run_scan_b2->parsed()) {
            std::vector<lcp::SsbmConfig> configs;
            const double max_gap = b2_c * b2_dav;  // b_out >= 0 limit
            for (int i = 0; i < b2_points; ++i) {
                const double gap = max_gap * (i + 1) / (b2_points + 1);
                const auto [b_in, b_out] = lcp::solve_bin_bout(b2_c, b2_dav, gap);
                configs.push_back({b2_n, b2_c, b_in, b_out, lcp::seed_combine(b2_seed, i)});
            }
            const auto rows = lcp::scan_beta2_modularity(configs, params);
            auto out = open_output(out_path);
            lcp::write_beta2_scan_csv(out, rows);
            std::cout << "scan-beta2: " << rows.size() << " rows -> " << out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

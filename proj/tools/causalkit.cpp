#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/discovery.hpp"
#include "causalkit/ensemble.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/metrics.hpp"
#include "causalkit/sim.hpp"
#include "causalkit/svg.hpp"

namespace fs = std::filesystem;
using namespace causalkit;

namespace {

// exit codes: 0 success, 1 I/O, 2 usage/input, 3 numerical/all-cells-failed
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

std::string fmt_auprc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string pair_list_text(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::string out = "[";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) out += ", ";
        out += "('" + pairs[i].first + "', '" + pairs[i].second + "')";
    }
    return out + "]";
}

// results/sweep CSV. elapsed_ms is canonicalized to 0 so that output files
// are byte-reproducible across reruns and --jobs settings; real timings go
// to the run summary on stdout.
std::string records_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << "run_index,cd_algo,fs_algo,n_features,features,shd,auprc,latent_edge_count,elapsed_ms,error\n";
    for (const auto& r : records) {
        os << r.run_index << "," << r.cd_algo << "," << r.fs_algo << "," << r.n_features << ","
           << join(r.features, ";") << ",";
        if (r.error.empty())
            os << r.shd_value << "," << fmt_auprc(r.auprc_value) << "," << r.latent_edges.size();
        else
            os << ",,0";
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n' || c == '\r') c = ';';
        os << ",0," << err << "\n";
    }
    return os.str();
}

void write_run_outputs(const std::string& out_dir, const EnsembleOutput& result,
                       const std::string& csv_name) {
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/graphs");
    write_file(out_dir + "/" + csv_name, records_csv(result.records));
    std::string target_text = to_edge_list(result.target);
    if (result.target_is_proxy) target_text = "# proxy\n" + target_text;
    write_file(out_dir + "/target.dag", target_text);
    for (const auto& r : result.records) {
        if (!r.error.empty()) continue;
        std::string stem = out_dir + "/graphs/run_" + std::to_string(r.run_index);
        write_file(stem + ".dot", to_dot(r.graph));
        write_file(stem + ".dag", to_edge_list(r.graph));
    }
    std::ostringstream latent;
    for (const auto& [idx, pairs] : latent_report(result.records))
        latent << "run_" << idx << ": " << pair_list_text(pairs) << "\n";
    write_file(out_dir + "/latent_edges.txt", latent.str());
}

int finish_run(const EnsembleOutput& result) {
    int ok = 0, failed = 0;
    for (const auto& r : result.records) (r.error.empty() ? ok : failed) += 1;
    std::int64_t total_ms = 0;
    for (const auto& r : result.records) total_ms += r.elapsed_ms;
    std::cout << result.records.size() << " cells (" << ok << " ok, " << failed << " failed), "
              << total_ms << " ms total" << (result.target_is_proxy ? ", proxy target" : "")
              << "\n";
    return ok > 0 ? 0 : 3;
}

struct EnsembleFlags {
    std::string data_path;
    std::string target_path;
    std::string fs = "pfa,linear,tree,rfe";
    std::string cd = "pc,ic,hc";
    EnsembleConfig config;
    std::string out_dir = ".";
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void add_ensemble_flags(CLI::App* cmd, EnsembleFlags& f) {
    cmd->add_option("--data", f.data_path, "input CSV")->required();
    cmd->add_option("--target", f.target_path, "target graph (edge list); omitted: proxy target");
    cmd->add_option("--fs", f.fs, "feature selectors (comma list of pfa,linear,tree,rfe)")
        ->capture_default_str();
    cmd->add_option("--cd", f.cd, "discovery algorithms (comma list of pc,ic,hc)")
        ->capture_default_str();
    cmd->add_option("--alpha", f.config.alpha, "CI test significance level")->capture_default_str();
    cmd->add_option("--max-cond", f.config.max_cond, "maximum conditioning set size")
        ->capture_default_str();
    cmd->add_option("--max-parents", f.config.max_parents, "hill-climb in-degree cap")
        ->capture_default_str();
    cmd->add_option("--seed", f.config.seed, "random seed")->capture_default_str();
    cmd->add_option("--jobs", f.config.jobs, "concurrent cells")->capture_default_str();
    cmd->add_option("--out-dir", f.out_dir, "output directory")->capture_default_str();
}

MixedGraph parse_graph_file(const std::string& path) {
    try {
        return from_edge_list(read_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::optional<MixedGraph> load_target(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return parse_graph_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exploratory causal analysis toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a random linear-Gaussian benchmark");
    int sim_nodes = 10;
    std::size_t sim_samples = 2000;
    SimSpec spec;
    std::string sim_out_dir = ".";
    sim_cmd->add_option("--nodes", sim_nodes, "node count")->capture_default_str();
    sim_cmd->add_option("--edge-prob", spec.edge_prob, "edge probability")->capture_default_str();
    sim_cmd->add_option("--samples", sim_samples, "sample count")->capture_default_str();
    sim_cmd->add_option("--seed", spec.seed, "random seed")->capture_default_str();
    sim_cmd->add_option("--coef-low", spec.coef_low, "coefficient magnitude lower bound")
        ->capture_default_str();
    sim_cmd->add_option("--coef-high", spec.coef_high, "coefficient magnitude upper bound")
        ->capture_default_str();
    sim_cmd->add_option("--noise-sd", spec.noise_sd, "noise standard deviation")
        ->capture_default_str();
    sim_cmd->add_option("--out-dir", sim_out_dir, "output directory")->capture_default_str();

    // discover
    auto* disc_cmd = app.add_subcommand("discover", "run one causal discovery algorithm");
    std::string disc_data, disc_algo, disc_out = "graph";
    double disc_alpha = 0.05;
    int disc_max_cond = 3, disc_max_parents = 4;
    std::uint64_t disc_seed = 42;
    disc_cmd->add_option("--data", disc_data, "input CSV")->required();
    disc_cmd->add_option("--algo", disc_algo, "algorithm: ic | pc | hc")
        ->required()
        ->check(CLI::IsMember({"ic", "pc", "hc"}));
    disc_cmd->add_option("--alpha", disc_alpha, "CI test significance level")->capture_default_str();
    disc_cmd->add_option("--max-cond", disc_max_cond, "maximum conditioning set size")
        ->capture_default_str();
    disc_cmd->add_option("--max-parents", disc_max_parents, "hill-climb in-degree cap")
        ->capture_default_str();
    disc_cmd->add_option("--seed", disc_seed, "random seed")->capture_default_str();
    disc_cmd->add_option("--out", disc_out, "output path stem (.dot and .dag appended)")
        ->capture_default_str();

    // ensemble
    auto* ens_cmd = app.add_subcommand("ensemble", "feature-selection x discovery ensemble");
    EnsembleFlags ens;
    int ens_k = 7;
    add_ensemble_flags(ens_cmd, ens);
    ens_cmd->add_option("--k", ens_k, "features per selector")->capture_default_str();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "ensemble over a range of feature counts");
    EnsembleFlags swp;
    int k_min = 0, k_max = 0;
    bool plot = false;
    add_ensemble_flags(sweep_cmd, swp);
    sweep_cmd->add_option("--k-min", k_min, "smallest feature count")->required();
    sweep_cmd->add_option("--k-max", k_max, "largest feature count")->required();
    sweep_cmd->add_flag("--plot", plot, "emit SVG charts");

    // metrics
    auto* met_cmd = app.add_subcommand("metrics", "compare two graphs");
    std::string met_target, met_candidate;
    met_cmd->add_option("--target", met_target, "target graph (edge list)")->required();
    met_cmd->add_option("--candidate", met_candidate, "candidate graph (edge list)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim_cmd) {
            Dag truth = random_dag(sim_nodes, spec.edge_prob, spec.seed);
            LinearGaussianModel model = random_model(truth, spec, spec.seed + 1);
            Dataset data = sample(model, sim_samples, spec.seed + 2);
            fs::create_directories(sim_out_dir);
            write_file(sim_out_dir + "/data.csv", to_csv(data));
            write_file(sim_out_dir + "/truth.dag", to_edge_list(truth.graph()));
            std::cout << "simulated " << sim_nodes << " nodes, " << truth.graph().edge_count()
                      << " edges, " << sim_samples << " samples -> " << sim_out_dir
                      << "/data.csv, truth.dag\n";
            return 0;
        }

        if (*disc_cmd) {
            Dataset data = parse_csv(read_file(disc_data));
            DiscoveryResult result;
            if (disc_algo == "hc") {
                result = hill_climb(data, disc_max_parents, 500, disc_seed);
            } else {
                std::unique_ptr<CiTester> tester;
                if (data.all_continuous())
                    tester = std::make_unique<FisherZTester>(data, disc_alpha);
                else if (data.all_discrete())
                    tester = std::make_unique<GSquaredTester>(data, disc_alpha);
                else
                    throw std::invalid_argument(
                        "constraint-based search needs all-continuous or all-discrete data");
                result = disc_algo == "ic" ? ic_algorithm(*tester, data.names(), disc_max_cond)
                                           : pc(*tester, data.names(), disc_max_cond);
            }
            write_file(disc_out + ".dot", to_dot(result.graph));
            write_file(disc_out + ".dag", to_edge_list(result.graph));
            std::cout << result.algorithm << ": " << result.graph.edge_count() << " edges"
                      << (disc_algo == "hc" ? " (score=bic)" : "") << " -> " << disc_out
                      << ".dot, " << disc_out << ".dag\n";
            if (!result.latent_edges.empty())
                std::cout << "latent edges: " << pair_list_text(result.latent_edges) << "\n";
            return 0;
        }

        if (*ens_cmd) {
            ens.config.fs_algos = split_list(ens.fs);
            ens.config.cd_algos = split_list(ens.cd);
            ens.config.k = ens_k;
            Dataset data = parse_csv(read_file(ens.data_path));
            EnsembleOutput result = run_ensemble(data, ens.config, load_target(ens.target_path));
            write_run_outputs(ens.out_dir, result, "results.csv");
            return finish_run(result);
        }

        if (*sweep_cmd) {
            if (k_min < 1 || k_min > k_max)
                throw std::invalid_argument("sweep: need 1 <= k-min <= k-max");
            swp.config.fs_algos = split_list(swp.fs);
            swp.config.cd_algos = split_list(swp.cd);
            for (int k = k_min; k <= k_max; ++k) swp.config.k_range.push_back(k);
            Dataset data = parse_csv(read_file(swp.data_path));
            EnsembleOutput result = sweep_features(data, swp.config, load_target(swp.target_path));
            write_run_outputs(swp.out_dir, result, "sweep.csv");
            if (plot) {
                std::map<std::string, PlotSeries> by_pair_shd, by_pair_auprc, by_pair_scatter;
                for (const auto& r : result.records) {
                    if (!r.error.empty()) continue;
                    std::string key = r.fs_algo + "/" + r.cd_algo;
                    by_pair_shd[key].label = key;
                    by_pair_shd[key].points.emplace_back(r.n_features, r.shd_value);
                    by_pair_auprc[key].label = key;
                    by_pair_auprc[key].points.emplace_back(r.n_features, r.auprc_value);
                    by_pair_scatter[key].label = key;
                    by_pair_scatter[key].points.emplace_back(r.auprc_value, r.shd_value);
                }
                auto values = [](const std::map<std::string, PlotSeries>& m) {
                    std::vector<PlotSeries> v;
                    for (const auto& [k2, s] : m) v.push_back(s);
                    return v;
                };
                write_file(swp.out_dir + "/shd_vs_k.svg",
                           render_svg_chart("SHD vs feature count", "k", "SHD", values(by_pair_shd)));
                write_file(swp.out_dir + "/auprc_vs_k.svg",
                           render_svg_chart("AUPRC vs feature count", "k", "AUPRC",
                                            values(by_pair_auprc)));
                write_file(swp.out_dir + "/shd_vs_auprc.svg",
                           render_svg_chart("SHD vs AUPRC", "AUPRC", "SHD",
                                            values(by_pair_scatter)));
            }
            return finish_run(result);
        }

        if (*met_cmd) {
            MixedGraph target = parse_graph_file(met_target);
            MixedGraph candidate = parse_graph_file(met_candidate);
            std::cout << "shd=" << shd(target, candidate) << " auprc="
                      << fmt_auprc(auprc(target, candidate)) << "\n";
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

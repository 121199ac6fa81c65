#include "causalkit/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>

#include "causalkit/ci.hpp"
#include "causalkit/discovery.hpp"
#include "causalkit/features.hpp"
#include "causalkit/metrics.hpp"

namespace causalkit {

namespace {

void validate_config(const EnsembleConfig& config, bool sweep) {
    if (config.fs_algos.empty()) throw std::invalid_argument("ensemble: no feature selectors");
    if (config.cd_algos.empty()) throw std::invalid_argument("ensemble: no discovery algorithms");
    static const std::set<std::string> fs_known = {"pfa", "linear", "tree", "rfe"};
    static const std::set<std::string> cd_known = {"ic", "pc", "hc"};
    for (const auto& a : config.fs_algos)
        if (!fs_known.count(a)) throw std::invalid_argument("ensemble: unknown feature selector " + a);
    for (const auto& a : config.cd_algos)
        if (!cd_known.count(a)) throw std::invalid_argument("ensemble: unknown discovery algorithm " + a);
    if (config.alpha <= 0.0 || config.alpha >= 1.0)
        throw std::invalid_argument("ensemble: alpha must be in (0,1)");
    if (sweep) {
        if (config.k_range.empty()) throw std::invalid_argument("sweep: empty k range");
        for (int k : config.k_range)
            if (k < 1) throw std::invalid_argument("sweep: k must be >= 1");
    } else if (config.k < 1) {
        throw std::invalid_argument("ensemble: k must be >= 1");
    }
}

FeatureRanking select_features(const Dataset& ds, const std::string& algo, int k,
                               std::uint64_t seed) {
    if (algo == "pfa") return pfa(ds, k, seed);
    if (algo == "linear") return unsupervised_importance(ds, SeparatorKind::LINEAR, k, seed);
    if (algo == "tree") return unsupervised_importance(ds, SeparatorKind::TREE_ENSEMBLE, k, seed);
    if (algo == "rfe") return rfe(ds, k, seed);
    throw std::invalid_argument("unknown feature selector: " + algo);
}

DiscoveryResult discover(const Dataset& sub, const std::string& algo, const EnsembleConfig& config,
                         std::uint64_t seed) {
    if (algo == "hc") return hill_climb(sub, config.max_parents, config.max_iters, seed);
    std::unique_ptr<CiTester> tester;
    if (sub.all_continuous())
        tester = std::make_unique<FisherZTester>(sub, config.alpha);
    else if (sub.all_discrete())
        tester = std::make_unique<GSquaredTester>(sub, config.alpha);
    else
        throw std::invalid_argument("constraint-based search needs all-continuous or all-discrete data");
    if (algo == "ic") return ic_algorithm(*tester, sub.names(), config.max_cond);
    if (algo == "pc") return pc(*tester, sub.names(), config.max_cond);
    throw std::invalid_argument("unknown discovery algorithm: " + algo);
}

RunRecord run_cell(const Dataset& ds, const EnsembleConfig& config, const MixedGraph& target,
                   int run_index, const std::string& fs_algo, const std::string& cd_algo, int k) {
    RunRecord rec;
    rec.run_index = run_index;
    rec.fs_algo = fs_algo;
    rec.cd_algo = cd_algo;
    rec.n_features = k;
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::uint64_t cell_seed = config.seed + static_cast<std::uint64_t>(run_index);
        FeatureRanking ranking = select_features(ds, fs_algo, k, cell_seed);
        rec.features = ranking.selected;
        Dataset sub = select_columns(ds, ranking.selected);
        DiscoveryResult dr = discover(sub, cd_algo, config, cell_seed);

        std::set<std::string> union_names(target.names().begin(), target.names().end());
        union_names.insert(dr.graph.names().begin(), dr.graph.names().end());
        std::vector<std::string> names(union_names.begin(), union_names.end());
        rec.graph = pad_to_nodes(dr.graph, names);
        rec.shd_value = shd(target, rec.graph);
        rec.auprc_value = auprc(target, rec.graph);
        rec.latent_edges = dr.latent_edges;
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.graph = MixedGraph();
    }
    rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
}

void run_cells(const Dataset& ds, const EnsembleConfig& config, const MixedGraph& target,
               const std::vector<std::tuple<int, std::string, std::string, int>>& cells,
               std::vector<RunRecord>& out) {
    std::size_t base = out.size();
    out.resize(base + cells.size());
    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& [idx, fs, cd, k] = cells[i];
            out[base + i] = run_cell(ds, config, target, idx, fs, cd, k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            const auto& [idx, fs, cd, k] = cells[i];
            out[base + i] = run_cell(ds, config, target, idx, fs, cd, k);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

Dag proxy_target(const Dataset& ds, const EnsembleConfig& config) {
    DiscoveryResult dr = hill_climb(ds, config.max_parents, config.max_iters, config.seed);
    return Dag(dr.graph);
}

EnsembleOutput run_ensemble(const Dataset& ds, const EnsembleConfig& config,
                            const std::optional<MixedGraph>& target) {
    validate_config(config, false);
    EnsembleOutput out;
    if (target) {
        out.target = *target;
    } else {
        out.target = proxy_target(ds, config).graph();
        out.target_is_proxy = true;
    }
    std::vector<std::tuple<int, std::string, std::string, int>> cells;
    int idx = 0;
    for (const auto& fs : config.fs_algos)
        for (const auto& cd : config.cd_algos) cells.emplace_back(idx++, fs, cd, config.k);
    run_cells(ds, config, out.target, cells, out.records);
    return out;
}

EnsembleOutput sweep_features(const Dataset& ds, const EnsembleConfig& config,
                              const std::optional<MixedGraph>& target) {
    validate_config(config, true);
    EnsembleOutput out;
    if (target) {
        out.target = *target;
    } else {
        out.target = proxy_target(ds, config).graph();
        out.target_is_proxy = true;
    }
    std::vector<std::tuple<int, std::string, std::string, int>> cells;
    int idx = 0;
    for (int k : config.k_range)
        for (const auto& fs : config.fs_algos)
            for (const auto& cd : config.cd_algos) cells.emplace_back(idx++, fs, cd, k);
    run_cells(ds, config, out.target, cells, out.records);
    return out;
}

std::vector<std::pair<int, std::vector<std::pair<std::string, std::string>>>> latent_report(
    const std::vector<RunRecord>& records) {
    std::vector<std::pair<int, std::vector<std::pair<std::string, std::string>>>> out;
    for (const auto& rec : records) {
        if (rec.latent_edges.empty()) continue;
        auto pairs = rec.latent_edges;
        std::sort(pairs.begin(), pairs.end());
        out.emplace_back(rec.run_index, std::move(pairs));
    }
    return out;
}

}  // namespace causalkit

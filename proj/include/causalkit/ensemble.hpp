#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

struct EnsembleConfig {
    std::vector<std::string> fs_algos;  // pfa | linear | tree | rfe
    std::vector<std::string> cd_algos;  // ic | pc | hc
    int k = 7;
    std::vector<int> k_range;           // used by sweep_features; overrides k
    double alpha = 0.05;
    int max_cond = 3;
    int max_parents = 4;
    int max_iters = 500;
    std::uint64_t seed = 42;
    int jobs = 1;
};

// One ensemble cell. A failed cell keeps its slot with `error` set and an
// empty graph; metrics of failed cells are not meaningful.
struct RunRecord {
    int run_index = 0;
    std::string cd_algo;
    std::string fs_algo;
    int n_features = 0;
    std::vector<std::string> features;
    MixedGraph graph;
    int shd_value = 0;
    double auprc_value = 0.0;
    std::vector<std::pair<std::string, std::string>> latent_edges;
    std::int64_t elapsed_ms = 0;
    std::string error;
};

struct EnsembleOutput {
    MixedGraph target;
    bool target_is_proxy = false;
    std::vector<RunRecord> records;
};

// Hill-climbed benchmark over the full feature set, for runs with no
// supplied target graph.
Dag proxy_target(const Dataset& ds, const EnsembleConfig& config);

// Fixed-k ensemble: every feature selector crossed with every discovery
// algorithm; |fs| x |cd| records, metrics against the supplied target or
// a proxy. Cells run independently (config.jobs of them concurrently)
// with per-cell seeds seed + run_index.
EnsembleOutput run_ensemble(const Dataset& ds, const EnsembleConfig& config,
                            const std::optional<MixedGraph>& target = std::nullopt);

// run_ensemble per k in k_range, run_index continuing across ks.
EnsembleOutput sweep_features(const Dataset& ds, const EnsembleConfig& config,
                              const std::optional<MixedGraph>& target = std::nullopt);

std::vector<std::pair<int, std::vector<std::pair<std::string, std::string>>>> latent_report(
    const std::vector<RunRecord>& records);

}  // namespace causalkit

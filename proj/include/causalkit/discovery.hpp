#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

struct DiscoveryStats {
    std::uint64_t ci_calls = 0;
    std::uint64_t score_evals = 0;
    std::int64_t elapsed_ms = 0;
    std::vector<double> score_trajectory;  // hill climbing only
};

struct DiscoveryResult {
    MixedGraph graph;
    SepsetMap sepsets;
    std::vector<std::pair<std::string, std::string>> latent_edges;
    std::string algorithm;
    DiscoveryStats stats;
};

// Inductive-causation search: exhaustive sepset search per pair (subsets
// in size-ascending, then lexicographic order), v-structure orientation,
// Meek closure. vars[i] names tester variable i. Conflicting arrowheads
// become bidirected edges and are reported as latent pairs.
DiscoveryResult ic_algorithm(const CiTester& tester, const std::vector<std::string>& vars,
                             int max_cond);

// PC with the stable skeleton phase: adjacency sets frozen per depth,
// separating sets drawn from the frozen adjacencies of either endpoint.
// Orientation identical to ic_algorithm.
DiscoveryResult pc(const CiTester& tester, const std::vector<std::string>& vars, int max_cond);

// Greedy BIC hill climbing from the empty DAG over add/delete/reverse
// moves; ties broken by move type (add < delete < reverse) then by the
// (src, dst) name pair.
DiscoveryResult hill_climb(const Dataset& ds, int max_parents, int max_iters, std::uint64_t seed);

// Bidirected pairs of the result graph, each pair and the list sorted
// lexicographically.
std::vector<std::pair<std::string, std::string>> detect_latent_edges(const DiscoveryResult& result);

}  // namespace causalkit

#pragma once

#include <tuple>
#include <vector>

#include "causalkit/graph.hpp"

namespace causalkit {

// State of one unordered node pair, the unit SHD counts over.
enum class PairState { NONE, A_TO_B, B_TO_A, UNDIRECTED, BIDIRECTED };

// Structural Hamming distance over the union node set: the number of
// unordered pairs whose states differ. Any mismatch counts 1 (a reversal
// is 1, not 2).
int shd(const MixedGraph& target, const MixedGraph& candidate);

// Degenerate single-threshold AUPRC on skeletons over the union node set:
// precision times recall of candidate adjacencies. Two empty skeletons
// give 1.0; an empty candidate against a non-empty target gives 0.0.
double auprc(const MixedGraph& target, const MixedGraph& candidate);

std::vector<std::tuple<int, int, double>> metric_table(const MixedGraph& target,
                                                       const std::vector<MixedGraph>& candidates);

}  // namespace causalkit

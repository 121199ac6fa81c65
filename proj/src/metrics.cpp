#include "causalkit/metrics.hpp"

#include <algorithm>
#include <set>

namespace causalkit {

namespace {

std::vector<std::string> union_names(const MixedGraph& a, const MixedGraph& b) {
    std::set<std::string> s(a.names().begin(), a.names().end());
    s.insert(b.names().begin(), b.names().end());
    return {s.begin(), s.end()};
}

// pair state keyed by (na < nb) name order
PairState pair_state(const MixedGraph& g, int i, int j, bool swapped) {
    if (!g.has_edge(i, j)) return PairState::NONE;
    bool arrow_i = g.mark_at(i, j, i) == Mark::ARROW;
    bool arrow_j = g.mark_at(i, j, j) == Mark::ARROW;
    if (arrow_i && arrow_j) return PairState::BIDIRECTED;
    if (!arrow_i && !arrow_j) return PairState::UNDIRECTED;
    bool i_to_j = arrow_j;
    if (swapped) i_to_j = !i_to_j;
    return i_to_j ? PairState::A_TO_B : PairState::B_TO_A;
}

}  // namespace

int shd(const MixedGraph& target, const MixedGraph& candidate) {
    std::vector<std::string> names = union_names(target, candidate);
    MixedGraph t = pad_to_nodes(target, names);
    MixedGraph c = pad_to_nodes(candidate, names);
    int dist = 0;
    for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            int ti = t.index_of(names[a]), tj = t.index_of(names[b]);
            int ci = c.index_of(names[a]), cj = c.index_of(names[b]);
            if (pair_state(t, ti, tj, false) != pair_state(c, ci, cj, false)) ++dist;
        }
    }
    return dist;
}

double auprc(const MixedGraph& target, const MixedGraph& candidate) {
    std::vector<std::string> names = union_names(target, candidate);
    MixedGraph t = pad_to_nodes(target, names);
    MixedGraph c = pad_to_nodes(candidate, names);
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            bool in_t = t.has_edge(t.index_of(names[a]), t.index_of(names[b]));
            bool in_c = c.has_edge(c.index_of(names[a]), c.index_of(names[b]));
            if (in_t && in_c) ++tp;
            else if (!in_t && in_c) ++fp;
            else if (in_t && !in_c) ++fn;
        }
    }
    if (tp + fn == 0 && tp + fp == 0) return 1.0;  // both skeletons empty
    if (tp + fp == 0) return 0.0;                  // no predictions, target non-empty
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    double recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    return precision * recall;
}

std::vector<std::tuple<int, int, double>> metric_table(const MixedGraph& target,
                                                       const std::vector<MixedGraph>& candidates) {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        out.emplace_back(static_cast<int>(i), shd(target, candidates[i]), auprc(target, candidates[i]));
    return out;
}

}  // namespace causalkit

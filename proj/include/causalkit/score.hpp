#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

// Cache of local BIC terms keyed by (node, sorted parent set). Values are
// exact recomputations; hit/miss counters are informational.
class LocalScoreCache {
public:
    bool lookup(int v, const std::vector<int>& parents, double* out);
    void store(int v, const std::vector<int>& parents, double value);
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    static std::string key(int v, const std::vector<int>& parents);
    std::unordered_map<std::string, double> map_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

// BIC term of one node given its parents. Continuous families use a
// least-squares fit (ridge 1e-10 on the normal equations, variance floor
// 1e-12); discrete families use the multinomial maximum likelihood.
// Mixing kinds within one family is an error.
double local_bic(const Dataset& ds, int v, const std::vector<int>& parents);

double graph_bic(const Dataset& ds, const Dag& g, LocalScoreCache* cache = nullptr);

}  // namespace causalkit

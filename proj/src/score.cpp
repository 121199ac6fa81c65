#include "causalkit/score.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causalkit {

namespace {
constexpr double kSigma2Floor = 1e-12;
constexpr double kRidge = 1e-10;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::string LocalScoreCache::key(int v, const std::vector<int>& parents) {
    std::vector<int> s(parents);
    std::sort(s.begin(), s.end());
    std::string k = std::to_string(v);
    for (int p : s) {
        k.push_back('|');
        k += std::to_string(p);
    }
    return k;
}

bool LocalScoreCache::lookup(int v, const std::vector<int>& parents, double* out) {
    auto it = map_.find(key(v, parents));
    if (it == map_.end()) {
        ++misses_;
        return false;
    }
    ++hits_;
    *out = it->second;
    return true;
}

void LocalScoreCache::store(int v, const std::vector<int>& parents, double value) {
    map_[key(v, parents)] = value;
}

namespace {

double continuous_local_bic(const Dataset& ds, int v, const std::vector<int>& parents) {
    std::size_t n = ds.n();
    std::size_t k = parents.size();
    Eigen::MatrixXd x(n, k + 1);
    Eigen::VectorXd y(n);
    for (std::size_t r = 0; r < n; ++r) {
        x(static_cast<Eigen::Index>(r), 0) = 1.0;
        for (std::size_t c = 0; c < k; ++c)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + 1)) =
                ds.value(r, static_cast<std::size_t>(parents[c]));
        y(static_cast<Eigen::Index>(r)) = ds.value(r, static_cast<std::size_t>(v));
    }
    Eigen::MatrixXd xtx = x.transpose() * x;
    xtx.diagonal().array() += kRidge;
    Eigen::VectorXd beta = xtx.ldlt().solve(x.transpose() * y);
    double rss = (y - x * beta).squaredNorm();
    double sigma2 = std::max(rss / static_cast<double>(n), kSigma2Floor);
    double nn = static_cast<double>(n);
    return -(nn / 2.0) * (std::log(kTwoPi * sigma2) + 1.0) -
           (static_cast<double>(k) + 2.0) / 2.0 * std::log(nn);
}

double discrete_local_bic(const Dataset& ds, int v, const std::vector<int>& parents) {
    std::size_t n = ds.n();
    int rv = ds.kind(static_cast<std::size_t>(v)).cardinality;
    long long q = 1;
    for (int p : parents) q *= ds.kind(static_cast<std::size_t>(p)).cardinality;
    std::unordered_map<long long, std::vector<double>> counts;
    for (std::size_t r = 0; r < n; ++r) {
        long long cfg = 0;
        for (int p : parents)
            cfg = cfg * ds.kind(static_cast<std::size_t>(p)).cardinality +
                  static_cast<long long>(ds.value(r, static_cast<std::size_t>(p)));
        auto& c = counts[cfg];
        if (c.empty()) c.assign(static_cast<std::size_t>(rv), 0.0);
        c[static_cast<std::size_t>(ds.value(r, static_cast<std::size_t>(v)))] += 1.0;
    }
    double loglik = 0.0;
    for (const auto& [cfg, c] : counts) {
        double total = 0.0;
        for (double x : c) total += x;
        for (double x : c)
            if (x > 0.0) loglik += x * std::log(x / total);
    }
    return loglik - static_cast<double>(q) * static_cast<double>(rv - 1) / 2.0 *
                        std::log(static_cast<double>(n));
}

}  // namespace

double local_bic(const Dataset& ds, int v, const std::vector<int>& parents) {
    if (v < 0 || static_cast<std::size_t>(v) >= ds.p())
        throw std::invalid_argument("local_bic: node index out of range");
    bool v_discrete = ds.kind(static_cast<std::size_t>(v)).discrete;
    for (int p : parents) {
        if (p < 0 || static_cast<std::size_t>(p) >= ds.p() || p == v)
            throw std::invalid_argument("local_bic: bad parent index");
        if (ds.kind(static_cast<std::size_t>(p)).discrete != v_discrete)
            throw std::invalid_argument("local_bic: mixed-kind parent/child family");
    }
    return v_discrete ? discrete_local_bic(ds, v, parents) : continuous_local_bic(ds, v, parents);
}

double graph_bic(const Dataset& ds, const Dag& g, LocalScoreCache* cache) {
    if (g.node_count() != static_cast<int>(ds.p()))
        for (const auto& n : g.graph().names())
            if (ds.index_of(n) < 0)
                throw std::invalid_argument("graph_bic: graph node " + n + " not in dataset");
    double total = 0.0;
    for (int v = 0; v < g.node_count(); ++v) {
        // graph indices must match dataset columns by name
        int col = ds.index_of(g.graph().name(v));
        if (col < 0) throw std::invalid_argument("graph_bic: node not in dataset");
        std::vector<int> parents;
        for (int par : g.graph().parents(v)) {
            int pc = ds.index_of(g.graph().name(par));
            if (pc < 0) throw std::invalid_argument("graph_bic: parent not in dataset");
            parents.push_back(pc);
        }
        double s;
        if (cache && cache->lookup(col, parents, &s)) {
            total += s;
            continue;
        }
        s = local_bic(ds, col, parents);
        if (cache) cache->store(col, parents, s);
        total += s;
    }
    return total;
}

}  // namespace causalkit

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

// Linear structural-equation model over a DAG: each node equals its
// intercept plus a weighted sum of parents plus Gaussian noise.
struct LinearGaussianModel {
    Dag dag;
    std::map<std::pair<int, int>, double> coefficients;  // (parent, child) -> weight
    std::vector<double> noise_sd;                        // per node, > 0
    std::vector<double> intercepts;                      // per node
};

struct SimSpec {
    int p = 10;
    double edge_prob = 0.3;
    double coef_low = 0.8;
    double coef_high = 1.2;
    double noise_sd = 1.0;
    std::uint64_t seed = 42;
};

// Node names used by simulated graphs: "X00", "X01", ... zero-padded so
// lexicographic order matches index order.
std::vector<std::string> sim_node_names(int p);

// Uniform random node order; each forward pair included independently
// with edge_prob. Acyclic by construction, deterministic given seed.
Dag random_dag(int p, double edge_prob, std::uint64_t seed);

// Coefficients uniform in [coef_low, coef_high] with random sign,
// intercepts 0, common noise_sd.
LinearGaussianModel random_model(const Dag& dag, const SimSpec& spec, std::uint64_t seed);

// Ancestral sampling in topological order. All columns CONTINUOUS.
Dataset sample(const LinearGaussianModel& model, std::size_t n, std::uint64_t seed);

std::unique_ptr<CiTester> oracle_ci(Dag dag);

// Analytic covariance of the SEM: (I-W)^-1 D (I-W)^-T with W the weighted
// adjacency and D the noise variances. Used as the sampling oracle.
std::vector<double> analytic_covariance(const LinearGaussianModel& model);

}  // namespace causalkit

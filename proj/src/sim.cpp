#include "causalkit/sim.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "causalkit/rng.hpp"

namespace causalkit {

std::vector<std::string> sim_node_names(int p) {
    int width = 1;
    for (int v = p - 1; v >= 10; v /= 10) ++width;
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        std::string digits = std::to_string(i);
        names.push_back("X" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits);
    }
    return names;
}

Dag random_dag(int p, double edge_prob, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("random_dag: p must be >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw std::invalid_argument("random_dag: edge_prob must be in [0,1]");
    Rng rng(seed);
    MixedGraph g = MixedGraph::with_nodes(sim_node_names(p));
    std::vector<std::size_t> order = rng.permutation(static_cast<std::size_t>(p));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (rng.bernoulli(edge_prob))
                g.add_directed(static_cast<int>(order[i]), static_cast<int>(order[j]));
    return Dag(std::move(g));
}

LinearGaussianModel random_model(const Dag& dag, const SimSpec& spec, std::uint64_t seed) {
    if (spec.coef_low <= 0.0 || spec.coef_low > spec.coef_high)
        throw std::invalid_argument("random_model: need 0 < coef_low <= coef_high");
    if (spec.noise_sd <= 0.0) throw std::invalid_argument("random_model: noise_sd must be > 0");
    Rng rng(seed);
    LinearGaussianModel m{dag, {}, {}, {}};
    int p = dag.node_count();
    m.noise_sd.assign(static_cast<std::size_t>(p), spec.noise_sd);
    m.intercepts.assign(static_cast<std::size_t>(p), 0.0);
    // edges in canonical (storage) order so the draw sequence is fixed
    for (const auto& e : dag.graph().edges()) {
        int from = e.mark_at_b == Mark::ARROW ? e.a : e.b;
        int to = from == e.a ? e.b : e.a;
        double coef = rng.uniform(spec.coef_low, spec.coef_high);
        if (rng.bernoulli(0.5)) coef = -coef;
        m.coefficients[{from, to}] = coef;
    }
    return m;
}

Dataset sample(const LinearGaussianModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    int p = model.dag.node_count();
    if (model.noise_sd.size() != static_cast<std::size_t>(p) ||
        model.intercepts.size() != static_cast<std::size_t>(p))
        throw std::invalid_argument("sample: model dimensions inconsistent");
    for (double sd : model.noise_sd)
        if (sd <= 0.0) throw std::invalid_argument("sample: noise_sd must be > 0");

    const MixedGraph& g = model.dag.graph();
    std::vector<int> topo = model.dag.topological_order();
    Rng rng(seed);
    std::vector<double> values(n * static_cast<std::size_t>(p), 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        for (int v : topo) {
            double x = model.intercepts[static_cast<std::size_t>(v)];
            for (int par : g.parents(v)) {
                auto it = model.coefficients.find({par, v});
                if (it == model.coefficients.end())
                    throw std::invalid_argument("sample: missing coefficient for edge " +
                                                g.name(par) + "->" + g.name(v));
                x += it->second * values[row * static_cast<std::size_t>(p) + static_cast<std::size_t>(par)];
            }
            x += model.noise_sd[static_cast<std::size_t>(v)] * rng.normal();
            values[row * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)] = x;
        }
    }
    std::vector<ColumnKind> kinds(static_cast<std::size_t>(p), ColumnKind::continuous());
    return Dataset(g.names(), std::move(kinds), std::move(values), n);
}

std::unique_ptr<CiTester> oracle_ci(Dag dag) {
    return std::make_unique<OracleCiTester>(std::move(dag));
}

std::vector<double> analytic_covariance(const LinearGaussianModel& model) {
    int p = model.dag.node_count();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);  // w(child, parent)
    for (const auto& [edge, coef] : model.coefficients) w(edge.second, edge.first) = coef;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(p, p);
    for (int v = 0; v < p; ++v)
        d(v, v) = model.noise_sd[static_cast<std::size_t>(v)] * model.noise_sd[static_cast<std::size_t>(v)];
    Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(p, p) - w).inverse();
    Eigen::MatrixXd sigma = inv * d * inv.transpose();
    std::vector<double> out(static_cast<std::size_t>(p) * static_cast<std::size_t>(p));
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            out[static_cast<std::size_t>(a) * static_cast<std::size_t>(p) + static_cast<std::size_t>(b)] = sigma(a, b);
    return out;
}

}  // namespace causalkit

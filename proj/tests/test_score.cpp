#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/score.hpp"
#include "causalkit/sim.hpp"
#include "test_support.hpp"

using namespace causalkit;

namespace {

Dataset two_cols(std::size_t n, std::uint64_t seed, bool dependent) {
    Rng rng(seed);
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) {
        double u = rng.normal();
        v.push_back(u);
        v.push_back(dependent ? u + rng.normal() : rng.normal());
    }
    return Dataset({"u", "v"}, {ColumnKind::continuous(), ColumnKind::continuous()}, std::move(v),
                   n);
}

}  // namespace

TEST_CASE("penalty rejects a spurious parent") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Dataset ds = two_cols(1000, seed, false);
        if (local_bic(ds, 1, {}) > local_bic(ds, 1, {0})) ++ok;
    }
    CHECK(ok >= 18);
}

TEST_CASE("true parent improves the local score") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Dataset ds = two_cols(1000, seed, true);
        if (local_bic(ds, 1, {0}) > local_bic(ds, 1, {})) ++ok;
    }
    CHECK(ok >= 19);
}

TEST_CASE("deterministic child still scores its parent higher") {
    Rng rng(4);
    std::vector<double> v;
    std::size_t n = 200;
    for (std::size_t r = 0; r < n; ++r) {
        double u = rng.normal();
        v.push_back(u);
        v.push_back(u);  // exact copy; variance floor applies
    }
    Dataset ds({"u", "v"}, {ColumnKind::continuous(), ColumnKind::continuous()}, std::move(v), n);
    CHECK(local_bic(ds, 1, {0}) > local_bic(ds, 1, {}));
    CHECK(std::isfinite(local_bic(ds, 1, {0})));
}

TEST_CASE("continuous local bic matches the closed form for the empty parent set") {
    Dataset ds = two_cols(500, 7, false);
    double mean = 0;
    for (std::size_t r = 0; r < ds.n(); ++r) mean += ds.value(r, 0);
    mean /= ds.n();
    double rss = 0;
    for (std::size_t r = 0; r < ds.n(); ++r)
        rss += (ds.value(r, 0) - mean) * (ds.value(r, 0) - mean);
    double n = static_cast<double>(ds.n());
    double sigma2 = rss / n;
    double expected = -(n / 2.0) * (std::log(2.0 * M_PI * sigma2) + 1.0) - 1.0 * std::log(n);
    CHECK(local_bic(ds, 0, {}) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("discrete local bic matches the closed form") {
    // column with counts 3/1 over 4 rows
    Dataset ds({"d"}, {ColumnKind::discrete_k(2)}, {0, 0, 0, 1}, 4);
    double loglik = 3 * std::log(0.75) + 1 * std::log(0.25);
    double expected = loglik - (1.0 * (2 - 1) / 2.0) * std::log(4.0);
    CHECK(local_bic(ds, 0, {}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mixed families are rejected") {
    Dataset ds({"c", "d"}, {ColumnKind::continuous(), ColumnKind::discrete_k(2)},
               {0.5, 1, 1.5, 0, 2.5, 1}, 3);
    CHECK_THROWS_AS(local_bic(ds, 0, {1}), std::invalid_argument);
    CHECK_THROWS_AS(local_bic(ds, 1, {0}), std::invalid_argument);
}

TEST_CASE("graph bic decomposes exactly") {
    SimSpec spec;
    spec.p = 5;
    Dag dag = random_dag(spec.p, 0.4, 3);
    LinearGaussianModel m = random_model(dag, spec, 4);
    Dataset ds = sample(m, 400, 5);

    double total = graph_bic(ds, dag);
    double manual = 0;
    for (int v = 0; v < spec.p; ++v) {
        auto ps = dag.graph().parents(v);
        manual += local_bic(ds, v, ps);
    }
    CHECK(total == manual);

    LocalScoreCache cache;
    CHECK(graph_bic(ds, dag, &cache) == total);
    CHECK(graph_bic(ds, dag, &cache) == total);
    CHECK(cache.hits() > 0);

    // one-node difference = local difference
    Dag empty = Dag(MixedGraph::with_nodes(dag.graph().names()));
    double base = graph_bic(ds, empty);
    MixedGraph g1 = MixedGraph::with_nodes(dag.graph().names());
    g1.add_directed(0, 1);
    double with_edge = graph_bic(ds, Dag(g1));
    CHECK(with_edge - base == doctest::Approx(local_bic(ds, 1, {0}) - local_bic(ds, 1, {}))
                                  .epsilon(1e-12));
}

TEST_CASE("markov equivalent chains score almost identically") {
    std::vector<double> gaps;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::size_t n = 10000;
        std::vector<double> v;
        for (std::size_t r = 0; r < n; ++r) {
            double x = rng.normal();
            double y = x + rng.normal();
            double z = y + rng.normal();
            v.push_back(x);
            v.push_back(y);
            v.push_back(z);
        }
        Dataset ds({"x", "y", "z"},
                   {ColumnKind::continuous(), ColumnKind::continuous(), ColumnKind::continuous()},
                   std::move(v), n);
        Dag fwd = testkit::make_dag({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}});
        Dag rev = testkit::make_dag({"x", "y", "z"}, {{"z", "y"}, {"y", "x"}});
        gaps.push_back(std::abs(graph_bic(ds, fwd) - graph_bic(ds, rev)) / static_cast<double>(n));
    }
    std::sort(gaps.begin(), gaps.end());
    CHECK(gaps[gaps.size() / 2] <= 0.01);
}

TEST_CASE("scores are bit-identical across repeated evaluation") {
    Dataset ds = two_cols(300, 21, true);
    double a = local_bic(ds, 1, {0});
    double b = local_bic(ds, 1, {0});
    CHECK(a == b);
}

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/features.hpp"
#include "causalkit/rng.hpp"

using namespace causalkit;

namespace {

// Three latent blocks, each driving three observed copies.
Dataset block_dataset(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> names = {"f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"};
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) {
        double l0 = rng.normal(), l1 = rng.normal(), l2 = rng.normal();
        for (double l : {l0, l1, l2})
            for (int c = 0; c < 3; ++c) v.push_back(l + 0.3 * rng.normal());
    }
    return Dataset(names, std::vector<ColumnKind>(9, ColumnKind::continuous()), std::move(v), n);
}

Dataset gaussian_blob(std::size_t n, int p, std::uint64_t seed, double offset = 0.0,
                      bool two_clusters = false) {
    Rng rng(seed);
    std::vector<std::string> names;
    for (int c = 0; c < p; ++c) names.push_back("g" + std::to_string(c));
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) {
        double shift = two_clusters && (r % 2 == 0) ? offset : (two_clusters ? -offset : 0.0);
        for (int c = 0; c < p; ++c) v.push_back(shift + rng.normal());
    }
    return Dataset(names, std::vector<ColumnKind>(static_cast<std::size_t>(p),
                                                  ColumnKind::continuous()),
                   std::move(v), n);
}

Dataset labeled_by_first_feature(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) {
        double x1 = rng.normal(), x2 = rng.normal();
        v.push_back(x1);
        v.push_back(x2);
        v.push_back(x1 > 0 ? 1.0 : 0.0);
    }
    return Dataset({"x1", "x2", kSyntheticLabelColumn},
                   {ColumnKind::continuous(), ColumnKind::continuous(), ColumnKind::discrete_k(2)},
                   std::move(v), n);
}

}  // namespace

TEST_CASE("pfa with k equal to p keeps everything") {
    Dataset ds = gaussian_blob(200, 4, 3);
    FeatureRanking r = pfa(ds, 4, 1);
    CHECK(r.selected.size() == 4);
    std::set<std::string> sel(r.selected.begin(), r.selected.end());
    CHECK(sel == std::set<std::string>(ds.names().begin(), ds.names().end()));
}

TEST_CASE("pfa picks one representative per block") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Dataset ds = block_dataset(2000, seed);
        FeatureRanking r = pfa(ds, 3, seed);
        REQUIRE(r.selected.size() == 3);
        std::set<int> blocks;
        for (const auto& name : r.selected) blocks.insert((name[1] - '0') / 3);
        if (blocks.size() == 3) ++ok;
    }
    CHECK(ok >= 4);
}

TEST_CASE("pfa identical columns break ties lexicographically") {
    Rng rng(8);
    std::vector<double> v;
    std::size_t n = 100;
    for (std::size_t r = 0; r < n; ++r) {
        double x = rng.normal();
        v.push_back(x);
        v.push_back(x);
    }
    Dataset ds({"b", "a"}, {ColumnKind::continuous(), ColumnKind::continuous()}, std::move(v), n);
    FeatureRanking r = pfa(ds, 1, 0);
    REQUIRE(r.selected.size() == 1);
    CHECK(r.selected[0] == "a");
}

TEST_CASE("pfa is invariant under column permutation") {
    Dataset ds = block_dataset(1000, 5);
    std::vector<std::string> shuffled = {"f4", "f8", "f0", "f2", "f6", "f1", "f5", "f3", "f7"};
    Dataset perm = select_columns(ds, shuffled);
    FeatureRanking a = pfa(ds, 3, 7);
    FeatureRanking b = pfa(perm, 3, 7);
    CHECK(a.selected == b.selected);
}

TEST_CASE("pfa input validation") {
    Dataset ds = gaussian_blob(50, 3, 1);
    CHECK_THROWS(pfa(ds, 4, 0));
    CHECK_THROWS(pfa(ds, 0, 0));
}

TEST_CASE("mixture selects one component for a single gaussian") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Dataset ds = gaussian_blob(2000, 2, seed);
        MixtureModel m = fit_mixture(ds, 5, seed);
        if (m.k == 1) ++ok;
    }
    CHECK(ok >= 8);
}

TEST_CASE("mixture finds two well separated components") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Dataset ds = gaussian_blob(2000, 2, seed, 5.0, true);
        MixtureModel m = fit_mixture(ds, 5, seed);
        if (m.k == 2) ++ok;
    }
    CHECK(ok >= 9);
}

TEST_CASE("mixture invariants hold") {
    Dataset ds = gaussian_blob(500, 3, 13, 4.0, true);
    MixtureModel m = fit_mixture(ds, 4, 13);
    double wsum = 0;
    for (double w : m.weights) wsum += w;
    CHECK(std::abs(wsum - 1.0) <= 1e-9);
    for (const auto& row : m.variances)
        for (double var : row) CHECK(var >= 1e-6);
    CHECK(m.means.size() == static_cast<std::size_t>(m.k));
}

TEST_CASE("real-vs-synthetic construction") {
    Dataset ds = gaussian_blob(300, 2, 4);
    MixtureModel m = fit_mixture(ds, 3, 4);
    Dataset labeled = make_real_vs_synth(ds, m, 9);
    CHECK(labeled.n() == 600);
    CHECK(labeled.p() == 3);
    int li = labeled.index_of(kSyntheticLabelColumn);
    REQUIRE(li >= 0);
    CHECK(labeled.kind(static_cast<std::size_t>(li)) == ColumnKind::discrete_k(2));
    double mean = 0;
    for (std::size_t r = 0; r < labeled.n(); ++r)
        mean += labeled.value(r, static_cast<std::size_t>(li));
    CHECK(mean / labeled.n() == doctest::Approx(0.5));

    Dataset again = make_real_vs_synth(ds, m, 9);
    for (std::size_t r = 0; r < labeled.n(); ++r)
        for (std::size_t c = 0; c < labeled.p(); ++c)
            CHECK(labeled.value(r, c) == again.value(r, c));
}

TEST_CASE("synthetic marginals track the mixture means") {
    Dataset ds = gaussian_blob(5000, 2, 21, 2.0, true);
    MixtureModel m = fit_mixture(ds, 3, 21);
    Dataset labeled = make_real_vs_synth(ds, m, 5);
    int li = labeled.index_of(kSyntheticLabelColumn);
    double mix_mean = 0;
    for (int c = 0; c < m.k; ++c) mix_mean += m.weights[static_cast<std::size_t>(c)] * m.means[static_cast<std::size_t>(c)][0];
    double synth_mean = 0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < labeled.n(); ++r)
        if (labeled.value(r, static_cast<std::size_t>(li)) == 0.0) {
            synth_mean += labeled.value(r, 0);
            ++count;
        }
    synth_mean /= static_cast<double>(count);
    // 3 standard errors with per-row sd roughly 2.2
    CHECK(std::abs(synth_mean - mix_mean) <= 3.0 * 2.5 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("label collision is rejected") {
    Rng rng(1);
    std::vector<double> v = {0.5, 1.5};
    Dataset ds({kSyntheticLabelColumn}, {ColumnKind::continuous()}, std::move(v), 2);
    MixtureModel m = fit_mixture(ds, 1, 1);
    CHECK_THROWS(make_real_vs_synth(ds, m, 0));
}

TEST_CASE("separator importances favor the discriminative feature") {
    for (SeparatorKind kind : {SeparatorKind::LINEAR, SeparatorKind::TREE_ENSEMBLE}) {
        int ok = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Dataset labeled = labeled_by_first_feature(800, seed);
            Separator s = train_separator(labeled, kind, seed);
            double total = 0;
            for (const auto& [name, w] : s.importances) {
                CHECK(w >= 0.0);
                total += w;
            }
            CHECK(std::abs(total - 1.0) <= 1e-9);
            if (s.importances.at("x1") > s.importances.at("x2")) ++ok;
        }
        CHECK(ok >= 9);
    }
}

TEST_CASE("separator rejects a single-class dataset") {
    std::vector<double> v;
    for (int r = 0; r < 40; ++r) {
        v.push_back(r * 0.1);
        v.push_back(1.0);
    }
    Dataset labeled({"x", kSyntheticLabelColumn},
                    {ColumnKind::continuous(), ColumnKind::discrete_k(2)}, std::move(v), 40);
    CHECK_THROWS(train_separator(labeled, SeparatorKind::LINEAR, 0));
}

TEST_CASE("unsupervised importance on a single feature") {
    Dataset ds = gaussian_blob(200, 1, 2);
    FeatureRanking r = unsupervised_importance(ds, SeparatorKind::LINEAR, 1, 2);
    REQUIRE(r.selected.size() == 1);
    CHECK(r.selected[0] == "g0");
}

TEST_CASE("unsupervised importance is deterministic") {
    Dataset ds = block_dataset(500, 3);
    FeatureRanking a = unsupervised_importance(ds, SeparatorKind::TREE_ENSEMBLE, 3, 11);
    FeatureRanking b = unsupervised_importance(ds, SeparatorKind::TREE_ENSEMBLE, 3, 11);
    CHECK(a.selected == b.selected);
    CHECK(a.scores == b.scores);
}

TEST_CASE("tree importance surfaces dependent features") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::size_t n = 1000;
        std::vector<std::string> names;
        for (int c = 0; c < 10; ++c) names.push_back("v" + std::to_string(c));
        std::vector<double> v;
        for (std::size_t r = 0; r < n; ++r) {
            // v0, v1, v2 lie on a tight closed curve; a diagonal-covariance
            // mixture cannot tile the curve, so the synthetic contrast makes
            // those three features discriminative for the tree ensemble.
            double th = rng.uniform() * 6.283185307179586;
            v.push_back(2.0 * std::cos(th) + 0.1 * rng.normal());
            v.push_back(2.0 * std::sin(th) + 0.1 * rng.normal());
            v.push_back(2.0 * std::cos(2.0 * th) + 0.1 * rng.normal());
            for (int c = 3; c < 10; ++c) v.push_back(rng.normal());
        }
        Dataset ds(names, std::vector<ColumnKind>(10, ColumnKind::continuous()), std::move(v), n);
        FeatureRanking r = unsupervised_importance(ds, SeparatorKind::TREE_ENSEMBLE, 3, seed);
        int hits = 0;
        for (const auto& name : r.selected)
            if (name == "v0" || name == "v1" || name == "v2") ++hits;
        if (hits >= 2) ++ok;
    }
    CHECK(ok >= 14);
}

TEST_CASE("rfe boundary cases") {
    Dataset ds = block_dataset(400, 6);
    FeatureRanking all = rfe(ds, 9, 6);
    CHECK(all.selected.size() == 9);
    FeatureRanking one = rfe(ds, 1, 6);
    CHECK(one.selected.size() == 1);
}

TEST_CASE("rfe is deterministic and ranks survivors above eliminated features") {
    Dataset ds = block_dataset(500, 6);
    FeatureRanking a = rfe(ds, 3, 6);
    FeatureRanking b = rfe(ds, 3, 6);
    CHECK(a.selected == b.selected);
    CHECK(a.scores == b.scores);
    double min_selected = 1e300;
    for (const auto& name : a.selected) min_selected = std::min(min_selected, a.scores.at(name));
    for (const auto& [name, score] : a.scores) {
        bool selected = std::find(a.selected.begin(), a.selected.end(), name) != a.selected.end();
        if (!selected) CHECK(score < min_selected);
    }
}

TEST_CASE("rankings respect score order with lexicographic ties") {
    Dataset ds = block_dataset(500, 15);
    for (int k = 1; k <= 9; ++k) {
        FeatureRanking r = pfa(ds, k, 15);
        REQUIRE(static_cast<int>(r.selected.size()) == k);
        for (std::size_t i = 1; i < r.selected.size(); ++i) {
            double prev = r.scores.at(r.selected[i - 1]);
            double cur = r.scores.at(r.selected[i]);
            CHECK((prev > cur || (prev == cur && r.selected[i - 1] < r.selected[i])));
        }
    }
}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalkit/dataset.hpp"

namespace causalkit {

// Per-feature importance scores plus the selected top-k subset. Selected
// features are the k highest-scoring, ties broken lexicographically.
struct FeatureRanking {
    std::string algorithm;
    std::map<std::string, double> scores;
    std::vector<std::string> selected;
};

// Diagonal-covariance Gaussian mixture.
struct MixtureModel {
    int k = 1;
    std::vector<double> weights;                  // simplex
    std::vector<std::vector<double>> means;       // k x p
    std::vector<std::vector<double>> variances;   // k x p, floored at 1e-6
};

enum class SeparatorKind { LINEAR, TREE_ENSEMBLE };

// Classifier trained to tell real rows from mixture samples; only its
// feature importances and holdout accuracy are kept.
struct Separator {
    SeparatorKind kind = SeparatorKind::LINEAR;
    std::map<std::string, double> importances;  // non-negative, sum 1
    double holdout_accuracy = 0.0;
};

inline const char* kSyntheticLabelColumn = "__synthetic_label__";

// Principal feature analysis: eigenvectors of the correlation matrix,
// k-means over the per-feature loading rows, one representative feature
// per cluster (nearest to its centroid).
FeatureRanking pfa(const Dataset& ds, int k, std::uint64_t seed);

// EM fits for K = 1..k_max (k-means init, 3 restarts, tol 1e-6, at most
// 200 iterations); the K minimizing BIC wins.
MixtureModel fit_mixture(const Dataset& ds, int k_max, std::uint64_t seed);

// n mixture samples appended to the real rows with a DISCRETE(2) label
// column (real = 1, synthetic = 0); row order shuffled by seed.
Dataset make_real_vs_synth(const Dataset& ds, const MixtureModel& model, std::uint64_t seed);

// 70/30 split by seed. LINEAR: logistic regression by full-batch gradient
// descent (lr 0.1, 500 epochs, L2 1e-4, standardized inputs), importances
// from |coefficients|. TREE_ENSEMBLE: 25 bagged depth-<=6 CART trees with
// sqrt(p) feature subsampling, importances from total Gini decrease.
Separator train_separator(const Dataset& labeled, SeparatorKind kind, std::uint64_t seed);

// fit_mixture(k_max 10) -> make_real_vs_synth -> train_separator; top-k
// by importance. The classification output itself is discarded.
FeatureRanking unsupervised_importance(const Dataset& ds, SeparatorKind kind, int k,
                                       std::uint64_t seed);

// Recursive elimination of the lowest-|coefficient| feature of the LINEAR
// separator until k remain; score is the elimination round.
FeatureRanking rfe(const Dataset& ds, int k, std::uint64_t seed);

}  // namespace causalkit

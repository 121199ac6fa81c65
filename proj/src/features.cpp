#include "causalkit/features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "causalkit/rng.hpp"

namespace causalkit {

namespace {

constexpr double kVarianceFloor = 1e-6;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct KMeans {
    std::vector<int> assign;
    std::vector<std::vector<double>> centroids;
};

KMeans kmeans(const std::vector<std::vector<double>>& points, int k, Rng& rng,
              int max_iters = 100) {
    std::size_t n = points.size();
    std::size_t dim = points.empty() ? 0 : points[0].size();
    KMeans km;
    km.centroids.reserve(static_cast<std::size_t>(k));

    // k-means++ seeding
    std::vector<bool> chosen(n, false);
    std::size_t first = rng.uniform_index(n);
    chosen[first] = true;
    km.centroids.push_back(points[first]);
    std::vector<double> d2(n);
    while (static_cast<int>(km.centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : km.centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = chosen[i] ? 0.0 : best;
            total += d2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick == n)
                for (std::size_t i = n; i-- > 0;)
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
        }
        if (pick == n) {
            // all remaining mass is on duplicates; take the first unchosen
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
        }
        chosen[pick] = true;
        km.centroids.push_back(points[pick]);
    }

    km.assign.assign(n, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = sq_dist(points[i], km.centroids[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points[i], km.centroids[static_cast<std::size_t>(c)]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (km.assign[i] != best) {
                km.assign[i] = best;
                moved = true;
            }
        }
        // re-seed empty clusters with the point farthest from its centroid
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int a : km.assign) ++sizes[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(km.assign[i])] < 2) continue;
                double d = sq_dist(points[i], km.centroids[static_cast<std::size_t>(km.assign[i])]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == n) continue;
            --sizes[static_cast<std::size_t>(km.assign[far])];
            km.assign[far] = c;
            ++sizes[static_cast<std::size_t>(c)];
            moved = true;
        }
        for (int c = 0; c < k; ++c) {
            std::vector<double> mean(dim, 0.0);
            int cnt = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (km.assign[i] != c) continue;
                ++cnt;
                for (std::size_t d = 0; d < dim; ++d) mean[d] += points[i][d];
            }
            if (cnt > 0) {
                for (double& m : mean) m /= static_cast<double>(cnt);
                km.centroids[static_cast<std::size_t>(c)] = std::move(mean);
            }
        }
        if (!moved) break;
    }
    return km;
}

std::vector<std::string> top_k_by_score(const std::map<std::string, double>& scores, int k) {
    std::vector<std::pair<std::string, double>> v(scores.begin(), scores.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) out.push_back(v[static_cast<std::size_t>(i)].first);
    return out;
}

void check_k(int k, std::size_t p, const char* who) {
    if (k < 1 || static_cast<std::size_t>(k) > p)
        throw std::invalid_argument(std::string(who) + ": need 1 <= k <= p");
}

}  // namespace

FeatureRanking pfa(const Dataset& ds, int k, std::uint64_t seed) {
    check_k(k, ds.p(), "pfa");
    std::size_t p = ds.p(), n = ds.n();

    // canonical feature order by name, so column permutation cannot matter
    std::vector<std::string> names = ds.names();
    std::sort(names.begin(), names.end());
    Dataset sorted = select_columns(ds, names);
    Dataset sd = standardize(sorted);

    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                     static_cast<Eigen::Index>(p));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += sd.value(r, a) * sd.value(r, b);
            double c = n > 1 ? s / static_cast<double>(n - 1) : 0.0;
            corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
            corr(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = c;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pfa: eigendecomposition failed");
    // eigenvalues come back ascending; we want the leading components
    Eigen::VectorXd evals = eig.eigenvalues();
    Eigen::MatrixXd evecs = eig.eigenvectors();
    double total = 0.0;
    for (Eigen::Index i = 0; i < evals.size(); ++i) total += std::max(evals(i), 0.0);
    int q = 0;
    double acc = 0.0;
    for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {
        acc += std::max(evals(i), 0.0);
        ++q;
        if (total > 0.0 && acc / total >= 0.90) break;
    }
    q = std::max(1, std::min(q, k));

    // loading rows; each component's sign fixed by its largest entry
    std::vector<std::vector<double>> rows(p, std::vector<double>(static_cast<std::size_t>(q), 0.0));
    for (int comp = 0; comp < q; ++comp) {
        Eigen::Index col = evals.size() - 1 - comp;
        Eigen::Index arg = 0;
        for (Eigen::Index r = 1; r < evecs.rows(); ++r)
            if (std::fabs(evecs(r, col)) > std::fabs(evecs(arg, col))) arg = r;
        double sign = evecs(arg, col) < 0.0 ? -1.0 : 1.0;
        for (std::size_t f = 0; f < p; ++f)
            rows[f][static_cast<std::size_t>(comp)] = sign * evecs(static_cast<Eigen::Index>(f), col);
    }

    Rng rng(seed);
    KMeans km = kmeans(rows, k, rng);

    FeatureRanking out;
    out.algorithm = "pfa";
    for (const auto& nm : names) out.scores[nm] = -1e18;
    for (int c = 0; c < k; ++c) {
        std::size_t best = p;
        double best_d = 0.0;
        for (std::size_t f = 0; f < p; ++f) {
            if (km.assign[f] != c) continue;
            double d = sq_dist(rows[f], km.centroids[static_cast<std::size_t>(c)]);
            if (best == p || d < best_d || (d == best_d && names[f] < names[best])) {
                best = f;
                best_d = d;
            }
        }
        if (best < p) out.scores[names[best]] = -std::sqrt(best_d);
    }
    out.selected = top_k_by_score(out.scores, k);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double gmm_log_likelihood(const std::vector<std::vector<double>>& x, const MixtureModel& m) {
    std::size_t p = x.empty() ? 0 : x[0].size();
    double ll = 0.0;
    for (const auto& row : x) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> logp(static_cast<std::size_t>(m.k));
        for (int c = 0; c < m.k; ++c) {
            double lp = std::log(m.weights[static_cast<std::size_t>(c)]);
            for (std::size_t d = 0; d < p; ++d) {
                double var = m.variances[static_cast<std::size_t>(c)][d];
                double diff = row[d] - m.means[static_cast<std::size_t>(c)][d];
                lp += -0.5 * (std::log(2.0 * 3.14159265358979323846 * var) + diff * diff / var);
            }
            logp[static_cast<std::size_t>(c)] = lp;
            best = std::max(best, lp);
        }
        double s = 0.0;
        for (double lp : logp) s += std::exp(lp - best);
        ll += best + std::log(s);
    }
    return ll;
}

MixtureModel gmm_em(const std::vector<std::vector<double>>& x, int k, Rng& rng, double* loglik_out) {
    std::size_t n = x.size();
    std::size_t p = x[0].size();
    KMeans km = kmeans(x, k, rng);

    MixtureModel m;
    m.k = k;
    m.weights.assign(static_cast<std::size_t>(k), 0.0);
    m.means.assign(static_cast<std::size_t>(k), std::vector<double>(p, 0.0));
    m.variances.assign(static_cast<std::size_t>(k), std::vector<double>(p, 1.0));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[static_cast<std::size_t>(km.assign[i])];
    for (int c = 0; c < k; ++c) {
        std::size_t sc = static_cast<std::size_t>(c);
        m.weights[sc] = std::max(static_cast<double>(sizes[sc]), 1.0) / static_cast<double>(n);
        m.means[sc] = km.centroids[sc];
        std::vector<double> var(p, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (km.assign[i] != c) continue;
            for (std::size_t d = 0; d < p; ++d) {
                double diff = x[i][d] - m.means[sc][d];
                var[d] += diff * diff;
            }
        }
        for (std::size_t d = 0; d < p; ++d)
            m.variances[sc][d] = std::max(sizes[sc] > 0 ? var[d] / sizes[sc] : 1.0, kVarianceFloor);
    }
    double wsum = 0.0;
    for (double w : m.weights) wsum += w;
    for (double& w : m.weights) w /= wsum;

    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> resp(n * static_cast<std::size_t>(k));
    for (int iter = 0; iter < 200; ++iter) {
        // E step
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                std::size_t sc = static_cast<std::size_t>(c);
                double lp = std::log(m.weights[sc]);
                for (std::size_t d = 0; d < p; ++d) {
                    double var = m.variances[sc][d];
                    double diff = x[i][d] - m.means[sc][d];
                    lp += -0.5 * (std::log(2.0 * 3.14159265358979323846 * var) + diff * diff / var);
                }
                resp[i * static_cast<std::size_t>(k) + sc] = lp;
                best = std::max(best, lp);
            }
            double s = 0.0;
            for (int c = 0; c < k; ++c)
                s += std::exp(resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)] - best);
            ll += best + std::log(s);
            for (int c = 0; c < k; ++c) {
                auto& r = resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
                r = std::exp(r - best) / s;
            }
        }
        // M step
        for (int c = 0; c < k; ++c) {
            std::size_t sc = static_cast<std::size_t>(c);
            double nc = 0.0;
            std::vector<double> mean(p, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double r = resp[i * static_cast<std::size_t>(k) + sc];
                nc += r;
                for (std::size_t d = 0; d < p; ++d) mean[d] += r * x[i][d];
            }
            nc = std::max(nc, 1e-10);
            for (double& v : mean) v /= nc;
            std::vector<double> var(p, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double r = resp[i * static_cast<std::size_t>(k) + sc];
                for (std::size_t d = 0; d < p; ++d) {
                    double diff = x[i][d] - mean[d];
                    var[d] += r * diff * diff;
                }
            }
            m.weights[sc] = nc / static_cast<double>(n);
            m.means[sc] = std::move(mean);
            for (std::size_t d = 0; d < p; ++d)
                m.variances[sc][d] = std::max(var[d] / nc, kVarianceFloor);
        }
        wsum = 0.0;
        for (double w : m.weights) wsum += w;
        for (double& w : m.weights) w /= wsum;

        if (std::fabs(ll - prev_ll) <= 1e-6 * (1.0 + std::fabs(ll))) {
            prev_ll = ll;
            break;
        }
        prev_ll = ll;
    }
    *loglik_out = gmm_log_likelihood(x, m);
    return m;
}

}  // namespace

MixtureModel fit_mixture(const Dataset& ds, int k_max, std::uint64_t seed) {
    if (k_max < 1) throw std::invalid_argument("fit_mixture: k_max must be >= 1");
    if (ds.n() < 2) throw std::invalid_argument("fit_mixture: need n >= 2");
    std::size_t n = ds.n(), p = ds.p();
    std::vector<std::vector<double>> x(n, std::vector<double>(p));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) x[r][c] = ds.value(r, c);

    Rng rng(seed);
    MixtureModel best_model;
    double best_bic = std::numeric_limits<double>::infinity();
    int cap = std::min<int>(k_max, static_cast<int>(n));
    for (int k = 1; k <= cap; ++k) {
        MixtureModel best_of_k;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (int restart = 0; restart < 3; ++restart) {
            double ll;
            MixtureModel m = gmm_em(x, k, rng, &ll);
            if (ll > best_ll) {
                best_ll = ll;
                best_of_k = std::move(m);
            }
        }
        double params = static_cast<double>(k - 1) + 2.0 * static_cast<double>(k) * static_cast<double>(p);
        double bic = -2.0 * best_ll + params * std::log(static_cast<double>(n));
        if (bic < best_bic) {
            best_bic = bic;
            best_model = std::move(best_of_k);
        }
    }
    return best_model;
}

Dataset make_real_vs_synth(const Dataset& ds, const MixtureModel& model, std::uint64_t seed) {
    std::size_t n = ds.n(), p = ds.p();
    if (model.means.empty() || model.means[0].size() != p)
        throw std::invalid_argument("make_real_vs_synth: model dimension mismatch");
    if (ds.index_of(kSyntheticLabelColumn) >= 0)
        throw std::invalid_argument("make_real_vs_synth: dataset already has a column named " +
                                    std::string(kSyntheticLabelColumn));

    Rng rng(seed);
    std::size_t total = 2 * n;
    std::size_t q = p + 1;
    std::vector<double> rows(total * q);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) rows[r * q + c] = ds.value(r, c);
        rows[r * q + p] = 1.0;  // real
    }
    for (std::size_t r = 0; r < n; ++r) {
        double u = rng.uniform();
        std::size_t comp = 0;
        double acc = 0.0;
        for (std::size_t c = 0; c < model.weights.size(); ++c) {
            acc += model.weights[c];
            if (u < acc) {
                comp = c;
                break;
            }
            comp = c;
        }
        for (std::size_t d = 0; d < p; ++d)
            rows[(n + r) * q + d] = model.means[comp][d] + std::sqrt(model.variances[comp][d]) * rng.normal();
        rows[(n + r) * q + p] = 0.0;  // synthetic
    }

    std::vector<std::size_t> order = rng.permutation(total);
    std::vector<double> shuffled(total * q);
    for (std::size_t r = 0; r < total; ++r)
        for (std::size_t c = 0; c < q; ++c) shuffled[r * q + c] = rows[order[r] * q + c];

    std::vector<std::string> names = ds.names();
    names.push_back(kSyntheticLabelColumn);
    std::vector<ColumnKind> kinds;
    for (std::size_t c = 0; c < p; ++c) kinds.push_back(ColumnKind::continuous());
    kinds.push_back(ColumnKind::discrete_k(2));
    return Dataset(std::move(names), std::move(kinds), std::move(shuffled), total);
}

// ---------------------------------------------------------------------------

namespace {

struct SplitData {
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;
    std::vector<std::string> feature_names;
};

SplitData split_labeled(const Dataset& labeled, std::uint64_t seed) {
    int label_col = labeled.index_of(kSyntheticLabelColumn);
    if (label_col < 0)
        throw std::invalid_argument("train_separator: label column missing");
    SplitData sd;
    std::vector<std::size_t> feat_idx;
    for (std::size_t c = 0; c < labeled.p(); ++c) {
        if (static_cast<int>(c) == label_col) continue;
        feat_idx.push_back(c);
        sd.feature_names.push_back(labeled.name(c));
    }
    std::size_t m = labeled.n();
    Rng rng(seed);
    std::vector<std::size_t> order = rng.permutation(m);
    std::size_t train_count = m * 7 / 10;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = order[i];
        std::vector<double> x(feat_idx.size());
        for (std::size_t c = 0; c < feat_idx.size(); ++c) x[c] = labeled.value(r, feat_idx[c]);
        int y = static_cast<int>(labeled.value(r, static_cast<std::size_t>(label_col)));
        if (i < train_count) {
            sd.train_x.push_back(std::move(x));
            sd.train_y.push_back(y);
        } else {
            sd.test_x.push_back(std::move(x));
            sd.test_y.push_back(y);
        }
    }
    auto both_classes = [](const std::vector<int>& y) {
        bool c0 = false, c1 = false;
        for (int v : y) (v == 0 ? c0 : c1) = true;
        return c0 && c1;
    };
    if (!both_classes(sd.train_y) || !both_classes(sd.test_y))
        throw std::invalid_argument("train_separator: degenerate single-class split");
    return sd;
}

// logistic regression weights on standardized inputs; returns per-feature
// |w| plus holdout accuracy
std::vector<double> train_logistic(const SplitData& sd, double* accuracy) {
    std::size_t p = sd.feature_names.size();
    std::size_t m = sd.train_x.size();
    std::vector<double> mean(p, 0.0), scale(p, 1.0);
    for (const auto& row : sd.train_x)
        for (std::size_t c = 0; c < p; ++c) mean[c] += row[c];
    for (double& v : mean) v /= static_cast<double>(m);
    for (std::size_t c = 0; c < p; ++c) {
        double ss = 0.0;
        for (const auto& row : sd.train_x) {
            double d = row[c] - mean[c];
            ss += d * d;
        }
        double s = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
        scale[c] = s > 0.0 ? s : 1.0;
    }
    auto feat = [&](const std::vector<double>& row, std::size_t c) {
        return (row[c] - mean[c]) / scale[c];
    };

    std::vector<double> w(p, 0.0);
    double b = 0.0;
    constexpr double lr = 0.1, l2 = 1e-4;
    for (int epoch = 0; epoch < 500; ++epoch) {
        std::vector<double> gw(p, 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double z = b;
            for (std::size_t c = 0; c < p; ++c) z += w[c] * feat(sd.train_x[i], c);
            double pr = 1.0 / (1.0 + std::exp(-z));
            double err = pr - static_cast<double>(sd.train_y[i]);
            for (std::size_t c = 0; c < p; ++c) gw[c] += err * feat(sd.train_x[i], c);
            gb += err;
        }
        for (std::size_t c = 0; c < p; ++c) w[c] = w[c] - lr * (gw[c] / static_cast<double>(m) + l2 * w[c]);
        b -= lr * gb / static_cast<double>(m);
    }

    int correct = 0;
    for (std::size_t i = 0; i < sd.test_x.size(); ++i) {
        double z = b;
        for (std::size_t c = 0; c < p; ++c) z += w[c] * feat(sd.test_x[i], c);
        int pred = z > 0.0 ? 1 : 0;
        if (pred == sd.test_y[i]) ++correct;
    }
    *accuracy = sd.test_x.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(sd.test_x.size());

    for (double& v : w) v = std::fabs(v);
    return w;
}

// ---- bagged CART trees ----

struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int label = 0;
};

double gini(double n0, double n1) {
    double n = n0 + n1;
    if (n <= 0.0) return 0.0;
    double p0 = n0 / n, p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    std::size_t p;
    std::size_t mtry;
    Rng& rng;
    std::vector<TreeNode> nodes;
    std::vector<double>& importance;  // accumulated gini decrease per feature
    std::size_t n_total;

    int build(std::vector<std::size_t>& idx, int depth) {
        int node_id = static_cast<int>(nodes.size());
        nodes.push_back({});
        double n0 = 0.0, n1 = 0.0;
        for (std::size_t i : idx) (y[i] == 0 ? n0 : n1) += 1.0;
        nodes[static_cast<std::size_t>(node_id)].label = n1 > n0 ? 1 : 0;
        double node_gini = gini(n0, n1);
        if (depth >= 6 || idx.size() < 2 || node_gini <= 0.0) return node_id;

        // sample mtry features without replacement
        std::vector<std::size_t> feats(p);
        for (std::size_t i = 0; i < p; ++i) feats[i] = i;
        for (std::size_t i = 0; i < mtry; ++i) {
            std::size_t j = i + rng.uniform_index(p - i);
            std::swap(feats[i], feats[j]);
        }
        feats.resize(mtry);
        std::sort(feats.begin(), feats.end());

        int best_f = -1;
        double best_thr = 0.0, best_gain = 1e-12;
        for (std::size_t f : feats) {
            std::vector<std::pair<double, int>> vals;
            vals.reserve(idx.size());
            for (std::size_t i : idx) vals.emplace_back(x[i][f], y[i]);
            std::sort(vals.begin(), vals.end());
            double l0 = 0.0, l1 = 0.0, r0 = n0, r1 = n1;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                (vals[i].second == 0 ? l0 : l1) += 1.0;
                (vals[i].second == 0 ? r0 : r1) -= 1.0;
                if (vals[i].first == vals[i + 1].first) continue;
                double nl = l0 + l1, nr = r0 + r1, n = nl + nr;
                double gain = node_gini - (nl / n) * gini(l0, l1) - (nr / n) * gini(r0, r1);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_thr = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_f < 0) return node_id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx)
            (x[i][static_cast<std::size_t>(best_f)] <= best_thr ? left : right).push_back(i);
        if (left.empty() || right.empty()) return node_id;

        importance[static_cast<std::size_t>(best_f)] +=
            best_gain * static_cast<double>(idx.size()) / static_cast<double>(n_total);
        nodes[static_cast<std::size_t>(node_id)].feature = best_f;
        nodes[static_cast<std::size_t>(node_id)].threshold = best_thr;
        int l = build(left, depth + 1);
        int r = build(right, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].left = l;
        nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

int tree_predict(const std::vector<TreeNode>& nodes, const std::vector<double>& row) {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(cur)];
        cur = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(cur)].label;
}

std::vector<double> train_forest(const SplitData& sd, std::uint64_t seed, double* accuracy) {
    std::size_t p = sd.feature_names.size();
    std::size_t m = sd.train_x.size();
    std::size_t mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p)))));
    constexpr int kTrees = 25;

    std::vector<double> importance(p, 0.0);
    std::vector<std::vector<TreeNode>> forest;
    for (int t = 0; t < kTrees; ++t) {
        Rng rng(seed + 1 + static_cast<std::uint64_t>(t));
        std::vector<std::size_t> idx(m);
        for (std::size_t i = 0; i < m; ++i) idx[i] = rng.uniform_index(m);
        TreeBuilder tb{sd.train_x, sd.train_y, p, mtry, rng, {}, importance, m};
        tb.build(idx, 0);
        forest.push_back(std::move(tb.nodes));
    }

    int correct = 0;
    for (std::size_t i = 0; i < sd.test_x.size(); ++i) {
        int votes = 0;
        for (const auto& tree : forest) votes += tree_predict(tree, sd.test_x[i]);
        int pred = 2 * votes > kTrees ? 1 : 0;
        if (pred == sd.test_y[i]) ++correct;
    }
    *accuracy = sd.test_x.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(sd.test_x.size());
    return importance;
}

std::map<std::string, double> normalize_importances(const std::vector<std::string>& names,
                                                    std::vector<double> raw) {
    double total = 0.0;
    for (double v : raw) total += v;
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < names.size(); ++i)
        out[names[i]] = total > 0.0 ? raw[i] / total : 1.0 / static_cast<double>(names.size());
    return out;
}

}  // namespace

Separator train_separator(const Dataset& labeled, SeparatorKind kind, std::uint64_t seed) {
    SplitData sd = split_labeled(labeled, seed);
    Separator sep;
    sep.kind = kind;
    std::vector<double> raw;
    if (kind == SeparatorKind::LINEAR)
        raw = train_logistic(sd, &sep.holdout_accuracy);
    else
        raw = train_forest(sd, seed, &sep.holdout_accuracy);
    sep.importances = normalize_importances(sd.feature_names, std::move(raw));
    return sep;
}

FeatureRanking unsupervised_importance(const Dataset& ds, SeparatorKind kind, int k,
                                       std::uint64_t seed) {
    check_k(k, ds.p(), "unsupervised_importance");
    MixtureModel model = fit_mixture(ds, 10, seed);
    Dataset labeled = make_real_vs_synth(ds, model, seed + 1);
    Separator sep = train_separator(labeled, kind, seed + 2);
    FeatureRanking out;
    out.algorithm = kind == SeparatorKind::LINEAR ? "linear" : "tree";
    out.scores = sep.importances;
    out.selected = top_k_by_score(out.scores, k);
    return out;
}

FeatureRanking rfe(const Dataset& ds, int k, std::uint64_t seed) {
    check_k(k, ds.p(), "rfe");
    MixtureModel model = fit_mixture(ds, 10, seed);
    Dataset labeled = make_real_vs_synth(ds, model, seed + 1);

    std::vector<std::string> active = ds.names();
    std::sort(active.begin(), active.end());
    FeatureRanking out;
    out.algorithm = "rfe";
    int rounds = static_cast<int>(ds.p()) - k;
    for (int round = 1; round <= rounds; ++round) {
        std::vector<std::string> cols = active;
        cols.push_back(kSyntheticLabelColumn);
        Dataset sub = select_columns(labeled, cols);
        SplitData sd = split_labeled(sub, seed + 2);
        double acc;
        std::vector<double> w = train_logistic(sd, &acc);
        // eliminate the weakest coefficient; on ties the lexicographically
        // larger name goes, so smaller names survive
        std::size_t victim = 0;
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] < w[victim] || (w[i] == w[victim] && sd.feature_names[i] > sd.feature_names[victim]))
                victim = i;
        }
        out.scores[sd.feature_names[victim]] = static_cast<double>(round);
        active.erase(std::find(active.begin(), active.end(), sd.feature_names[victim]));
    }
    for (const auto& nm : active) out.scores[nm] = static_cast<double>(rounds + 1);
    out.selected = top_k_by_score(out.scores, k);
    return out;
}

}  // namespace causalkit

#include "causalkit/ci.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "causalkit/stats.hpp"

namespace causalkit {

namespace {

constexpr double kCorrClamp = 1.0 - 1e-12;

double clamp_corr(double r) { return std::clamp(r, -kCorrClamp, kCorrClamp); }

// correlation matrix of standardized continuous data
std::vector<double> correlation_matrix(const Dataset& ds) {
    Dataset sd = standardize(ds);
    std::size_t n = sd.n(), p = sd.p();
    std::vector<double> corr(p * p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        corr[a * p + a] = 1.0;
        for (std::size_t b = a + 1; b < p; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += sd.value(r, a) * sd.value(r, b);
            double c = n > 1 ? s / static_cast<double>(n - 1) : 0.0;
            corr[a * p + b] = corr[b * p + a] = c;
        }
    }
    return corr;
}

double partial_corr_from_matrix(const std::vector<double>& corr, std::size_t p, int i, int j,
                                const std::vector<int>& cond) {
    // Empty conditioning set: the partial correlation is the plain Pearson
    // correlation; skip the matrix inverse (and its ridge fallback) so that
    // perfectly collinear pairs still land exactly on the clamp bound.
    if (cond.empty())
        return clamp_corr(corr[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)]);
    std::vector<int> idx = {i, j};
    idx.insert(idx.end(), cond.begin(), cond.end());
    std::size_t m = idx.size();
    Eigen::MatrixXd sub(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                corr[static_cast<std::size_t>(idx[a]) * p + static_cast<std::size_t>(idx[b])];

    for (int attempt = 0; attempt < 2; ++attempt) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (lu.isInvertible()) {
            Eigen::MatrixXd prec = lu.inverse();
            double denom = prec(0, 0) * prec(1, 1);
            if (denom > 0.0) return clamp_corr(-prec(0, 1) / std::sqrt(denom));
        }
        // degenerate duplicates are common in real data; one ridge retry
        sub.diagonal().array() += 1e-8;
    }
    throw std::runtime_error("partial_correlation: singular correlation submatrix");
}

void check_ci_args(std::size_t p, int i, int j, const std::vector<int>& cond) {
    auto in_range = [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < p; };
    if (!in_range(i) || !in_range(j)) throw std::invalid_argument("ci: column index out of range");
    if (i == j) throw std::invalid_argument("ci: i == j");
    for (int s : cond) {
        if (!in_range(s)) throw std::invalid_argument("ci: conditioning index out of range");
        if (s == i || s == j) throw std::invalid_argument("ci: conditioning set contains endpoint");
    }
}

}  // namespace

OracleCiTester::OracleCiTester(Dag dag) : dag_(std::move(dag)) {}

CiResult OracleCiTester::test(int i, int j, const std::vector<int>& cond) const {
    bool sep = d_separated(dag_, i, j, cond);
    CiResult r;
    r.statistic = sep ? 0.0 : 1.0;
    r.p_value = sep ? 1.0 : 0.0;
    r.independent = sep;
    r.cond_size = static_cast<int>(cond.size());
    return r;
}

double partial_correlation(const Dataset& ds, int i, int j, const std::vector<int>& cond) {
    check_ci_args(ds.p(), i, j, cond);
    for (std::size_t c = 0; c < ds.p(); ++c)
        if (ds.kind(c).discrete)
            throw std::invalid_argument("partial_correlation: continuous columns required");
    if (ds.n() <= cond.size() + 2)
        throw std::invalid_argument("partial_correlation: need n > |S| + 2");
    return partial_corr_from_matrix(correlation_matrix(ds), ds.p(), i, j, cond);
}

namespace {

CiResult fisher_z_from_r(double r, std::size_t n, std::size_t cond_size, double alpha) {
    double df = static_cast<double>(n) - static_cast<double>(cond_size) - 3.0;
    if (df < 1.0) throw std::invalid_argument("fisher_z: need n - |S| - 3 >= 1");
    double z = std::sqrt(df) * 0.5 * std::log((1.0 + r) / (1.0 - r));
    CiResult out;
    out.statistic = z;
    out.p_value = normal_two_sided_p(z);
    out.independent = out.p_value > alpha;
    out.cond_size = static_cast<int>(cond_size);
    return out;
}

}  // namespace

CiResult fisher_z_test(const Dataset& ds, int i, int j, const std::vector<int>& cond, double alpha) {
    double r = partial_correlation(ds, i, j, cond);
    return fisher_z_from_r(r, ds.n(), cond.size(), alpha);
}

FisherZTester::FisherZTester(const Dataset& ds, double alpha)
    : p_(static_cast<int>(ds.p())), n_(ds.n()), alpha_(alpha) {
    for (std::size_t c = 0; c < ds.p(); ++c)
        if (ds.kind(c).discrete)
            throw std::invalid_argument("FisherZTester: continuous columns required");
    corr_ = correlation_matrix(ds);
}

CiResult FisherZTester::test(int i, int j, const std::vector<int>& cond) const {
    check_ci_args(static_cast<std::size_t>(p_), i, j, cond);
    if (n_ <= cond.size() + 2)
        throw std::invalid_argument("fisher_z: need n > |S| + 2");
    double r = partial_corr_from_matrix(corr_, static_cast<std::size_t>(p_), i, j, cond);
    return fisher_z_from_r(r, n_, cond.size(), alpha_);
}

CiResult g_squared_test(const Dataset& ds, int i, int j, const std::vector<int>& cond, double alpha) {
    check_ci_args(ds.p(), i, j, cond);
    if (ds.n() == 0) throw std::invalid_argument("g_squared: empty dataset");
    auto card = [&](int c) {
        if (!ds.kind(static_cast<std::size_t>(c)).discrete)
            throw std::invalid_argument("g_squared: discrete columns required");
        return ds.kind(static_cast<std::size_t>(c)).cardinality;
    };
    int ri = card(i), rj = card(j);
    long long q = 1;
    for (int s : cond) q *= card(s);

    // counts per stratum of the conditioning set
    std::map<long long, std::vector<double>> tables;  // stratum -> ri x rj counts
    for (std::size_t row = 0; row < ds.n(); ++row) {
        long long stratum = 0;
        for (int s : cond)
            stratum = stratum * card(s) + static_cast<long long>(ds.value(row, static_cast<std::size_t>(s)));
        auto& t = tables[stratum];
        if (t.empty()) t.assign(static_cast<std::size_t>(ri) * static_cast<std::size_t>(rj), 0.0);
        int vi = static_cast<int>(ds.value(row, static_cast<std::size_t>(i)));
        int vj = static_cast<int>(ds.value(row, static_cast<std::size_t>(j)));
        t[static_cast<std::size_t>(vi) * static_cast<std::size_t>(rj) + static_cast<std::size_t>(vj)] += 1.0;
    }

    double g2 = 0.0;
    for (const auto& [stratum, t] : tables) {
        std::vector<double> row_sum(static_cast<std::size_t>(ri), 0.0);
        std::vector<double> col_sum(static_cast<std::size_t>(rj), 0.0);
        double total = 0.0;
        for (int a = 0; a < ri; ++a)
            for (int b = 0; b < rj; ++b) {
                double c = t[static_cast<std::size_t>(a) * static_cast<std::size_t>(rj) + static_cast<std::size_t>(b)];
                row_sum[static_cast<std::size_t>(a)] += c;
                col_sum[static_cast<std::size_t>(b)] += c;
                total += c;
            }
        if (total <= 0.0) continue;
        for (int a = 0; a < ri; ++a)
            for (int b = 0; b < rj; ++b) {
                double obs = t[static_cast<std::size_t>(a) * static_cast<std::size_t>(rj) + static_cast<std::size_t>(b)];
                if (obs <= 0.0) continue;  // zero cells (and zero margins) contribute 0
                double exp = row_sum[static_cast<std::size_t>(a)] * col_sum[static_cast<std::size_t>(b)] / total;
                g2 += 2.0 * obs * std::log(obs / exp);
            }
    }

    double df = static_cast<double>(ri - 1) * static_cast<double>(rj - 1) * static_cast<double>(q);
    CiResult out;
    out.statistic = g2;
    out.p_value = df > 0.0 ? chi_square_sf(g2, df) : 1.0;
    out.independent = out.p_value > alpha;
    out.cond_size = static_cast<int>(cond.size());
    return out;
}

}  // namespace causalkit

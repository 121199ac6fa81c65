#pragma once

#include <memory>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

struct CiResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool independent = true;
    int cond_size = 0;
};

// Conditional-independence tester over variables indexed 0..p-1. Verdicts
// are symmetric in (i, j). Implementations are read-only after
// construction and safe to call concurrently.
class CiTester {
public:
    virtual ~CiTester() = default;
    virtual CiResult test(int i, int j, const std::vector<int>& cond) const = 0;
    virtual double alpha() const = 0;
    virtual int var_count() const = 0;
};

// Perfect tester backed by d-separation in a known DAG. p_value is 1 when
// separated and 0 otherwise.
class OracleCiTester : public CiTester {
public:
    explicit OracleCiTester(Dag dag);
    CiResult test(int i, int j, const std::vector<int>& cond) const override;
    double alpha() const override { return 0.5; }
    int var_count() const override { return dag_.node_count(); }

private:
    Dag dag_;
};

// Partial correlation of columns i and j given cond, from the inverse of
// the correlation submatrix. Clamped to [-1+1e-12, 1-1e-12]. A singular
// submatrix gets one ridge (1e-8) retry before failing.
double partial_correlation(const Dataset& ds, int i, int j, const std::vector<int>& cond);

CiResult fisher_z_test(const Dataset& ds, int i, int j, const std::vector<int>& cond, double alpha);

CiResult g_squared_test(const Dataset& ds, int i, int j, const std::vector<int>& cond, double alpha);

// Fisher-z tester with a precomputed correlation matrix. Data is
// standardized internally.
class FisherZTester : public CiTester {
public:
    FisherZTester(const Dataset& ds, double alpha);
    CiResult test(int i, int j, const std::vector<int>& cond) const override;
    double alpha() const override { return alpha_; }
    int var_count() const override { return p_; }

private:
    int p_;
    std::size_t n_;
    double alpha_;
    std::vector<double> corr_;  // p x p
};

class GSquaredTester : public CiTester {
public:
    GSquaredTester(Dataset ds, double alpha) : ds_(std::move(ds)), alpha_(alpha) {}
    CiResult test(int i, int j, const std::vector<int>& cond) const override {
        return g_squared_test(ds_, i, j, cond, alpha_);
    }
    double alpha() const override { return alpha_; }
    int var_count() const override { return static_cast<int>(ds_.p()); }

private:
    Dataset ds_;
    double alpha_;
};

}  // namespace causalkit

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalkit {

struct ColumnKind {
    bool discrete = false;
    int cardinality = 0;  // meaningful only when discrete; >= 2

    static ColumnKind continuous() { return {false, 0}; }
    static ColumnKind discrete_k(int cardinality) { return {true, cardinality}; }

    bool operator==(const ColumnKind&) const = default;
};

// Typed tabular dataset, immutable after construction. Values are stored
// row-major; discrete entries are integers in [0, cardinality).
class Dataset {
public:
    Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds,
            std::vector<double> values, std::size_t n);

    std::size_t n() const { return n_; }
    std::size_t p() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t c) const { return names_.at(c); }
    const ColumnKind& kind(std::size_t c) const { return kinds_.at(c); }
    int index_of(const std::string& name) const;  // -1 when unknown

    double value(std::size_t row, std::size_t col) const { return values_[row * p() + col]; }
    std::vector<double> column(std::size_t c) const;

    bool all_continuous() const;
    bool all_discrete() const;

private:
    std::vector<std::string> names_;
    std::vector<ColumnKind> kinds_;
    std::vector<double> values_;
    std::size_t n_;
};

// CSV ingestion. Header row required; a column whose values are all
// integers with at most 20 distinct values (and a valid [0, card) range)
// is inferred DISCRETE unless a hint says otherwise.
Dataset load_csv(const std::string& path,
                 const std::map<std::string, ColumnKind>& kind_hints = {});
Dataset parse_csv(const std::string& text,
                  const std::map<std::string, ColumnKind>& kind_hints = {});

void write_csv(const Dataset& ds, const std::string& path);
std::string to_csv(const Dataset& ds);

// Continuous columns to zero mean, unit sample variance (n-1 denominator);
// constant columns become all-zero; discrete columns pass through.
Dataset standardize(const Dataset& ds);

Dataset select_columns(const Dataset& ds, const std::vector<std::string>& names);

}  // namespace causalkit

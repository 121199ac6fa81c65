#include "causalkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace causalkit {

Dataset::Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds,
                 std::vector<double> values, std::size_t n)
    : names_(std::move(names)), kinds_(std::move(kinds)), values_(std::move(values)), n_(n) {
    if (names_.empty()) throw std::invalid_argument("Dataset: p must be >= 1");
    if (n_ == 0) throw std::invalid_argument("Dataset: n must be >= 1");
    if (kinds_.size() != names_.size()) throw std::invalid_argument("Dataset: kinds/names mismatch");
    if (values_.size() != n_ * names_.size())
        throw std::invalid_argument("Dataset: value table has wrong size");
    std::set<std::string> uniq(names_.begin(), names_.end());
    if (uniq.size() != names_.size()) throw std::invalid_argument("Dataset: duplicate column name");
    for (std::size_t c = 0; c < kinds_.size(); ++c) {
        if (!kinds_[c].discrete) continue;
        if (kinds_[c].cardinality < 2)
            throw std::invalid_argument("Dataset: discrete cardinality must be >= 2 for column " +
                                        names_[c]);
        for (std::size_t r = 0; r < n_; ++r) {
            double v = value(r, c);
            if (v != std::floor(v) || v < 0.0 || v >= kinds_[c].cardinality)
                throw std::invalid_argument("Dataset: value out of discrete range in column " +
                                            names_[c]);
        }
    }
}

int Dataset::index_of(const std::string& name) const {
    for (std::size_t c = 0; c < names_.size(); ++c)
        if (names_[c] == name) return static_cast<int>(c);
    return -1;
}

std::vector<double> Dataset::column(std::size_t c) const {
    std::vector<double> out(n_);
    for (std::size_t r = 0; r < n_; ++r) out[r] = value(r, c);
    return out;
}

bool Dataset::all_continuous() const {
    return std::none_of(kinds_.begin(), kinds_.end(), [](const ColumnKind& k) { return k.discrete; });
}

bool Dataset::all_discrete() const {
    return std::all_of(kinds_.begin(), kinds_.end(), [](const ColumnKind& k) { return k.discrete; });
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::map<std::string, ColumnKind>& kind_hints) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> names = split_csv_line(line);
    std::size_t p = names.size();
    for (const auto& n : names)
        if (n.empty()) throw std::invalid_argument("csv: empty column name in header");

    std::vector<double> values;
    std::size_t row = 0;  // data rows; the header is not counted
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != p)
            throw std::invalid_argument("csv: row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(p));
        for (std::size_t c = 0; c < p; ++c) {
            const std::string& f = fields[c];
            if (f.empty())
                throw std::invalid_argument("csv: missing value at row " + std::to_string(row) +
                                            ", column " + names[c]);
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(f, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("csv: non-numeric cell at row " + std::to_string(row) +
                                            ", column " + names[c] + ": '" + f + "'");
            }
            if (pos != f.size())
                throw std::invalid_argument("csv: non-numeric cell at row " + std::to_string(row) +
                                            ", column " + names[c] + ": '" + f + "'");
            values.push_back(v);
        }
    }
    std::size_t n = values.size() / p;
    if (n == 0) throw std::invalid_argument("csv: no data rows");

    std::vector<ColumnKind> kinds(p, ColumnKind::continuous());
    for (std::size_t c = 0; c < p; ++c) {
        auto hint = kind_hints.find(names[c]);
        if (hint != kind_hints.end()) {
            kinds[c] = hint->second;
            continue;
        }
        std::set<double> distinct;
        bool integral = true;
        double maxv = 0.0, minv = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double v = values[r * p + c];
            if (v != std::floor(v)) {
                integral = false;
                break;
            }
            distinct.insert(v);
            maxv = std::max(maxv, v);
            minv = std::min(minv, v);
        }
        if (integral && distinct.size() <= 20 && minv >= 0.0 && maxv + 1.0 >= 2.0)
            kinds[c] = ColumnKind::discrete_k(static_cast<int>(maxv) + 1);
    }
    return Dataset(std::move(names), std::move(kinds), std::move(values), n);
}

Dataset load_csv(const std::string& path, const std::map<std::string, ColumnKind>& kind_hints) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), kind_hints);
}

std::string to_csv(const Dataset& ds) {
    std::ostringstream os;
    for (std::size_t c = 0; c < ds.p(); ++c) os << (c ? "," : "") << ds.name(c);
    os << "\n";
    char buf[40];
    for (std::size_t r = 0; r < ds.n(); ++r) {
        for (std::size_t c = 0; c < ds.p(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.value(r, c));
            os << (c ? "," : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    out << to_csv(ds);
}

Dataset standardize(const Dataset& ds) {
    std::size_t n = ds.n(), p = ds.p();
    std::vector<double> values(n * p);
    for (std::size_t c = 0; c < p; ++c) {
        if (ds.kind(c).discrete) {
            for (std::size_t r = 0; r < n; ++r) values[r * p + c] = ds.value(r, c);
            continue;
        }
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += ds.value(r, c);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double d = ds.value(r, c) - mean;
            ss += d * d;
        }
        double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        if (sd <= 0.0) {
            for (std::size_t r = 0; r < n; ++r) values[r * p + c] = 0.0;
        } else {
            for (std::size_t r = 0; r < n; ++r) values[r * p + c] = (ds.value(r, c) - mean) / sd;
        }
    }
    std::vector<ColumnKind> kinds;
    for (std::size_t c = 0; c < p; ++c) kinds.push_back(ds.kind(c));
    return Dataset(ds.names(), std::move(kinds), std::move(values), n);
}

Dataset select_columns(const Dataset& ds, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& nm : names) {
        int c = ds.index_of(nm);
        if (c < 0) throw std::invalid_argument("select_columns: unknown column " + nm);
        idx.push_back(static_cast<std::size_t>(c));
    }
    std::size_t n = ds.n(), q = idx.size();
    std::vector<double> values(n * q);
    std::vector<ColumnKind> kinds;
    for (std::size_t c = 0; c < q; ++c) kinds.push_back(ds.kind(idx[c]));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < q; ++c) values[r * q + c] = ds.value(r, idx[c]);
    return Dataset(names, std::move(kinds), std::move(values), n);
}

}  // namespace causalkit

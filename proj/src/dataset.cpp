#include "lmnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lmnet/textio.hpp"

namespace lmnet {

void Schema::validate() const {
    if (feature_columns.empty()) throw ConfigError("schema: no feature columns");
    if (label_column.empty()) throw ConfigError("schema: empty label column name");
    std::set<std::string> seen;
    for (const std::string& name : feature_columns) {
        if (name.empty()) throw ConfigError("schema: empty feature column name");
        if (name != trim(name))
            throw ConfigError("schema: column name has surrounding whitespace: '" + name + "'");
        if (name.find(',') != std::string::npos)
            throw ConfigError("schema: column name contains a comma: " + name);
        if (name == label_column)
            throw ConfigError("schema: label column also listed as a feature: " + name);
        if (!seen.insert(name).second)
            throw ConfigError("schema: duplicate column name: " + name);
    }
    if (label_column.find(',') != std::string::npos)
        throw ConfigError("schema: label column name contains a comma");
    if (positive_label != 0.0 && positive_label != 1.0)
        throw ConfigError("schema: positive_label must be 0 or 1");
}

bool operator==(const Schema& a, const Schema& b) {
    return a.feature_columns == b.feature_columns && a.label_column == b.label_column &&
           a.positive_label == b.positive_label;
}

void SplitSpec::validate() const {
    const double fractions[] = {train_fraction, val_fraction, test_fraction};
    for (double f : fractions)
        if (!(f > 0.0 && f < 1.0))
            throw ConfigError("split fractions must lie strictly inside (0, 1)");
    const double sum = train_fraction + val_fraction + test_fraction;
    if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
}

SplitSizes split_sizes(std::size_t n, const SplitSpec& spec) {
    SplitSizes sizes;
    sizes.train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_fraction));
    sizes.val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_fraction));
    sizes.test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.test_fraction));
    std::size_t rem = n - (sizes.train + sizes.val + sizes.test);
    if (rem > 0) { ++sizes.val; --rem; }
    if (rem > 0) { ++sizes.test; --rem; }
    sizes.train += rem;
    return sizes;
}

namespace {

struct HeaderIndex {
    std::vector<std::size_t> feature_idx;
    std::size_t label_idx = 0;
    bool has_label = false;
};

HeaderIndex index_header(const std::string& header_line, const Schema& schema,
                         bool require_label) {
    const std::vector<std::string> names = split_csv_line(strip_cr(header_line));
    auto find = [&names](const std::string& wanted) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == wanted) return i;
        return names.size();
    };
    HeaderIndex idx;
    for (const std::string& col : schema.feature_columns) {
        const std::size_t i = find(col);
        if (i == names.size()) throw MissingColumnError(col);
        idx.feature_idx.push_back(i);
    }
    const std::size_t li = find(schema.label_column);
    if (li == names.size()) {
        if (require_label) throw MissingColumnError(schema.label_column);
    } else {
        idx.label_idx = li;
        idx.has_label = true;
    }
    return idx;
}

double parse_cell(const std::vector<std::string>& fields, std::size_t field_idx,
                  std::size_t line_no, const std::string& column) {
    if (field_idx >= fields.size())
        throw MalformedNumberError(line_no, column, "<missing field>");
    const auto v = parse_double(fields[field_idx]);
    if (!v || !std::isfinite(*v))
        throw MalformedNumberError(line_no, column, fields[field_idx]);
    return *v;
}

bool blank(const std::string& line) { return trim(line).empty(); }

struct ParsedRows {
    std::vector<double> features;  // row-major
    std::vector<double> labels;
    std::vector<std::size_t> row_ids;
    std::size_t n_rows = 0;
};

ParsedRows parse_rows(std::istream& in, const Schema& schema, bool require_label) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty input: header line expected");
    std::size_t line_no = 1;
    const HeaderIndex idx = index_header(line, schema, require_label);

    ParsedRows rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (blank(line)) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        for (std::size_t f = 0; f < idx.feature_idx.size(); ++f)
            rows.features.push_back(
                parse_cell(fields, idx.feature_idx[f], line_no, schema.feature_columns[f]));
        if (require_label) {
            if (idx.label_idx >= fields.size())
                throw MalformedNumberError(line_no, schema.label_column, "<missing field>");
            const std::string& token = fields[idx.label_idx];
            const auto v = parse_double(token);
            if (!v) throw MalformedNumberError(line_no, schema.label_column, token);
            if (*v != 0.0 && *v != 1.0) throw NonBinaryLabelError(line_no, token);
            rows.labels.push_back(*v == schema.positive_label ? 1.0 : 0.0);
        }
        rows.row_ids.push_back(line_no);
        ++rows.n_rows;
    }
    return rows;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file for reading: " + path);
    return in;
}

}  // namespace

Dataset load_csv(std::istream& in, const Schema& schema) {
    schema.validate();
    ParsedRows rows = parse_rows(in, schema, /*require_label=*/true);
    Dataset ds;
    ds.schema = schema;
    ds.x = DenseMatrix(rows.n_rows, schema.feature_columns.size(), std::move(rows.features));
    ds.y = DenseVector(std::move(rows.labels));
    ds.row_ids = std::move(rows.row_ids);
    return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in = open_input(path);
    return load_csv(in, schema);
}

void write_csv(const Dataset& ds, std::ostream& out) {
    for (std::size_t j = 0; j < ds.schema.feature_columns.size(); ++j)
        out << ds.schema.feature_columns[j] << ',';
    out << ds.schema.label_column << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.x.cols(); ++j) out << format_double(ds.x(i, j)) << ',';
        out << format_double(ds.y[i]) << '\n';
    }
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    write_csv(ds, out);
    if (!out) throw IoError("write failed: " + path);
}

std::pair<DenseMatrix, std::vector<std::size_t>> load_features_csv(std::istream& in,
                                                                   const Schema& schema) {
    schema.validate();
    ParsedRows rows = parse_rows(in, schema, /*require_label=*/false);
    DenseMatrix x(rows.n_rows, schema.feature_columns.size(), std::move(rows.features));
    return {std::move(x), std::move(rows.row_ids)};
}

std::pair<DenseMatrix, std::vector<std::size_t>> load_features_csv(const std::string& path,
                                                                   const Schema& schema) {
    std::ifstream in = open_input(path);
    return load_features_csv(in, schema);
}

NormStats fit_normalization(const Dataset& ds) {
    if (ds.size() == 0) throw std::invalid_argument("fit_normalization: empty dataset");
    const std::size_t n = ds.size();
    const std::size_t d = ds.x.cols();
    NormStats stats;
    stats.feature_names = ds.schema.feature_columns;
    stats.mean.assign(d, 0.0);
    stats.stddev.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += ds.x(i, j);
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = ds.x(i, j) - m;
            var += dx * dx;
        }
        stats.mean[j] = m;
        stats.stddev[j] = std::sqrt(var / static_cast<double>(n));
    }
    return stats;
}

namespace {

void check_stats_match(const std::vector<std::string>& names, const NormStats& stats) {
    if (stats.feature_names != names)
        throw DataError("normalization stats do not match the dataset schema");
}

}  // namespace

DenseMatrix apply_normalization(const DenseMatrix& x, const NormStats& stats) {
    if (x.cols() != stats.mean.size())
        throw DataError("normalization stats do not match the feature count");
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const double sd = stats.stddev[j] == 0.0 ? 1.0 : stats.stddev[j];
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = (x(i, j) - stats.mean[j]) / sd;
    }
    return out;
}

Dataset apply_normalization(const Dataset& ds, const NormStats& stats) {
    check_stats_match(ds.schema.feature_columns, stats);
    Dataset out;
    out.schema = ds.schema;
    out.y = ds.y;
    out.row_ids = ds.row_ids;
    out.x = apply_normalization(ds.x, stats);
    return out;
}

DenseVector normalize_row(const DenseVector& x, const NormStats& stats) {
    if (x.size() != stats.mean.size())
        throw DataError("normalization stats do not match the feature count");
    DenseVector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double sd = stats.stddev[j] == 0.0 ? 1.0 : stats.stddev[j];
        out[j] = (x[j] - stats.mean[j]) / sd;
    }
    return out;
}

namespace {

// Fisher-Yates with raw 64-bit draws so the permutation depends only on the seed.
void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(gen() % i);
        std::swap(v[i - 1], v[j]);
    }
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.schema = ds.schema;
    out.x = DenseMatrix(rows.size(), ds.x.cols());
    out.y = DenseVector(rows.size());
    out.row_ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t src = rows[i];
        for (std::size_t j = 0; j < ds.x.cols(); ++j) out.x(i, j) = ds.x(src, j);
        out.y[i] = ds.y[src];
        out.row_ids.push_back(ds.row_ids[src]);
    }
    return out;
}

struct IndexParts {
    std::vector<std::size_t> train, val, test;
};

void assign_blocks(const std::vector<std::size_t>& shuffled, const SplitSizes& sizes,
                   IndexParts& parts) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < sizes.train; ++i) parts.train.push_back(shuffled[pos++]);
    for (std::size_t i = 0; i < sizes.val; ++i) parts.val.push_back(shuffled[pos++]);
    for (std::size_t i = 0; i < sizes.test; ++i) parts.test.push_back(shuffled[pos++]);
}

}  // namespace

SplitResult split(const Dataset& ds, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = ds.size();
    if (n < 3) throw DataError("dataset too small to split (need at least 3 rows)");

    std::mt19937_64 gen(spec.seed);
    IndexParts parts;

    if (spec.stratified) {
        std::vector<std::size_t> negatives, positives;
        for (std::size_t i = 0; i < n; ++i)
            (ds.y[i] == 1.0 ? positives : negatives).push_back(i);
        if (negatives.empty() || positives.empty())
            throw InsufficientClassMembersError(
                "stratified split needs at least one row of each class");
        shuffle_indices(negatives, gen);
        shuffle_indices(positives, gen);
        assign_blocks(negatives, split_sizes(negatives.size(), spec), parts);
        assign_blocks(positives, split_sizes(positives.size(), spec), parts);
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        shuffle_indices(all, gen);
        assign_blocks(all, split_sizes(n, spec), parts);
    }

    std::sort(parts.train.begin(), parts.train.end());
    std::sort(parts.val.begin(), parts.val.end());
    std::sort(parts.test.begin(), parts.test.end());

    SplitResult result;
    result.train = take_rows(ds, parts.train);
    result.val = take_rows(ds, parts.val);
    result.test = take_rows(ds, parts.test);
    return result;
}

}  // namespace lmnet

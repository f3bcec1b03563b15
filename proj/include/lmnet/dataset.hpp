#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lmnet/linalg.hpp"

namespace lmnet {

struct Schema {
    std::vector<std::string> feature_columns;
    std::string label_column;
    double positive_label = 1.0;

    /// Unique, non-empty, comma-free names; label not among features;
    /// positive_label 0 or 1.
    void validate() const;
};

bool operator==(const Schema& a, const Schema& b);

struct Dataset {
    DenseMatrix x;  // samples x features
    DenseVector y;  // 0/1 labels
    Schema schema;
    std::vector<std::size_t> row_ids;  // 1-based source line numbers (header is line 1)

    std::size_t size() const { return x.rows(); }
};

/// Per-feature mean and population standard deviation. A zero stddev is
/// stored as-is and substituted by 1 when applied.
struct NormStats {
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct SplitSpec {
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;
    bool stratified = true;

    /// Fractions strictly inside (0,1) and summing to 1 within 1e-9,
    /// otherwise ConfigError.
    void validate() const;
};

struct SplitSizes {
    std::size_t train = 0;
    std::size_t val = 0;
    std::size_t test = 0;
};

/// Floor each fraction, then hand leftover rows to val, then test, then train.
SplitSizes split_sizes(std::size_t n, const SplitSpec& spec);

struct SplitResult {
    Dataset train;
    Dataset val;
    Dataset test;
};

Dataset load_csv(const std::string& path, const Schema& schema);
Dataset load_csv(std::istream& in, const Schema& schema);

/// Header + rows with %.17g values; exact under a load_csv round trip.
void write_csv(const Dataset& ds, const std::string& path);
void write_csv(const Dataset& ds, std::ostream& out);

/// Feature columns only; the label column may be absent. For score-only inputs.
std::pair<DenseMatrix, std::vector<std::size_t>> load_features_csv(const std::string& path,
                                                                   const Schema& schema);
std::pair<DenseMatrix, std::vector<std::size_t>> load_features_csv(std::istream& in,
                                                                   const Schema& schema);

NormStats fit_normalization(const Dataset& ds);
Dataset apply_normalization(const Dataset& ds, const NormStats& stats);
DenseMatrix apply_normalization(const DenseMatrix& x, const NormStats& stats);
DenseVector normalize_row(const DenseVector& x, const NormStats& stats);

/// Seeded, reproducible partition; stratified mode splits within each class
/// before merging. Parts come out ordered by original row position.
SplitResult split(const Dataset& ds, const SplitSpec& spec);

}  // namespace lmnet

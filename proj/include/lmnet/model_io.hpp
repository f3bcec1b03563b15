#pragma once

#include <iosfwd>
#include <string>

#include "lmnet/dataset.hpp"
#include "lmnet/mlp.hpp"

namespace lmnet {

/// A model file could not be read or parsed. CLI exit code 1.
struct ModelLoadError : Error {
    using Error::Error;
};

/// Everything needed to score new rows: the column schema, the training-set
/// normalization statistics and the network itself.
struct SavedModel {
    static constexpr int format_version = 1;

    Schema schema;
    NormStats norm;
    MlpModel model;
};

/// Versioned `key = value` text document, one parameter per line, every
/// number written with %.17g so load(save(m)) reproduces predictions bitwise.
void save_model(const SavedModel& m, std::ostream& out);
void save_model(const SavedModel& m, const std::string& path);

SavedModel load_model(std::istream& in);
SavedModel load_model(const std::string& path);

}  // namespace lmnet

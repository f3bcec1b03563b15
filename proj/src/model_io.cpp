#include "lmnet/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "lmnet/textio.hpp"

namespace lmnet {

namespace {

constexpr const char* kFormatTag = "lmnet-model/1";

void write_joined(std::ostream& out, const std::vector<std::string>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out << ',';
        out << items[i];
    }
}

// Strict line-oriented reader for the writer's exact output.
class LineReader {
  public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::string expect_value(const std::string& key) {
        std::string line;
        if (!std::getline(in_, line))
            throw ModelLoadError("model file truncated, expected key '" + key + "'");
        ++line_no_;
        line = strip_cr(line);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelLoadError("model file line " + std::to_string(line_no_) +
                                 ": expected 'key = value'");
        if (trim(line.substr(0, eq)) != key)
            throw ModelLoadError("model file line " + std::to_string(line_no_) + ": expected key '" +
                                 key + "', found '" + trim(line.substr(0, eq)) + "'");
        return trim(line.substr(eq + 1));
    }

    double expect_number(const std::string& what) {
        std::string line;
        if (!std::getline(in_, line))
            throw ModelLoadError("model file truncated while reading " + what);
        ++line_no_;
        const auto v = parse_double(strip_cr(line));
        if (!v || !std::isfinite(*v))
            throw ModelLoadError("model file line " + std::to_string(line_no_) + ": bad " + what);
        return *v;
    }

  private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

double parse_finite(const std::string& token, const std::string& what) {
    const auto v = parse_double(token);
    if (!v || !std::isfinite(*v)) throw ModelLoadError("model file: bad " + what + ": " + token);
    return *v;
}

}  // namespace

void save_model(const SavedModel& m, std::ostream& out) {
    out << "format = " << kFormatTag << '\n';
    out << "features = ";
    write_joined(out, m.schema.feature_columns);
    out << '\n';
    out << "label = " << m.schema.label_column << '\n';
    out << "positive_label = " << format_double(m.schema.positive_label) << '\n';
    out << "layer_sizes = ";
    for (std::size_t i = 0; i < m.model.shape.layer_sizes.size(); ++i) {
        if (i > 0) out << ',';
        out << m.model.shape.layer_sizes[i];
    }
    out << '\n';
    out << "hidden_activation = " << activation_name(m.model.shape.hidden_activation) << '\n';
    out << "output_activation = " << activation_name(m.model.shape.output_activation) << '\n';
    for (std::size_t j = 0; j < m.norm.feature_names.size(); ++j) {
        out << "norm " << j << " = " << m.norm.feature_names[j] << ','
            << format_double(m.norm.mean[j]) << ',' << format_double(m.norm.stddev[j]) << '\n';
    }
    const DenseVector beta = flatten(m.model);
    out << "params = " << beta.size() << '\n';
    for (std::size_t i = 0; i < beta.size(); ++i) out << format_double(beta[i]) << '\n';
}

void save_model(const SavedModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    save_model(m, out);
    if (!out) throw IoError("write failed: " + path);
}

SavedModel load_model(std::istream& in) {
    LineReader reader(in);
    if (reader.expect_value("format") != kFormatTag)
        throw ModelLoadError("unsupported model format (expected " + std::string(kFormatTag) + ")");

    SavedModel m;
    m.schema.feature_columns = split_csv_line(reader.expect_value("features"));
    m.schema.label_column = reader.expect_value("label");
    m.schema.positive_label = parse_finite(reader.expect_value("positive_label"), "positive_label");

    MlpShape shape;
    for (const std::string& token : split_csv_line(reader.expect_value("layer_sizes"))) {
        const double v = parse_finite(token, "layer size");
        if (v < 1.0 || v != std::floor(v)) throw ModelLoadError("model file: bad layer size " + token);
        shape.layer_sizes.push_back(static_cast<std::size_t>(v));
    }
    try {
        shape.hidden_activation = activation_from_name(reader.expect_value("hidden_activation"));
        shape.output_activation = activation_from_name(reader.expect_value("output_activation"));
        shape.validate();
        m.schema.validate();
    } catch (const std::exception& e) {
        throw ModelLoadError(std::string("model file: ") + e.what());
    }

    for (std::size_t j = 0; j < m.schema.feature_columns.size(); ++j) {
        const std::string value = reader.expect_value("norm " + std::to_string(j));
        const std::vector<std::string> parts = split_csv_line(value);
        if (parts.size() != 3 || parts[0] != m.schema.feature_columns[j])
            throw ModelLoadError("model file: bad normalization entry for feature " +
                                 std::to_string(j));
        m.norm.feature_names.push_back(parts[0]);
        m.norm.mean.push_back(parse_finite(parts[1], "normalization mean"));
        m.norm.stddev.push_back(parse_finite(parts[2], "normalization stddev"));
    }

    const double count = parse_finite(reader.expect_value("params"), "parameter count");
    if (count != std::floor(count) || count < 0.0)
        throw ModelLoadError("model file: bad parameter count");
    if (static_cast<std::size_t>(count) != shape.parameter_count())
        throw ModelLoadError("model file: parameter count does not match layer sizes");
    DenseVector beta(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = reader.expect_number("parameter");
    m.model = unflatten(shape, beta);

    if (shape.input_size() != m.schema.feature_columns.size())
        throw ModelLoadError("model file: input layer does not match feature count");
    return m;
}

SavedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelLoadError("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace lmnet

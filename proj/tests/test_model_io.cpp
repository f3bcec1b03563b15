#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "lmnet/model_io.hpp"
#include "oracles.hpp"

using namespace lmnet;

namespace {

SavedModel tiny_saved() {
    SavedModel sm;
    sm.schema = Schema{{"x1", "x2"}, "y", 1.0};
    sm.norm.feature_names = {"x1", "x2"};
    sm.norm.mean = {0.5, -0.25};
    sm.norm.stddev = {2.0, 0.0};
    MlpShape shape;
    shape.layer_sizes = {2, 2, 1};
    sm.model = unflatten(
        shape, DenseVector{0.1, -0.2, 0.3, 0.4, 0.0, 0.5, -1.0, 2.0, 0.25});
    return sm;
}

}  // namespace

TEST_CASE("saved model document layout is frozen") {
    std::ostringstream out;
    save_model(tiny_saved(), out);
    CHECK(out.str() ==
          "format = lmnet-model/1\n"
          "features = x1,x2\n"
          "label = y\n"
          "positive_label = 1\n"
          "layer_sizes = 2,2,1\n"
          "hidden_activation = sigmoid\n"
          "output_activation = sigmoid\n"
          "norm 0 = x1,0.5,2\n"
          "norm 1 = x2,-0.25,0\n"
          "params = 9\n"
          "0.10000000000000001\n"
          "-0.20000000000000001\n"
          "0.29999999999999999\n"
          "0.40000000000000002\n"
          "0\n"
          "0.5\n"
          "-1\n"
          "2\n"
          "0.25\n");
}

TEST_CASE("save then load reproduces predictions bitwise") {
    oracle::Rng rng(55);
    SavedModel sm;
    sm.schema = Schema{{"a", "b", "c"}, "label", 1.0};
    sm.norm.feature_names = {"a", "b", "c"};
    sm.norm.mean = {1.0, -2.0, 0.3};
    sm.norm.stddev = {1.5, 0.0, 7.0};
    MlpShape shape;
    shape.layer_sizes = {3, 4, 1};
    shape.hidden_activation = Activation::tanh;
    sm.model = init_model(shape, InitSpec{19});

    std::ostringstream out;
    save_model(sm, out);
    std::istringstream in(out.str());
    const SavedModel back = load_model(in);

    CHECK(back.schema.feature_columns == sm.schema.feature_columns);
    CHECK(back.schema.label_column == sm.schema.label_column);
    CHECK(back.norm.mean == sm.norm.mean);
    CHECK(back.norm.stddev == sm.norm.stddev);
    CHECK(flatten(back.model) == flatten(sm.model));

    for (int rep = 0; rep < 100; ++rep) {
        DenseVector x(3);
        for (std::size_t i = 0; i < 3; ++i) x[i] = rng.uniform(-5.0, 5.0);
        const DenseVector y0 = forward(sm.model, x);
        const DenseVector y1 = forward(back.model, x);
        CHECK(y0 == y1);
    }
}

TEST_CASE("load_model rejects broken documents") {
    std::ostringstream out;
    save_model(tiny_saved(), out);
    const std::string good = out.str();

    SUBCASE("wrong format tag") {
        std::istringstream in("format = lmnet-model/2\n");
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("truncated document") {
        std::istringstream in(good.substr(0, good.size() / 2));
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("parameter count mismatch") {
        std::string doc = good;
        const auto pos = doc.find("params = 9");
        doc.replace(pos, 10, "params = 8");
        std::istringstream in(doc);
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("non-finite parameter") {
        std::string doc = good;
        doc.replace(doc.find("\n0.5\n"), 5, "\nnan\n");
        std::istringstream in(doc);
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("normalization names must match the schema") {
        std::string doc = good;
        doc.replace(doc.find("norm 0 = x1"), 11, "norm 0 = zz");
        std::istringstream in(doc);
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("bad layer size") {
        std::string doc = good;
        doc.replace(doc.find("layer_sizes = 2,2,1"), 19, "layer_sizes = 2,0,1");
        std::istringstream in(doc);
        CHECK_THROWS_AS(load_model(in), ModelLoadError);
    }
    SUBCASE("missing model file") {
        CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), ModelLoadError);
    }
}

TEST_CASE("model file round trip through the filesystem") {
    const auto path =
        std::filesystem::temp_directory_path() / "lmnet_model_roundtrip_test.txt";
    const SavedModel sm = tiny_saved();
    save_model(sm, path.string());
    const SavedModel back = load_model(path.string());
    CHECK(flatten(back.model) == flatten(sm.model));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(save_model(sm, "/nonexistent/dir/model.txt"), IoError);
}

#include <doctest.h>

#include "oracle.hpp"

#include <rtnn/error.hpp>
#include <rtnn/format/model_spec.hpp>

#include <filesystem>
#include <random>
#include <sstream>

using namespace rtnn;
using rtnn::testing::json;

namespace {

const char* listing_model = R"({
  "in_size": 3,
  "precision": "f64",
  "layers": [
    {"type": "dense", "shape": [3, 4],
     "weights": {"kernel": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2],
                 "bias": [0, 0, 0, 0]}},
    {"type": "tanh", "shape": [4, 4]},
    {"type": "dense", "shape": [4, 1], "weights": {"kernel": [1, -1, 1, -1], "bias": [0.5]}}
  ]
})";

template <typename F>
ValidationError expect_validation_error(F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e;
    }
    FAIL("no ValidationError raised");
    throw std::logic_error("unreachable");
}

LayerSpec dense_spec(std::size_t in, std::size_t out) {
    LayerSpec l;
    l.kind = LayerKind::dense;
    l.in_size = in;
    l.out_size = out;
    l.weights.kernel.assign(in * out, 0.0);
    l.weights.bias.assign(out, 0.0);
    return l;
}

LayerSpec activation_spec(LayerKind kind, std::size_t n) {
    LayerSpec l;
    l.kind = kind;
    l.in_size = l.out_size = n;
    return l;
}

} // namespace

TEST_CASE("minimal document") {
    const auto spec = parse_model_json(
        R"({"in_size": 3, "precision": "f32", "layers": [{"type": "dense", "shape": [3, 1],
            "weights": {"kernel": [0, 0, 0], "bias": [0]}}]})");
    CHECK(spec.in_size == 3);
    CHECK(spec.precision == Precision::f32);
    REQUIRE(spec.layers.size() == 1);
    CHECK(spec.layers[0].kind == LayerKind::dense);
    CHECK(spec.out_size() == 1);
}

TEST_CASE("three-layer dense/tanh/dense document") {
    const auto spec = parse_model_json(listing_model);
    REQUIRE(spec.layers.size() == 3);
    CHECK(spec.layers[0].kind == LayerKind::dense);
    CHECK(spec.layers[1].kind == LayerKind::tanh);
    CHECK(spec.layers[2].kind == LayerKind::dense);
    CHECK(spec.layers[0].in_size == 3);
    CHECK(spec.layers[0].out_size == 4);
    CHECK(spec.layers[2].out_size == 1);
    CHECK(spec.precision == Precision::f64);

    std::istringstream stream(listing_model);
    CHECK(parse_model_json(stream) == spec);
}

TEST_CASE("dense kernel is transposed to output-major") {
    const auto spec = parse_model_json(R"({"in_size": 2, "precision": "f64", "layers": [{"type": "dense",
        "shape": [2, 3], "weights": {"kernel": [1, 2, 3, 4, 5, 6], "bias": [0, 0, 0]}}]})");
    // native [in][out] = [[1,2,3],[4,5,6]] -> [out][in]
    CHECK(spec.layers[0].weights.kernel == std::vector<double>{1, 4, 2, 5, 3, 6});
}

TEST_CASE("conv kernel taps are reordered newest first") {
    const auto spec = parse_model_json(R"({"in_size": 1, "precision": "f64", "layers": [{"type": "conv1d",
        "shape": [1, 1], "kernel_size": 3, "dilation": 2, "padding": "causal",
        "weights": {"kernel": [7, 8, 9], "bias": [0]}}]})");
    CHECK(spec.layers[0].weights.kernel == std::vector<double>{9, 8, 7});
    CHECK(spec.layers[0].kernel_size == 3);
    CHECK(spec.layers[0].dilation == 2);
}

TEST_CASE("wrong kernel count names layer, expected and actual") {
    const auto e = expect_validation_error([] {
        parse_model_json(R"({"in_size": 3, "precision": "f32", "layers": [{"type": "dense", "shape": [3, 4],
            "weights": {"kernel": [0,0,0,0,0,0,0,0,0,0,0], "bias": [0,0,0,0]}}]})");
    });
    CHECK(e.layer() == std::size_t{0});
    CHECK(e.field() == "weights.kernel");
    CHECK(e.expected() == std::size_t{12});
    CHECK(e.actual() == std::size_t{11});
}

TEST_CASE("validate_chain") {
    ModelSpec spec;
    spec.in_size = 3;
    spec.precision = Precision::f64;
    spec.layers = {dense_spec(3, 4), activation_spec(LayerKind::tanh, 4)};
    CHECK_NOTHROW(validate_chain(spec));
    CHECK_NOTHROW(validate_chain(spec));

    spec.layers[1] = activation_spec(LayerKind::tanh, 5);
    const auto e = expect_validation_error([&] { validate_chain(spec); });
    CHECK(e.layer() == std::size_t{1});

    spec.layers.clear();
    CHECK_THROWS_AS(validate_chain(spec), ValidationError);

    spec.layers = {dense_spec(3, 4)};
    spec.layers[0].weights.bias[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK(expect_validation_error([&] { validate_chain(spec); }).field() == "weights.bias");
}

TEST_CASE("gru without the recurrent bias is rejected") {
    std::mt19937_64 rng(1);
    auto layer = rtnn::testing::random_layer(LayerKind::gru, 1, 8, rng);
    layer.bias_rec.clear();
    const auto e = expect_validation_error(
        [&] { parse_model_json(rtnn::testing::model_json(1, Precision::f64, {layer})); });
    CHECK(e.layer() == std::size_t{0});
    CHECK(e.field().find("bias_recurrent") != std::string::npos);
}

TEST_CASE("malformed json reports the byte offset") {
    const std::string text = R"({"in_size": 3,, "layers": []})";
    try {
        parse_model_json(text);
        FAIL("accepted malformed JSON");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() == 15);
    }
    CHECK_THROWS_AS(parse_model_json(""), ParseError);
    CHECK_THROWS_AS(parse_model_json(R"({"in_size": NaN})"), ParseError);
}

TEST_CASE("unknown layer kinds are named") {
    try {
        parse_model_json(R"({"in_size": 3, "precision": "f32", "layers": [{"type": "conv2d", "shape": [3, 3]}]})");
        FAIL("accepted conv2d");
    } catch (const UnsupportedLayer& e) {
        CHECK(e.kind() == "conv2d");
    }
}

TEST_CASE("non-finite and out-of-range weights are rejected") {
    // 1e39 is finite as a double but overflows a 32-bit float.
    const std::string doc = R"({"in_size": 1, "precision": "%", "layers": [{"type": "dense", "shape": [1, 1],
        "weights": {"kernel": [1e39], "bias": [0]}}]})";
    auto with = [&](const char* p) {
        std::string s = doc;
        s.replace(s.find('%'), 1, p);
        return s;
    };
    CHECK(expect_validation_error([&] { parse_model_json(with("f32")); }).field() == "weights.kernel");
    CHECK_NOTHROW(parse_model_json(with("f64")));
    CHECK_THROWS_AS(parse_model_json(R"({"in_size": 1, "precision": "f64", "layers": [{"type": "dense",
        "shape": [1, 1], "weights": {"kernel": [1e400], "bias": [0]}}]})"),
                    ValidationError);
}

TEST_CASE("values are narrowed to the declared precision") {
    const auto spec = parse_model_json(R"({"in_size": 1, "precision": "f32", "layers": [{"type": "dense",
        "shape": [1, 1], "weights": {"kernel": [0.1], "bias": [0]}}]})");
    CHECK(spec.layers[0].weights.kernel[0] == static_cast<double>(0.1f));
}

TEST_CASE("schema rules") {
    auto doc = [](const std::string& layer) {
        return R"({"in_size": 2, "precision": "f32", "layers": [)" + layer + "]}";
    };
    CHECK_THROWS_AS(parse_model_json(doc(R"({"type": "conv1d", "shape": [2, 2], "kernel_size": 1,
        "padding": "same", "weights": {"kernel": [1,0,0,1], "bias": [0,0]}})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(doc(R"({"type": "conv1d", "shape": [2, 2], "kernel_size": 1, "stride": 2,
        "weights": {"kernel": [1,0,0,1], "bias": [0,0]}})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(doc(R"({"type": "dense", "shape": [2, 1],
        "weights": {"kernel": [1, 1], "bias": [0], "recurrent_kernel": [1]}})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(doc(R"({"type": "tanh", "shape": [2, 2], "weights": {"bias": [0, 0]}})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(doc(R"({"type": "tanh", "shape": [2, 2], "activation": "gelu"})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(R"({"in_size": 2, "layers": [{"type": "tanh", "shape": [2, 2]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(R"({"precision": "f32", "layers": [{"type": "tanh", "shape": [2, 2]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model_json(R"({"in_size": 2, "precision": "f16", "layers": []})"), ValidationError);
    CHECK_THROWS_AS(parse_model_json(R"({"in_size": 2, "precision": "f32", "layers": []})"), ValidationError);
    CHECK_NOTHROW(parse_model_json(doc(R"({"type": "relu", "shape": [2, 2]})")));
}

TEST_CASE("activation fields expand into standalone layers") {
    const auto spec = parse_model_json(R"({"in_size": 2, "precision": "f32", "layers": [
        {"type": "dense", "shape": [2, 2], "activation": "sigmoid", "weights": {"kernel": [1,0,0,1], "bias": [0,0]}},
        {"type": "dense", "shape": [2, 2], "activation": "linear", "weights": {"kernel": [1,0,0,1], "bias": [0,0]}},
        {"type": "dense", "shape": [2, 2], "activation": "none", "weights": {"kernel": [1,0,0,1], "bias": [0,0]}}]})");
    CHECK(spec.layers[0].activation == LayerKind::sigmoid);
    CHECK_FALSE(spec.layers[1].activation.has_value());
    const auto flat = expand_activations(spec);
    REQUIRE(flat.size() == 4);
    CHECK(flat[1].kind == LayerKind::sigmoid);
    CHECK(flat[1].in_size == 2);
    CHECK(flat[2].kind == LayerKind::dense);
}

TEST_CASE("parse and serialize round-trip on random models") {
    std::mt19937_64 rng(21);
    const LayerKind kinds[] = {LayerKind::dense, LayerKind::conv1d, LayerKind::lstm, LayerKind::gru};
    const LayerKind acts[] = {LayerKind::tanh, LayerKind::relu, LayerKind::sigmoid, LayerKind::softmax};
    std::uniform_int_distribution<std::size_t> size(1, 9), count(1, 4), pick(0, 3), taps(1, 5), dil(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const Precision p = trial % 2 ? Precision::f32 : Precision::f64;
        const std::size_t in = size(rng);
        std::vector<rtnn::testing::NativeLayer> layers;
        std::size_t width = in;
        for (std::size_t i = 0, n = count(rng); i < n; ++i) {
            const bool act = pick(rng) == 0;
            const LayerKind kind = act ? acts[pick(rng)] : kinds[pick(rng)];
            const std::size_t out = size(rng);
            const std::size_t k = taps(rng);
            auto layer = rtnn::testing::random_layer(kind, width, out, rng, p, k, dil(rng));
            if (!act && pick(rng) == 0) layer.activation = acts[pick(rng)];
            width = layer.out;
            layers.push_back(std::move(layer));
        }
        const ModelSpec spec = parse_model_json(rtnn::testing::model_json(in, p, layers));
        const std::string text = serialize_model_json(spec);
        CAPTURE(text);
        CHECK(parse_model_json(text) == spec);
        // Serialization reproduces the framework-native arrays.
        const json doc = json::parse(text);
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (!layers[i].kernel.empty())
                CHECK(doc["layers"][i]["weights"]["kernel"].get<std::vector<double>>() == layers[i].kernel);
            if (!layers[i].recurrent.empty())
                CHECK(doc["layers"][i]["weights"]["recurrent_kernel"].get<std::vector<double>>() ==
                      layers[i].recurrent);
        }
    }
}

TEST_CASE("framework-generated documents validate") {
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(RTNN_FIXTURE_DIR)) {
        const auto name = entry.path().filename().string();
        if (name.size() < 11 || name.substr(name.size() - 11) != ".model.json") continue;
        CAPTURE(name);
        CHECK_NOTHROW(load_model_file(entry.path()));
        ++seen;
    }
    CHECK(seen >= 6);
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), LoadError);
}

TEST_CASE("expected weight counts") {
    LayerSpec gru;
    gru.kind = LayerKind::gru;
    gru.in_size = 1;
    gru.out_size = 8;
    const auto c = expected_weight_counts(gru);
    CHECK(c.kernel == 24);
    CHECK(c.recurrent_kernel == 192);
    CHECK(c.bias == 24);
    CHECK(c.bias_recurrent == 24);

    LayerSpec conv;
    conv.kind = LayerKind::conv1d;
    conv.in_size = 2;
    conv.out_size = 3;
    conv.kernel_size = 4;
    CHECK(expected_weight_counts(conv).kernel == 24);
    CHECK(expected_weight_counts(conv).recurrent_kernel == 0);
}

#include <rtnn/error.hpp>
#include <rtnn/format/model_spec.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rtnn {

using json = nlohmann::json;

namespace {

// dst[c][r] = src[r][c] for src of shape [rows][cols].
std::vector<double> transpose(const std::vector<double>& src, std::size_t rows, std::size_t cols) {
    std::vector<double> dst(src.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
    return dst;
}

// Framework conv kernels are [tap][in][out] with tap 0 the oldest frame.
std::vector<double> conv_from_native(const std::vector<double>& src, std::size_t taps, std::size_t in,
                                     std::size_t out) {
    std::vector<double> dst(src.size());
    for (std::size_t k = 0; k < taps; ++k)
        for (std::size_t i = 0; i < in; ++i)
            for (std::size_t o = 0; o < out; ++o)
                dst[((taps - 1 - k) * out + o) * in + i] = src[(k * in + i) * out + o];
    return dst;
}

std::vector<double> conv_to_native(const std::vector<double>& src, std::size_t taps, std::size_t in,
                                   std::size_t out) {
    std::vector<double> dst(src.size());
    for (std::size_t k = 0; k < taps; ++k)
        for (std::size_t i = 0; i < in; ++i)
            for (std::size_t o = 0; o < out; ++o)
                dst[(k * in + i) * out + o] = src[((taps - 1 - k) * out + o) * in + i];
    return dst;
}

std::size_t read_size(const json& node, std::optional<std::size_t> layer, const char* field) {
    if (!node.is_number_integer() || node.get<std::int64_t>() < 1)
        throw ValidationError(layer, field, "must be a positive integer");
    return node.get<std::size_t>();
}

std::vector<double> read_values(const json& node, std::size_t layer, const std::string& field, Precision precision) {
    if (!node.is_array()) throw ValidationError(layer, field, "must be an array of numbers");
    std::vector<double> values;
    values.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        const json& v = node[i];
        if (!v.is_number())
            throw ValidationError(layer, field, "element " + std::to_string(i) + " is not a number");
        double x = v.get<double>();
        if (precision == Precision::f32) x = static_cast<double>(static_cast<float>(x));
        if (!std::isfinite(x))
            throw ValidationError(layer, field,
                                  "element " + std::to_string(i) + " is not finite at " +
                                      std::string(to_string(precision)));
        values.push_back(x);
    }
    return values;
}

std::optional<LayerKind> read_activation(const json& node, std::size_t layer) {
    if (!node.is_string()) throw ValidationError(layer, "activation", "must be a string");
    const auto name = node.get<std::string>();
    if (name == "none" || name == "linear") return std::nullopt;
    const auto kind = layer_kind_from_string(name);
    if (!kind || !is_activation(*kind))
        throw ValidationError(layer, "activation", "unknown activation '" + name + "'");
    return kind;
}

LayerSpec read_layer(const json& node, std::size_t index, Precision precision) {
    if (!node.is_object()) throw ValidationError(index, "layer", "must be an object");

    const auto type_it = node.find("type");
    if (type_it == node.end() || !type_it->is_string()) throw ValidationError(index, "type", "missing layer type");
    const auto type = type_it->get<std::string>();
    const auto kind = layer_kind_from_string(type);
    if (!kind) throw UnsupportedLayer(type);

    LayerSpec layer;
    layer.kind = *kind;

    const auto shape_it = node.find("shape");
    if (shape_it == node.end() || !shape_it->is_array() || shape_it->size() != 2)
        throw ValidationError(index, "shape", "must be an array [in, out]");
    layer.in_size = read_size((*shape_it)[0], index, "shape");
    layer.out_size = read_size((*shape_it)[1], index, "shape");

    if (auto it = node.find("kernel_size"); it != node.end()) layer.kernel_size = read_size(*it, index, "kernel_size");
    if (auto it = node.find("dilation"); it != node.end()) layer.dilation = read_size(*it, index, "dilation");
    if (auto it = node.find("padding"); it != node.end() && *it != "causal")
        throw ValidationError(index, "padding", "only causal padding is supported");
    if (auto it = node.find("stride"); it != node.end() && *it != 1)
        throw ValidationError(index, "stride", "only stride 1 is supported");
    if (auto it = node.find("activation"); it != node.end()) layer.activation = read_activation(*it, index);

    // Cardinalities are checked against the native arrays before any layout
    // conversion touches them.
    const WeightCounts counts = expected_weight_counts(layer);
    const auto weights_it = node.find("weights");
    if (weights_it != node.end() && !weights_it->is_object())
        throw ValidationError(index, "weights", "must be an object");

    auto take = [&](const char* role, std::size_t expected) {
        std::vector<double> values;
        if (weights_it != node.end()) {
            if (auto it = weights_it->find(role); it != weights_it->end())
                values = read_values(*it, index, std::string("weights.") + role, precision);
        }
        if (values.size() != expected) {
            const std::string field = std::string("weights.") + role;
            if (expected == 0)
                throw ValidationError(index, field,
                                      "not used by " + std::string(to_string(layer.kind)) + " layers", 0,
                                      values.size());
            if (values.empty())
                throw ValidationError(index, field, "missing (expected " + std::to_string(expected) + " values)",
                                      expected, 0);
            throw ValidationError(index, field,
                                  "expected " + std::to_string(expected) + " values, got " +
                                      std::to_string(values.size()),
                                  expected, values.size());
        }
        return values;
    };

    if (weights_it != node.end())
        for (const auto& [key, _] : weights_it->items())
            if (key != "kernel" && key != "recurrent_kernel" && key != "bias" && key != "bias_recurrent")
                throw ValidationError(index, "weights." + key, "unknown weight role");

    LayerWeights native;
    native.kernel = take("kernel", counts.kernel);
    native.recurrent_kernel = take("recurrent_kernel", counts.recurrent_kernel);
    native.bias = take("bias", counts.bias);
    native.bias_recurrent = take("bias_recurrent", counts.bias_recurrent);

    const std::size_t in = layer.in_size;
    const std::size_t out = layer.out_size;
    switch (layer.kind) {
    case LayerKind::dense: layer.weights.kernel = transpose(native.kernel, in, out); break;
    case LayerKind::conv1d: layer.weights.kernel = conv_from_native(native.kernel, layer.kernel_size, in, out); break;
    case LayerKind::lstm:
    case LayerKind::gru: {
        const std::size_t gates = layer.kind == LayerKind::lstm ? 4 : 3;
        layer.weights.kernel = transpose(native.kernel, in, gates * out);
        layer.weights.recurrent_kernel = transpose(native.recurrent_kernel, out, gates * out);
        break;
    }
    default: break;
    }
    layer.weights.bias = std::move(native.bias);
    layer.weights.bias_recurrent = std::move(native.bias_recurrent);
    return layer;
}

} // namespace

ModelSpec parse_model_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    } catch (const json::out_of_range& e) {
        // Literals such as 1e400 overflow a double: not a finite number.
        throw ValidationError(std::nullopt, "number", e.what());
    }

    if (!doc.is_object()) throw ValidationError(std::nullopt, "document", "top level must be an object");

    ModelSpec spec;
    const auto in_it = doc.find("in_size");
    if (in_it == doc.end()) throw ValidationError(std::nullopt, "in_size", "missing");
    spec.in_size = read_size(*in_it, std::nullopt, "in_size");

    const auto prec_it = doc.find("precision");
    if (prec_it == doc.end() || !prec_it->is_string()) throw ValidationError(std::nullopt, "precision", "missing");
    if (*prec_it == "f32") spec.precision = Precision::f32;
    else if (*prec_it == "f64") spec.precision = Precision::f64;
    else throw ValidationError(std::nullopt, "precision", "must be \"f32\" or \"f64\"");

    const auto layers_it = doc.find("layers");
    if (layers_it == doc.end() || !layers_it->is_array())
        throw ValidationError(std::nullopt, "layers", "must be an array");
    for (std::size_t i = 0; i < layers_it->size(); ++i)
        spec.layers.push_back(read_layer((*layers_it)[i], i, spec.precision));

    validate_chain(spec);
    return spec;
}

ModelSpec parse_model_json(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_model_json(text);
}

ModelSpec load_model_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw LoadError("cannot open model file " + path.string());
    return parse_model_json(file);
}

std::string serialize_model_json(const ModelSpec& spec) {
    json doc;
    doc["in_size"] = spec.in_size;
    doc["precision"] = std::string(to_string(spec.precision));
    doc["layers"] = json::array();
    for (const LayerSpec& layer : spec.layers) {
        json node;
        node["type"] = std::string(to_string(layer.kind));
        node["shape"] = {layer.in_size, layer.out_size};
        if (layer.activation) node["activation"] = std::string(to_string(*layer.activation));

        const std::size_t in = layer.in_size;
        const std::size_t out = layer.out_size;
        json weights = json::object();
        switch (layer.kind) {
        case LayerKind::dense: weights["kernel"] = transpose(layer.weights.kernel, out, in); break;
        case LayerKind::conv1d:
            node["kernel_size"] = layer.kernel_size;
            node["dilation"] = layer.dilation;
            weights["kernel"] = conv_to_native(layer.weights.kernel, layer.kernel_size, in, out);
            break;
        case LayerKind::lstm:
        case LayerKind::gru: {
            const std::size_t gates = layer.kind == LayerKind::lstm ? 4 : 3;
            weights["kernel"] = transpose(layer.weights.kernel, gates * out, in);
            weights["recurrent_kernel"] = transpose(layer.weights.recurrent_kernel, gates * out, out);
            if (layer.kind == LayerKind::gru) weights["bias_recurrent"] = layer.weights.bias_recurrent;
            break;
        }
        default: break;
        }
        if (!is_activation(layer.kind)) weights["bias"] = layer.weights.bias;
        node["weights"] = std::move(weights);
        doc["layers"].push_back(std::move(node));
    }
    return doc.dump();
}

} // namespace rtnn

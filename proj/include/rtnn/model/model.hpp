#pragma once

#include <rtnn/error.hpp>
#include <rtnn/format/model_spec.hpp>
#include <rtnn/layers.hpp>

#include <algorithm>
#include <istream>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace rtnn {

/// Sequential model whose architecture is chosen at run time.
///
/// Everything is allocated by load(). After that, forward() and reset() never
/// allocate, lock, or perform I/O. Frames flow through two ping-pong scratch
/// buffers sized to the widest layer.
template <typename T, Backend B = default_backend>
class Model {
public:
    using value_type = T;
    static constexpr Backend backend = B;

    /// Throws ValidationError for invalid specs and LoadError when the spec's
    /// precision does not match T or memory cannot be obtained.
    static Model load(const ModelSpec& spec) {
        validate_chain(spec);
        if (spec.precision != precision_of<T>)
            throw LoadError("model precision is " + std::string(to_string(spec.precision)) +
                            " but the loader was instantiated for " + std::string(to_string(precision_of<T>)));
        try {
            return Model(spec);
        } catch (const std::bad_alloc&) {
            throw LoadError("out of memory while loading model");
        }
    }

    Model(Model&&) noexcept = default;
    Model& operator=(Model&&) noexcept = default;

    void reset() noexcept {
        for (auto& layer : layers_) layer->reset();
    }

    /// Runs one frame. The returned view aliases internal storage and stays
    /// valid until the next forward() call.
    std::span<const T> forward(std::span<const T> input) noexcept {
        assert(input.size() == in_size_);
        T* cur = scratch_a_.data();
        T* next = scratch_b_.data();
        std::copy(input.begin(), input.end(), cur);
        for (auto& layer : layers_) {
            layer->forward(std::span<const T>(cur, layer->in_size()), std::span<T>(next, layer->out_size()));
            std::swap(cur, next);
        }
        return {cur, out_size_};
    }

    void forward(std::span<const T> input, std::span<T> output) noexcept {
        assert(output.size() == out_size_);
        const auto y = forward(input);
        std::copy(y.begin(), y.end(), output.begin());
    }

    /// First output channel; convenient for single-output models.
    T forward(const T* input) noexcept { return forward(std::span<const T>(input, in_size_))[0]; }

    std::size_t in_size() const noexcept { return in_size_; }
    std::size_t out_size() const noexcept { return out_size_; }
    Precision precision() const noexcept { return precision_of<T>; }
    std::size_t num_layers() const noexcept { return layers_.size(); }
    Layer<T, B>& layer(std::size_t i) noexcept { return *layers_[i]; }
    const Layer<T, B>& layer(std::size_t i) const noexcept { return *layers_[i]; }

private:
    explicit Model(const ModelSpec& spec) : in_size_(spec.in_size), out_size_(spec.out_size()) {
        std::size_t width = spec.in_size;
        for (const LayerSpec& ls : expand_activations(spec)) {
            layers_.push_back(make_layer(ls));
            width = std::max({width, ls.in_size, ls.out_size});
        }
        scratch_a_.assign(width, T{0});
        scratch_b_.assign(width, T{0});
    }

    static std::vector<T> narrow(const std::vector<double>& values) {
        return std::vector<T>(values.begin(), values.end());
    }

    static std::unique_ptr<Layer<T, B>> make_layer(const LayerSpec& ls) {
        const auto& w = ls.weights;
        switch (ls.kind) {
        case LayerKind::dense: {
            auto layer = std::make_unique<DenseLayer<T, B>>(ls.in_size, ls.out_size);
            layer->set_weights(narrow(w.kernel));
            layer->set_bias(narrow(w.bias));
            return layer;
        }
        case LayerKind::conv1d: {
            auto layer = std::make_unique<Conv1DLayer<T, B>>(ls.in_size, ls.out_size, ls.kernel_size, ls.dilation);
            layer->set_weights(narrow(w.kernel));
            layer->set_bias(narrow(w.bias));
            return layer;
        }
        case LayerKind::lstm: {
            auto layer = std::make_unique<LSTMLayer<T, B>>(ls.in_size, ls.out_size);
            layer->set_weights(narrow(w.kernel));
            layer->set_recurrent_weights(narrow(w.recurrent_kernel));
            layer->set_bias(narrow(w.bias));
            return layer;
        }
        case LayerKind::gru: {
            auto layer = std::make_unique<GRULayer<T, B>>(ls.in_size, ls.out_size);
            layer->set_weights(narrow(w.kernel));
            layer->set_recurrent_weights(narrow(w.recurrent_kernel));
            layer->set_bias(narrow(w.bias));
            layer->set_recurrent_bias(narrow(w.bias_recurrent));
            return layer;
        }
        default: return std::make_unique<ActivationLayer<T, B>>(ls.kind, ls.in_size);
        }
    }

    std::vector<std::unique_ptr<Layer<T, B>>> layers_;
    std::vector<T> scratch_a_;
    std::vector<T> scratch_b_;
    std::size_t in_size_;
    std::size_t out_size_;
};

/// Parses a JSON model from a stream and loads it.
template <typename T, Backend B = default_backend>
std::unique_ptr<Model<T, B>> parse_json(std::istream& in) {
    return std::make_unique<Model<T, B>>(Model<T, B>::load(parse_model_json(in)));
}

} // namespace rtnn

#pragma once

#include <rtnn/layers/layer.hpp>
#include <rtnn/layers/ops.hpp>

namespace rtnn {

/// Stateless pointwise activation (tanh, relu, sigmoid) or softmax.
template <typename T, Backend B = default_backend>
class ActivationLayer final : public Layer<T, B> {
public:
    ActivationLayer(LayerKind kind, std::size_t size) : Layer<T, B>(size, size), kind_(kind) {
        if (!is_activation(kind)) throw LoadError("not an activation layer: " + std::string(to_string(kind)));
    }

    LayerKind kind() const noexcept override { return kind_; }

    void forward(std::span<const T> in, std::span<T> out) noexcept override {
        using layers::activation_step;
        switch (kind_) {
        case LayerKind::tanh: activation_step<B, LayerKind::tanh, T, dynamic_size>(in, out); break;
        case LayerKind::relu: activation_step<B, LayerKind::relu, T, dynamic_size>(in, out); break;
        case LayerKind::sigmoid: activation_step<B, LayerKind::sigmoid, T, dynamic_size>(in, out); break;
        default: activation_step<B, LayerKind::softmax, T, dynamic_size>(in, out); break;
        }
    }

private:
    LayerKind kind_;
};

} // namespace rtnn

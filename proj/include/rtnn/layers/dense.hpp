#pragma once

#include <rtnn/kernel/buffers.hpp>
#include <rtnn/layers/layer.hpp>
#include <rtnn/layers/ops.hpp>

namespace rtnn {

/// Fully connected layer: y = W x + b. No activation is fused.
template <typename T, Backend B = default_backend>
class DenseLayer final : public Layer<T, B> {
public:
    DenseLayer(std::size_t in_size, std::size_t out_size)
        : Layer<T, B>(in_size, out_size), weights_(out_size, in_size), bias_(out_size) {}

    LayerKind kind() const noexcept override { return LayerKind::dense; }

    void forward(std::span<const T> in, std::span<T> out) noexcept override {
        layers::dense_step<B, T, dynamic_size, dynamic_size>(weights_.view(), bias_.span(), in, out);
    }

    /// Row-major [out][in].
    void set_weights(std::span<const T> w) { this->copy_weights(w, weights_.flat(), "dense weights"); }
    void set_bias(std::span<const T> b) { this->copy_weights(b, bias_.span(), "dense bias"); }

    const Mat<T>& weights() const noexcept { return weights_; }
    const Vec<T>& bias() const noexcept { return bias_; }

private:
    Mat<T> weights_;
    Vec<T> bias_;
};

} // namespace rtnn

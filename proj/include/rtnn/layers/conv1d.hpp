#pragma once

#include <rtnn/kernel/buffers.hpp>
#include <rtnn/layers/layer.hpp>
#include <rtnn/layers/ops.hpp>

#include <stdexcept>
#include <vector>

namespace rtnn {

/// Causal, stride-1, dilated 1-D convolution processed one frame at a time.
///
///   y_t[o] = b[o] + sum_k sum_j W[k][o][j] * x_{t - k*d}[j]
///
/// Past frames live in a ring buffer of (K - 1) * d + 1 frames. Frames older
/// than the last reset read as zero.
template <typename T, Backend B = default_backend>
class Conv1DLayer final : public Layer<T, B> {
public:
    Conv1DLayer(std::size_t in_size, std::size_t out_size, std::size_t kernel_size, std::size_t dilation = 1)
        : Layer<T, B>(in_size, out_size),
          kernel_size_(kernel_size),
          dilation_(dilation),
          capacity_(checked_capacity(kernel_size, dilation)),
          taps_(kernel_size * out_size * in_size, T{0}),
          bias_(out_size),
          history_(capacity_ * in_size, T{0}) {}

    LayerKind kind() const noexcept override { return LayerKind::conv1d; }

    void forward(std::span<const T> in, std::span<T> out) noexcept override {
        layers::conv1d_step<B, T, dynamic_size, dynamic_size>(
            taps_.data(), kernel_size_, dilation_, bias_.span(),
            layers::ConvHistory<T, dynamic_size>{history_, capacity_, head_}, in, out);
    }

    void reset() noexcept override {
        std::fill(history_.begin(), history_.end(), T{0});
        head_ = 0;
    }

    /// [tap][out][in], tap 0 applied to the newest frame.
    void set_weights(std::span<const T> w) { this->copy_weights(w, taps_, "conv1d weights"); }
    void set_bias(std::span<const T> b) { this->copy_weights(b, bias_.span(), "conv1d bias"); }

    std::size_t kernel_size() const noexcept { return kernel_size_; }
    std::size_t dilation() const noexcept { return dilation_; }
    std::size_t history_capacity() const noexcept { return capacity_; }
    std::size_t head() const noexcept { return head_; }

private:
    static std::size_t checked_capacity(std::size_t kernel_size, std::size_t dilation) {
        if (kernel_size < 1 || dilation < 1) throw LoadError("conv1d kernel_size and dilation must be >= 1");
        return (kernel_size - 1) * dilation + 1;
    }

    std::size_t kernel_size_;
    std::size_t dilation_;
    std::size_t capacity_;
    std::vector<T> taps_;
    Vec<T> bias_;
    std::vector<T> history_;
    std::size_t head_ = 0;
};

} // namespace rtnn

#pragma once

#include <rtnn/kernel/buffers.hpp>
#include <rtnn/layers/layer.hpp>
#include <rtnn/layers/ops.hpp>

namespace rtnn {

/// GRU cell, reset-after variant with separate input and recurrent biases,
/// gate order (z, r, h):
///
///   z = sig(W_z x + b_z + U_z h + br_z)
///   r = sig(W_r x + b_r + U_r h + br_r)
///   n = tanh(W_h x + b_h + r * (U_h h + br_h))
///   h <- z*h + (1 - z)*n
template <typename T, Backend B = default_backend>
class GRULayer final : public Layer<T, B> {
public:
    GRULayer(std::size_t in_size, std::size_t hidden_size)
        : Layer<T, B>(in_size, hidden_size),
          kernel_(3 * hidden_size, in_size),
          recurrent_(3 * hidden_size, hidden_size),
          bias_(3 * hidden_size),
          bias_recurrent_(3 * hidden_size),
          h_(hidden_size),
          xg_(3 * hidden_size),
          hg_(3 * hidden_size) {}

    LayerKind kind() const noexcept override { return LayerKind::gru; }

    void forward(std::span<const T> in, std::span<T> out) noexcept override {
        layers::gru_step<B, T, dynamic_size, dynamic_size>(kernel_.view(), recurrent_.view(), bias_.span(),
                                                           bias_recurrent_.span(), in, h_.span(), xg_.span(),
                                                           hg_.span());
        std::copy(h_.data(), h_.data() + h_.size(), out.begin());
    }

    void reset() noexcept override { h_.fill(T{0}); }

    void set_weights(std::span<const T> w) { this->copy_weights(w, kernel_.flat(), "gru kernel"); }
    void set_recurrent_weights(std::span<const T> u) {
        this->copy_weights(u, recurrent_.flat(), "gru recurrent kernel");
    }
    void set_bias(std::span<const T> b) { this->copy_weights(b, bias_.span(), "gru bias"); }
    void set_recurrent_bias(std::span<const T> b) {
        this->copy_weights(b, bias_recurrent_.span(), "gru recurrent bias");
    }

    std::span<const T> hidden_state() const noexcept { return h_.span(); }
    /// Candidate state n from the last forward call.
    std::span<const T> candidate() const noexcept { return xg_.span().subspan(2 * h_.size()); }

private:
    Mat<T> kernel_;
    Mat<T> recurrent_;
    Vec<T> bias_;
    Vec<T> bias_recurrent_;
    Vec<T> h_;
    Vec<T> xg_;
    Vec<T> hg_;
};

} // namespace rtnn

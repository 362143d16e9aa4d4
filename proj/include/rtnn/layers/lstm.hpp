#pragma once

#include <rtnn/kernel/buffers.hpp>
#include <rtnn/layers/layer.hpp>
#include <rtnn/layers/ops.hpp>

namespace rtnn {

/// LSTM cell with gate order (i, f, c, o):
///
///   i = sig(W_i x + U_i h + b_i)     f = sig(W_f x + U_f h + b_f)
///   g = tanh(W_c x + U_c h + b_c)    o = sig(W_o x + U_o h + b_o)
///   c <- f*c + i*g                   h <- o*tanh(c)
template <typename T, Backend B = default_backend>
class LSTMLayer final : public Layer<T, B> {
public:
    LSTMLayer(std::size_t in_size, std::size_t hidden_size)
        : Layer<T, B>(in_size, hidden_size),
          kernel_(4 * hidden_size, in_size),
          recurrent_(4 * hidden_size, hidden_size),
          bias_(4 * hidden_size),
          h_(hidden_size),
          c_(hidden_size),
          gates_(4 * hidden_size),
          scratch_(hidden_size) {}

    LayerKind kind() const noexcept override { return LayerKind::lstm; }

    void forward(std::span<const T> in, std::span<T> out) noexcept override {
        layers::lstm_step<B, T, dynamic_size, dynamic_size>(kernel_.view(), recurrent_.view(), bias_.span(), in,
                                                            h_.span(), c_.span(), gates_.span(), scratch_.span());
        std::copy(h_.data(), h_.data() + h_.size(), out.begin());
    }

    void reset() noexcept override {
        h_.fill(T{0});
        c_.fill(T{0});
    }

    /// [4H][in], gate blocks i, f, c, o.
    void set_weights(std::span<const T> w) { this->copy_weights(w, kernel_.flat(), "lstm kernel"); }
    /// [4H][H], gate blocks i, f, c, o.
    void set_recurrent_weights(std::span<const T> u) {
        this->copy_weights(u, recurrent_.flat(), "lstm recurrent kernel");
    }
    void set_bias(std::span<const T> b) { this->copy_weights(b, bias_.span(), "lstm bias"); }

    std::span<const T> hidden_state() const noexcept { return h_.span(); }
    std::span<const T> cell_state() const noexcept { return c_.span(); }
    /// Activated gates (i, f, g, o) from the last forward call.
    std::span<const T> gates() const noexcept { return gates_.span(); }

private:
    Mat<T> kernel_;
    Mat<T> recurrent_;
    Vec<T> bias_;
    Vec<T> h_;
    Vec<T> c_;
    Vec<T> gates_;
    Vec<T> scratch_;
};

} // namespace rtnn

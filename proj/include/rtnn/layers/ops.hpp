#pragma once

// Per-frame layer math, written once and shared by the run-time layers and
// the compile-time layers. Sizes are template extents: `dynamic_size` for the
// run-time API, constants for the compile-time API.
//
// Weight layouts (row-major, output channel major):
//   dense   W [out][in]
//   conv1d  W [tap][out][in], tap 0 multiplies the current frame
//   lstm    W [4H][in], U [4H][H], b [4H], gate blocks ordered i, f, c, o
//   gru     W [3H][in], U [3H][H], b [3H], b_rec [3H], gate blocks z, r, h

#include <rtnn/kernel/kernel.hpp>
#include <rtnn/layers/layer_kind.hpp>

#include <algorithm>
#include <cstddef>
#include <span>

namespace rtnn::layers {

using kernel::Unary;

template <std::size_t N, std::size_t Factor>
inline constexpr std::size_t scaled_extent = N == dynamic_size ? dynamic_size : N * Factor;

template <std::size_t N, typename T>
constexpr std::span<T, N> part(T* p, std::size_t n) noexcept {
    return std::span<T, N>(p, n);
}

template <Backend B, typename T, std::size_t In, std::size_t Out>
inline void dense_step(MatView<T, Out, In> w, std::span<const T, Out> b, std::span<const T, In> x,
                       std::span<T, Out> out) noexcept {
    kernel::affine<B>(w, x, b, out);
}

/// Ring buffer of the last (K-1)*d + 1 input frames.
template <typename T, std::size_t In>
struct ConvHistory {
    std::span<T> frames; // capacity * in values
    std::size_t capacity;
    std::size_t& head; // slot holding the newest frame
};

template <Backend B, typename T, std::size_t In, std::size_t Out>
inline void conv1d_step(const T* taps, std::size_t kernel_size, std::size_t dilation, std::span<const T, Out> b,
                        ConvHistory<T, In> hist, std::span<const T, In> x, std::span<T, Out> out) noexcept {
    const std::size_t in = x.size();
    const std::size_t n_out = out.size();
    std::size_t& head = hist.head;
    head = head + 1 == hist.capacity ? 0 : head + 1;
    std::copy(x.begin(), x.end(), hist.frames.begin() + head * in);

    std::copy(b.begin(), b.end(), out.begin());
    std::size_t slot = head;
    for (std::size_t k = 0; k < kernel_size; ++k) {
        MatView<T, Out, In> w(taps + k * n_out * in, n_out, in);
        kernel::affine<B>(w, part<In>(static_cast<const T*>(hist.frames.data() + slot * in), in),
                          std::span<const T, Out>(out), out);
        slot = slot >= dilation ? slot - dilation : slot + hist.capacity - dilation;
    }
}

template <Backend B, typename T, std::size_t In, std::size_t H>
inline void lstm_step(MatView<T, scaled_extent<H, 4>, In> w, MatView<T, scaled_extent<H, 4>, H> u,
                      std::span<const T, scaled_extent<H, 4>> b, std::span<const T, In> x, std::span<T, H> h,
                      std::span<T, H> c, std::span<T, scaled_extent<H, 4>> gates, std::span<T, H> scratch) noexcept {
    const std::size_t n = h.size();
    kernel::affine<B>(w, x, b, gates);
    kernel::affine<B>(u, std::span<const T, H>(h), std::span<const T, scaled_extent<H, 4>>(gates), gates);

    const auto i = part<H>(gates.data(), n);
    const auto f = part<H>(gates.data() + n, n);
    const auto g = part<H>(gates.data() + 2 * n, n);
    const auto o = part<H>(gates.data() + 3 * n, n);
    kernel::map_unary<B, Unary::sigmoid>(part<scaled_extent<H, 2>>(gates.data(), 2 * n),
                                         part<scaled_extent<H, 2>>(gates.data(), 2 * n));
    kernel::map_unary<B, Unary::tanh>(g, g);
    kernel::map_unary<B, Unary::sigmoid>(o, o);

    // Activated gates stay in `gates`; `scratch` holds i*g, then tanh(c).
    kernel::hadamard<B>(i, g, scratch);
    kernel::hadamard<B>(f, c, c);
    kernel::add<B>(c, scratch, c);
    kernel::map_unary<B, Unary::tanh>(c, scratch);
    kernel::hadamard<B>(o, scratch, h);
}

template <Backend B, typename T, std::size_t In, std::size_t H>
inline void gru_step(MatView<T, scaled_extent<H, 3>, In> w, MatView<T, scaled_extent<H, 3>, H> u,
                     std::span<const T, scaled_extent<H, 3>> b, std::span<const T, scaled_extent<H, 3>> b_rec,
                     std::span<const T, In> x, std::span<T, H> h, std::span<T, scaled_extent<H, 3>> xg,
                     std::span<T, scaled_extent<H, 3>> hg) noexcept {
    const std::size_t n = h.size();
    kernel::affine<B>(w, x, b, xg);
    kernel::affine<B>(u, std::span<const T, H>(h), b_rec, hg);

    const auto zr = part<scaled_extent<H, 2>>(xg.data(), 2 * n);
    kernel::add<B>(zr, part<scaled_extent<H, 2>>(hg.data(), 2 * n), zr);
    kernel::map_unary<B, Unary::sigmoid>(zr, zr);

    const auto z = part<H>(xg.data(), n);
    const auto r = part<H>(xg.data() + n, n);
    const auto cand = part<H>(xg.data() + 2 * n, n);
    const auto rec_cand = part<H>(hg.data() + 2 * n, n);
    kernel::hadamard<B>(r, rec_cand, rec_cand);
    kernel::add<B>(cand, rec_cand, cand);
    kernel::map_unary<B, Unary::tanh>(cand, cand);

    // h = z*h + (1 - z)*cand
    kernel::blend<B>(z, h, cand, h);
}

template <Backend B, typename T, std::size_t N>
inline void softmax_step(std::span<const T, N> x, std::span<T, N> out) noexcept {
    T max = x[0];
    for (std::size_t i = 1; i < x.size(); ++i) max = std::max(max, x[i]);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - max;
    kernel::map_unary<B, Unary::exp>(out, out);
    T sum{0};
    for (std::size_t i = 0; i < out.size(); ++i) sum += out[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= sum;
}

template <Backend B, LayerKind K, typename T, std::size_t N>
inline void activation_step(std::span<const T, N> x, std::span<T, N> out) noexcept {
    static_assert(is_activation(K));
    if constexpr (K == LayerKind::tanh) kernel::map_unary<B, Unary::tanh>(x, out);
    else if constexpr (K == LayerKind::relu) kernel::map_unary<B, Unary::relu>(x, out);
    else if constexpr (K == LayerKind::sigmoid) kernel::map_unary<B, Unary::sigmoid>(x, out);
    else softmax_step<B>(x, out);
}

} // namespace rtnn::layers

#pragma once

// Allocation-free compute primitives shared by every layer.
//
// All primitives are templated on the backend and on the span extents, so a
// static model that passes fixed-extent spans gets fully constant loop bounds
// after inlining. Element types are deduced from the output argument only;
// inputs convert implicitly.
//
// Output buffers may alias an input exactly (same pointer, same length) but
// must not partially overlap one.
//
// Reductions keep `reduction_lanes<T>` partial sums: element j goes into
// partial sum j % lanes, partial sums are folded by halving. The scalar and
// vectorized backends follow this order exactly, so they agree bit for bit.

#include <rtnn/kernel/backend.hpp>
#include <rtnn/kernel/buffers.hpp>

#include <cassert>
#include <cmath>
#include <cstring>
#include <span>
#include <type_traits>

namespace rtnn::kernel {

enum class Unary { tanh, sigmoid, relu, exp };

namespace detail {

template <typename T>
struct simd_reg;
template <>
struct simd_reg<float> {
    typedef float type __attribute__((vector_size(32)));
};
template <>
struct simd_reg<double> {
    typedef double type __attribute__((vector_size(32)));
};

template <typename T>
using reg_t = typename simd_reg<T>::type;

template <typename T>
inline reg_t<T> load(const T* p) noexcept {
    reg_t<T> v;
    std::memcpy(&v, p, sizeof(v));
    return v;
}

template <typename T>
inline void store(T* p, reg_t<T> v) noexcept {
    std::memcpy(p, &v, sizeof(v));
}

template <typename T>
inline T fold_lanes(T* acc) noexcept {
    for (std::size_t width = reduction_lanes<T> / 2; width > 0; width /= 2)
        for (std::size_t l = 0; l < width; ++l) acc[l] += acc[l + width];
    return acc[0];
}

template <typename T>
inline T dot_scalar(const T* a, const T* b, std::size_t n) noexcept {
    constexpr std::size_t lanes = reduction_lanes<T>;
    const std::size_t body = n - n % lanes;
    T acc[lanes] = {};
    for (std::size_t j = 0; j < body; j += lanes)
        for (std::size_t l = 0; l < lanes; ++l) acc[l] += a[j + l] * b[j + l];
    for (std::size_t l = 0; l < n % lanes; ++l) acc[l] += a[body + l] * b[body + l];
    return fold_lanes(acc);
}

template <typename T>
inline T dot_vectorized(const T* a, const T* b, std::size_t n) noexcept {
    constexpr std::size_t lanes = reduction_lanes<T>;
    const std::size_t body = n - n % lanes;
    reg_t<T> vacc = {};
    for (std::size_t j = 0; j < body; j += lanes) vacc += load(a + j) * load(b + j);
    T acc[lanes];
    store(acc, vacc);
    for (std::size_t l = 0; l < n % lanes; ++l) acc[l] += a[body + l] * b[body + l];
    return fold_lanes(acc);
}

template <typename T>
inline T sigmoid(T v) noexcept {
    return T{1} / (T{1} + std::exp(-v));
}

template <typename T>
inline T relu(T v) noexcept {
    return v > T{0} ? v : T{0};
}

template <Unary F, typename T>
inline T apply(T v) noexcept {
    if constexpr (F == Unary::tanh) return std::tanh(v);
    else if constexpr (F == Unary::sigmoid) return sigmoid(v);
    else if constexpr (F == Unary::relu) return relu(v);
    else return std::exp(v);
}

// Elementwise driver: `vec_op` on full registers, `op` on the tail.
template <Backend B, typename T, typename VecOp, typename Op>
inline void elementwise(std::size_t n, VecOp vec_op, Op op) noexcept {
    std::size_t i = 0;
    if constexpr (B == Backend::vectorized) {
        constexpr std::size_t lanes = reduction_lanes<T>;
        for (; i + lanes <= n; i += lanes) vec_op(i);
    }
    for (; i < n; ++i) op(i);
}

} // namespace detail

/// out = W x + b, with W row-major [rows][cols]. `b` may alias `out`.
template <Backend B, typename T, std::size_t R, std::size_t C>
inline void affine(MatView<T, R, C> w, std::type_identity_t<std::span<const T, C>> x,
                   std::type_identity_t<std::span<const T, R>> b, std::span<T, R> out) noexcept {
    assert(x.size() == w.cols() && b.size() == w.rows() && out.size() == w.rows());
    const std::size_t cols = w.cols();
    for (std::size_t i = 0; i < w.rows(); ++i) {
        const T* row = w.data() + i * cols;
        T acc;
        if constexpr (B == Backend::vectorized) acc = detail::dot_vectorized(row, x.data(), cols);
        else acc = detail::dot_scalar(row, x.data(), cols);
        out[i] = acc + b[i];
    }
}

/// out = a * b elementwise.
template <Backend B, typename T, std::size_t N>
inline void hadamard(std::type_identity_t<std::span<const T, N>> a, std::type_identity_t<std::span<const T, N>> b,
                     std::span<T, N> out) noexcept {
    assert(a.size() == out.size() && b.size() == out.size());
    detail::elementwise<B, T>(
        out.size(),
        [&](std::size_t i) { detail::store(&out[i], detail::load(&a[i]) * detail::load(&b[i])); },
        [&](std::size_t i) { out[i] = a[i] * b[i]; });
}

/// out = a + b elementwise.
template <Backend B, typename T, std::size_t N>
inline void add(std::type_identity_t<std::span<const T, N>> a, std::type_identity_t<std::span<const T, N>> b,
                std::span<T, N> out) noexcept {
    assert(a.size() == out.size() && b.size() == out.size());
    detail::elementwise<B, T>(
        out.size(),
        [&](std::size_t i) { detail::store(&out[i], detail::load(&a[i]) + detail::load(&b[i])); },
        [&](std::size_t i) { out[i] = a[i] + b[i]; });
}

/// out = b + t * (a - b): t selects a, 1 - t selects b.
template <Backend B, typename T, std::size_t N>
inline void blend(std::type_identity_t<std::span<const T, N>> t, std::type_identity_t<std::span<const T, N>> a,
                  std::type_identity_t<std::span<const T, N>> b, std::span<T, N> out) noexcept {
    assert(t.size() == out.size() && a.size() == out.size() && b.size() == out.size());
    detail::elementwise<B, T>(
        out.size(),
        [&](std::size_t i) {
            const auto vb = detail::load(&b[i]);
            detail::store(&out[i], vb + detail::load(&t[i]) * (detail::load(&a[i]) - vb));
        },
        [&](std::size_t i) { out[i] = b[i] + t[i] * (a[i] - b[i]); });
}

/// out = f(x) elementwise. Transcendentals go through the C++ math library
/// on both backends; only relu has a register-wide path.
template <Backend B, Unary F, typename T, std::size_t N>
inline void map_unary(std::type_identity_t<std::span<const T, N>> x, std::span<T, N> out) noexcept {
    assert(x.size() == out.size());
    if constexpr (F == Unary::relu) {
        detail::elementwise<B, T>(
            out.size(),
            [&](std::size_t i) {
                const auto v = detail::load(&x[i]);
                detail::store(&out[i], v > T{0} ? v : detail::reg_t<T>{} );
            },
            [&](std::size_t i) { out[i] = detail::relu(x[i]); });
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::apply<F>(x[i]);
    }
}

/// Run-time selection of the unary function.
template <Backend B, typename T, std::size_t N>
inline void map_unary(Unary f, std::type_identity_t<std::span<const T, N>> x, std::span<T, N> out) noexcept {
    switch (f) {
    case Unary::tanh: map_unary<B, Unary::tanh, T, N>(x, out); break;
    case Unary::sigmoid: map_unary<B, Unary::sigmoid, T, N>(x, out); break;
    case Unary::relu: map_unary<B, Unary::relu, T, N>(x, out); break;
    case Unary::exp: map_unary<B, Unary::exp, T, N>(x, out); break;
    }
}

} // namespace rtnn::kernel

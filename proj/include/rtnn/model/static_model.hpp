#pragma once

// Compile-time model API. Layer sizes, kernel sizes and precision are template
// parameters, every buffer is a member array, and the forward chain is a
// sequence of direct calls the compiler can inline and unroll:
//
//   rtnn::ModelT<double, 3, 1,
//       rtnn::DenseT<double, 3, 4>,
//       rtnn::TanhActivationT<double, 4>,
//       rtnn::DenseT<double, 4, 1>> model;
//   model.load(rtnn::load_model_file("model.json"));
//   model.reset();
//   double y = model.forward(input);
//
// The object itself never touches the heap. load() parses through the shared
// model-format code, which does allocate.

#include <rtnn/error.hpp>
#include <rtnn/format/model_spec.hpp>
#include <rtnn/layers/ops.hpp>

#include <algorithm>
#include <array>
#include <istream>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>

namespace rtnn {

namespace static_detail {

inline void expect_layer(const LayerSpec& ls, std::size_t index, LayerKind kind, std::size_t in, std::size_t out) {
    if (ls.kind != kind)
        throw ArchitectureMismatch(index, "expected " + std::string(to_string(kind)) + ", model has " +
                                              std::string(to_string(ls.kind)));
    if (ls.in_size != in || ls.out_size != out)
        throw ArchitectureMismatch(index, "expected shape [" + std::to_string(in) + ", " + std::to_string(out) +
                                              "], model has [" + std::to_string(ls.in_size) + ", " +
                                              std::to_string(ls.out_size) + "]");
}

template <typename T, std::size_t N>
void install(std::array<T, N>& dst, const std::vector<double>& src) {
    // Sizes were checked by validation and expect_layer.
    std::copy(src.begin(), src.end(), dst.begin());
}

} // namespace static_detail

template <typename T, std::size_t In, std::size_t Out, Backend B = default_backend>
class DenseT {
public:
    static constexpr LayerKind kind = LayerKind::dense;
    static constexpr std::size_t in_size = In;
    static constexpr std::size_t out_size = Out;

    void forward(std::span<const T, In> x, std::span<T, Out> out) noexcept {
        layers::dense_step<B, T, In, Out>(MatView<T, Out, In>(weights_.data()), bias_, x, out);
    }
    void reset() noexcept {}

    static void check(const LayerSpec& ls, std::size_t index) {
        static_detail::expect_layer(ls, index, kind, In, Out);
    }
    void install(const LayerSpec& ls) {
        static_detail::install(weights_, ls.weights.kernel);
        static_detail::install(bias_, ls.weights.bias);
    }

    /// Row-major [out][in].
    void set_weights(std::span<const T, Out * In> w) noexcept { std::copy(w.begin(), w.end(), weights_.begin()); }
    void set_bias(std::span<const T, Out> b) noexcept { std::copy(b.begin(), b.end(), bias_.begin()); }

private:
    alignas(32) std::array<T, Out * In> weights_{};
    alignas(32) std::array<T, Out> bias_{};
};

template <typename T, std::size_t In, std::size_t Out, std::size_t KernelSize, std::size_t Dilation = 1,
          Backend B = default_backend>
class Conv1DT {
    static_assert(KernelSize >= 1 && Dilation >= 1);

public:
    static constexpr LayerKind kind = LayerKind::conv1d;
    static constexpr std::size_t in_size = In;
    static constexpr std::size_t out_size = Out;
    static constexpr std::size_t history_capacity = (KernelSize - 1) * Dilation + 1;

    void forward(std::span<const T, In> x, std::span<T, Out> out) noexcept {
        layers::conv1d_step<B, T, In, Out>(taps_.data(), KernelSize, Dilation, bias_,
                                           layers::ConvHistory<T, In>{history_, history_capacity, head_}, x, out);
    }

    void reset() noexcept {
        history_.fill(T{0});
        head_ = 0;
    }

    static void check(const LayerSpec& ls, std::size_t index) {
        static_detail::expect_layer(ls, index, kind, In, Out);
        if (ls.kernel_size != KernelSize || ls.dilation != Dilation)
            throw ArchitectureMismatch(index, "expected kernel_size " + std::to_string(KernelSize) + ", dilation " +
                                                  std::to_string(Dilation) + ", model has " +
                                                  std::to_string(ls.kernel_size) + ", " +
                                                  std::to_string(ls.dilation));
    }
    void install(const LayerSpec& ls) {
        static_detail::install(taps_, ls.weights.kernel);
        static_detail::install(bias_, ls.weights.bias);
    }

private:
    alignas(32) std::array<T, KernelSize * Out * In> taps_{};
    alignas(32) std::array<T, Out> bias_{};
    alignas(32) std::array<T, history_capacity * In> history_{};
    std::size_t head_ = 0;
};

template <typename T, std::size_t In, std::size_t Hidden, Backend B = default_backend>
class LSTMLayerT {
public:
    static constexpr LayerKind kind = LayerKind::lstm;
    static constexpr std::size_t in_size = In;
    static constexpr std::size_t out_size = Hidden;

    void forward(std::span<const T, In> x, std::span<T, Hidden> out) noexcept {
        layers::lstm_step<B, T, In, Hidden>(MatView<T, 4 * Hidden, In>(kernel_.data()),
                                            MatView<T, 4 * Hidden, Hidden>(recurrent_.data()), bias_, x, h_, c_,
                                            gates_, scratch_);
        std::copy(h_.begin(), h_.end(), out.begin());
    }

    void reset() noexcept {
        h_.fill(T{0});
        c_.fill(T{0});
    }

    static void check(const LayerSpec& ls, std::size_t index) {
        static_detail::expect_layer(ls, index, kind, In, Hidden);
    }
    void install(const LayerSpec& ls) {
        static_detail::install(kernel_, ls.weights.kernel);
        static_detail::install(recurrent_, ls.weights.recurrent_kernel);
        static_detail::install(bias_, ls.weights.bias);
    }

private:
    alignas(32) std::array<T, 4 * Hidden * In> kernel_{};
    alignas(32) std::array<T, 4 * Hidden * Hidden> recurrent_{};
    alignas(32) std::array<T, 4 * Hidden> bias_{};
    alignas(32) std::array<T, Hidden> h_{};
    alignas(32) std::array<T, Hidden> c_{};
    alignas(32) std::array<T, 4 * Hidden> gates_{};
    alignas(32) std::array<T, Hidden> scratch_{};
};

template <typename T, std::size_t In, std::size_t Hidden, Backend B = default_backend>
class GRULayerT {
public:
    static constexpr LayerKind kind = LayerKind::gru;
    static constexpr std::size_t in_size = In;
    static constexpr std::size_t out_size = Hidden;

    void forward(std::span<const T, In> x, std::span<T, Hidden> out) noexcept {
        layers::gru_step<B, T, In, Hidden>(MatView<T, 3 * Hidden, In>(kernel_.data()),
                                           MatView<T, 3 * Hidden, Hidden>(recurrent_.data()), bias_,
                                           bias_recurrent_, x, h_, xg_, hg_);
        std::copy(h_.begin(), h_.end(), out.begin());
    }

    void reset() noexcept { h_.fill(T{0}); }

    static void check(const LayerSpec& ls, std::size_t index) {
        static_detail::expect_layer(ls, index, kind, In, Hidden);
    }
    void install(const LayerSpec& ls) {
        static_detail::install(kernel_, ls.weights.kernel);
        static_detail::install(recurrent_, ls.weights.recurrent_kernel);
        static_detail::install(bias_, ls.weights.bias);
        static_detail::install(bias_recurrent_, ls.weights.bias_recurrent);
    }

private:
    alignas(32) std::array<T, 3 * Hidden * In> kernel_{};
    alignas(32) std::array<T, 3 * Hidden * Hidden> recurrent_{};
    alignas(32) std::array<T, 3 * Hidden> bias_{};
    alignas(32) std::array<T, 3 * Hidden> bias_recurrent_{};
    alignas(32) std::array<T, Hidden> h_{};
    alignas(32) std::array<T, 3 * Hidden> xg_{};
    alignas(32) std::array<T, 3 * Hidden> hg_{};
};

template <typename T, LayerKind Kind, std::size_t N, Backend B = default_backend>
class ActivationT {
    static_assert(is_activation(Kind));

public:
    static constexpr LayerKind kind = Kind;
    static constexpr std::size_t in_size = N;
    static constexpr std::size_t out_size = N;

    void forward(std::span<const T, N> x, std::span<T, N> out) noexcept {
        layers::activation_step<B, Kind, T, N>(x, out);
    }
    void reset() noexcept {}

    static void check(const LayerSpec& ls, std::size_t index) { static_detail::expect_layer(ls, index, kind, N, N); }
    void install(const LayerSpec&) noexcept {}
};

template <typename T, std::size_t N, Backend B = default_backend>
using TanhActivationT = ActivationT<T, LayerKind::tanh, N, B>;
template <typename T, std::size_t N, Backend B = default_backend>
using ReLuActivationT = ActivationT<T, LayerKind::relu, N, B>;
template <typename T, std::size_t N, Backend B = default_backend>
using SigmoidActivationT = ActivationT<T, LayerKind::sigmoid, N, B>;
template <typename T, std::size_t N, Backend B = default_backend>
using SoftmaxActivationT = ActivationT<T, LayerKind::softmax, N, B>;

namespace static_detail {

template <std::size_t In, typename... Layers>
struct chains : std::true_type {};

template <std::size_t In, typename First, typename... Rest>
struct chains<In, First, Rest...>
    : std::bool_constant<First::in_size == In && chains<First::out_size, Rest...>::value> {};

template <typename... Layers>
struct last_out;
template <typename L>
struct last_out<L> : std::integral_constant<std::size_t, L::out_size> {};
template <typename L, typename... Rest>
struct last_out<L, Rest...> : last_out<Rest...> {};

} // namespace static_detail

template <typename T, std::size_t In, std::size_t Out, typename... Layers>
class ModelT {
    static_assert(sizeof...(Layers) > 0, "a model needs at least one layer");
    static_assert(static_detail::chains<In, Layers...>::value,
                  "layer shapes do not chain: each layer's in_size must equal the previous out_size");
    static_assert(static_detail::last_out<Layers...>::value == Out, "last layer's out_size must equal Out");

    static constexpr std::size_t num_layers = sizeof...(Layers);
    static constexpr std::size_t width = std::max({std::size_t{1}, Layers::out_size...});
    using layer_tuple = std::tuple<Layers...>;

public:
    using value_type = T;
    static constexpr std::size_t in_size = In;
    static constexpr std::size_t out_size = Out;

    /// Checks the spec against the composition, then installs weights and
    /// zeroes state. Throws ArchitectureMismatch naming the first divergent
    /// layer of the activation-expanded list, or LoadError on precision mismatch.
    void load(const ModelSpec& spec) {
        validate_chain(spec);
        if (spec.precision != precision_of<T>)
            throw LoadError("model precision is " + std::string(to_string(spec.precision)) +
                            " but the static model uses " + std::string(to_string(precision_of<T>)));
        const std::vector<LayerSpec> flat = expand_activations(spec);
        check_layers(flat, std::index_sequence_for<Layers...>{});
        if (flat.size() != num_layers)
            throw ArchitectureMismatch(std::min(flat.size(), num_layers),
                                       "expected " + std::to_string(num_layers) + " layers, model has " +
                                           std::to_string(flat.size()));
        std::apply([&](auto&... layer) {
            std::size_t i = 0;
            (layer.install(flat[i++]), ...);
        }, layers_);
        reset();
    }

    void parse_json(std::istream& in) { load(parse_model_json(in)); }

    void reset() noexcept {
        std::apply([](auto&... layer) { (layer.reset(), ...); }, layers_);
    }

    /// Runs one frame. The result aliases internal storage until the next call.
    std::span<const T, Out> forward(std::span<const T, In> input) noexcept { return run<0>(input); }

    T forward(const T* input) noexcept { return forward(std::span<const T, In>(input, In))[0]; }

    template <std::size_t I>
    auto& get() noexcept {
        return std::get<I>(layers_);
    }

private:
    template <std::size_t... I>
    void check_layers(const std::vector<LayerSpec>& flat, std::index_sequence<I...>) const {
        ((I < flat.size() ? std::tuple_element_t<I, layer_tuple>::check(flat[I], I) : void()), ...);
    }

    template <std::size_t I, std::size_t N>
    std::span<const T, Out> run(std::span<const T, N> in) noexcept {
        using L = std::tuple_element_t<I, layer_tuple>;
        std::span<T, L::out_size> out(buffers_[I % 2].data(), L::out_size);
        std::get<I>(layers_).forward(in, out);
        if constexpr (I + 1 < num_layers) return run<I + 1>(std::span<const T, L::out_size>(out));
        else return out;
    }

    layer_tuple layers_;
    alignas(32) std::array<std::array<T, width>, 2> buffers_{};
};

} // namespace rtnn

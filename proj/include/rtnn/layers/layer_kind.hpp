#pragma once

#include <optional>
#include <string_view>

namespace rtnn {

enum class LayerKind { dense, conv1d, lstm, gru, tanh, relu, sigmoid, softmax };

constexpr bool is_activation(LayerKind k) noexcept {
    return k == LayerKind::tanh || k == LayerKind::relu || k == LayerKind::sigmoid || k == LayerKind::softmax;
}

constexpr bool is_stateful(LayerKind k) noexcept {
    return k == LayerKind::conv1d || k == LayerKind::lstm || k == LayerKind::gru;
}

constexpr std::string_view to_string(LayerKind k) noexcept {
    switch (k) {
    case LayerKind::dense: return "dense";
    case LayerKind::conv1d: return "conv1d";
    case LayerKind::lstm: return "lstm";
    case LayerKind::gru: return "gru";
    case LayerKind::tanh: return "tanh";
    case LayerKind::relu: return "relu";
    case LayerKind::sigmoid: return "sigmoid";
    case LayerKind::softmax: return "softmax";
    }
    return "?";
}

constexpr std::optional<LayerKind> layer_kind_from_string(std::string_view s) noexcept {
    for (auto k : {LayerKind::dense, LayerKind::conv1d, LayerKind::lstm, LayerKind::gru, LayerKind::tanh,
                   LayerKind::relu, LayerKind::sigmoid, LayerKind::softmax})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

inline constexpr LayerKind all_layer_kinds[] = {LayerKind::dense, LayerKind::conv1d, LayerKind::lstm,
                                                LayerKind::gru,   LayerKind::tanh,   LayerKind::relu,
                                                LayerKind::sigmoid, LayerKind::softmax};

} // namespace rtnn

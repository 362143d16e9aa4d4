#pragma once

#include <rtnn/error.hpp>
#include <rtnn/kernel/backend.hpp>
#include <rtnn/layers/layer_kind.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>

namespace rtnn {

/// Base class of the run-time layers. A layer consumes one frame of
/// `in_size()` values and writes one frame of `out_size()` values per call.
/// `in` and `out` must not overlap.
template <typename T, Backend B = default_backend>
class Layer {
public:
    Layer(std::size_t in_size, std::size_t out_size) noexcept : in_size_(in_size), out_size_(out_size) {}
    virtual ~Layer() = default;

    Layer(const Layer&) = delete;
    Layer& operator=(const Layer&) = delete;

    virtual LayerKind kind() const noexcept = 0;
    virtual void forward(std::span<const T> in, std::span<T> out) noexcept = 0;

    /// Clears recurrent state and history. No-op for stateless layers.
    virtual void reset() noexcept {}

    std::size_t in_size() const noexcept { return in_size_; }
    std::size_t out_size() const noexcept { return out_size_; }

protected:
    static void copy_weights(std::span<const T> src, std::span<T> dst, const char* what) {
        if (src.size() != dst.size())
            throw LoadError(std::string(what) + ": expected " + std::to_string(dst.size()) + " values, got " +
                            std::to_string(src.size()));
        std::copy(src.begin(), src.end(), dst.begin());
    }

private:
    std::size_t in_size_;
    std::size_t out_size_;
};

} // namespace rtnn

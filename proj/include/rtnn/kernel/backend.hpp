#pragma once

#include <cstddef>
#include <string_view>

namespace rtnn {

/// Compute backend used by the kernel primitives. Both are always compiled;
/// the default used by models is fixed at build time (RTNN_BACKEND).
enum class Backend { scalar, vectorized };

#if defined(RTNN_DEFAULT_BACKEND_SCALAR)
inline constexpr Backend default_backend = Backend::scalar;
#else
inline constexpr Backend default_backend = Backend::vectorized;
#endif

constexpr std::string_view to_string(Backend b) noexcept {
    return b == Backend::scalar ? "scalar" : "vectorized";
}

/// Number of partial sums kept by every reduction. Matches one 256-bit
/// register so the vectorized backend can keep one accumulator per lane and
/// still reproduce the scalar backend bit for bit.
template <typename T>
inline constexpr std::size_t reduction_lanes = 32 / sizeof(T);

} // namespace rtnn

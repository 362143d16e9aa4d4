#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace rtnn {

inline constexpr std::size_t dynamic_size = std::dynamic_extent;

/// Read-only row-major view of a [rows x cols] matrix. Either dimension may be
/// a compile-time constant, in which case rows()/cols() fold to constants.
template <typename T, std::size_t Rows = dynamic_size, std::size_t Cols = dynamic_size>
class MatView {
public:
    constexpr MatView(const T* data, std::size_t rows, std::size_t cols) noexcept
        : data_(data), rows_(rows), cols_(cols) {
        assert(Rows == dynamic_size || rows == Rows);
        assert(Cols == dynamic_size || cols == Cols);
    }

    constexpr explicit MatView(const T* data) noexcept
        requires(Rows != dynamic_size && Cols != dynamic_size)
        : data_(data), rows_(Rows), cols_(Cols) {}

    constexpr std::size_t rows() const noexcept {
        if constexpr (Rows != dynamic_size) return Rows;
        else return rows_;
    }
    constexpr std::size_t cols() const noexcept {
        if constexpr (Cols != dynamic_size) return Cols;
        else return cols_;
    }

    constexpr const T* data() const noexcept { return data_; }

    constexpr std::span<const T, Cols> row(std::size_t i) const noexcept {
        assert(i < rows());
        return std::span<const T, Cols>(data_ + i * cols(), cols());
    }

    /// Rows [first, first + Count) as a sub-view.
    template <std::size_t Count = dynamic_size>
    constexpr MatView<T, Count, Cols> rows_slice(std::size_t first, std::size_t count = Count) const noexcept {
        assert(first + count <= rows());
        return MatView<T, Count, Cols>(data_ + first * cols(), count, cols());
    }

private:
    const T* data_;
    std::size_t rows_;
    std::size_t cols_;
};

/// Heap-backed vector whose length is fixed at construction.
template <typename T>
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t len) : data_(len, T{0}) {}
    Vec(std::initializer_list<T> values) : data_(values) {}

    std::size_t size() const noexcept { return data_.size(); }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    T& operator[](std::size_t i) noexcept {
        assert(i < size());
        return data_[i];
    }
    const T& operator[](std::size_t i) const noexcept {
        assert(i < size());
        return data_[i];
    }

    std::span<T> span() noexcept { return data_; }
    std::span<const T> span() const noexcept { return data_; }
    operator std::span<T>() noexcept { return data_; }
    operator std::span<const T>() const noexcept { return data_; }

    void fill(T value) noexcept { std::fill(data_.begin(), data_.end(), value); }

private:
    std::vector<T> data_;
};

/// Heap-backed row-major matrix, [rows][cols], dimensions fixed at construction.
/// Rows are output channels, columns are input channels.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{0}) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    T& operator()(std::size_t r, std::size_t c) noexcept {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const T& operator()(std::size_t r, std::size_t c) const noexcept {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }

    MatView<T> view() const noexcept { return MatView<T>(data_.data(), rows_, cols_); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

} // namespace rtnn

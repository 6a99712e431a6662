#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ghostgrover/error.hpp"

namespace ghostgrover {

inline bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

inline void require_power_of_two(std::size_t n, const char* what) {
    if (!is_power_of_two(n)) {
        throw InvalidArgument(std::string(what) + " must be a power of two (got " + std::to_string(n) + ")");
    }
}

// Square m x m grid, row-major. Pixel (row, col) has flat index row * m + col,
// origin top-left. Throughout the library "y" is the row and "x" the column.
template <typename T>
class Grid {
public:
    Grid() = default;
    explicit Grid(std::size_t side, T fill = T{}) : side_(side), data_(side * side, fill) {}
    Grid(std::size_t side, std::vector<T> values) : side_(side), data_(std::move(values)) {
        if (data_.size() != side_ * side_) {
            throw InvalidArgument("grid data length " + std::to_string(data_.size()) + " does not match side " +
                                  std::to_string(side_));
        }
    }

    std::size_t side() const noexcept { return side_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t row, std::size_t col) { return data_[row * side_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return data_[row * side_ + col]; }
    T& operator[](std::size_t j) { return data_[j]; }
    const T& operator[](std::size_t j) const { return data_[j]; }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }
    const std::vector<T>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t side_ = 0;
    std::vector<T> data_;
};

using Image = Grid<double>;

}  // namespace ghostgrover
